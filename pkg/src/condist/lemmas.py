"""Decision procedures for the inequational congruence conditions.

Each per-triple checker returns a Verdict whose counterexample, when present,
re-verifies against the defining inclusion.  Whole-algebra wrappers quantify
over all congruence triples and count vacuously passing ones separately.
"""
from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence, Union

from .algebras import FiniteAlgebra, generate_subuniverse, product
from .congruences import (
    Congruence,
    CongruenceLattice,
    _as_lattice,
    congruence_lattice,
    factor_congruence_indices,
    quotient,
)
from .relations import Relation, alternating
from .verdicts import OrderReport, Verdict

RelLike = Union[Relation, Congruence]


def _rel(x: RelLike) -> Relation:
    return x.rel() if isinstance(x, Congruence) else x


def _first_missing(lhs: Relation, rhs: Relation) -> Optional[tuple[int, int]]:
    for x in range(lhs.left):
        extra = lhs.rows[x] & ~rhs.rows[x]
        if extra:
            return x, (extra & -extra).bit_length() - 1
    return None


def _first_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def check_trapezoid_triple(r: RelLike, s: RelLike, t: RelLike) -> Verdict:
    """Under r^s <= t, test r ^ (s o t o s) <= t."""
    r, s, t = _rel(r), _rel(s), _rel(t)
    if not r.meet(s).leq(t):
        return Verdict(True, checked=1, skipped_vacuous=1, vacuous=True)
    lhs = r.meet(s.compose(t).compose(s))
    bad = _first_missing(lhs, t)
    if bad is None:
        return Verdict(True, checked=1)
    x, y = bad
    s_op = s.opposite()
    u = v = None
    for cand in range(s.left):
        if not (s.rows[x] >> cand & 1):
            continue
        mask = t.rows[cand] & s_op.rows[y]
        if mask:
            u, v = cand, _first_bit(mask)
            break
    return Verdict(
        False, checked=1, counterexample={"x": x, "y": y, "u": u, "v": v}
    )


def check_shifting_triple(r: RelLike, s: RelLike, t: RelLike) -> Verdict:
    """The trapezoid condition with the middle factor weakened to r^t."""
    r, s, t = _rel(r), _rel(s), _rel(t)
    if not r.meet(s).leq(t):
        return Verdict(True, checked=1, skipped_vacuous=1, vacuous=True)
    mid = r.meet(t)
    lhs = r.meet(s.compose(mid).compose(s))
    bad = _first_missing(lhs, t)
    if bad is None:
        return Verdict(True, checked=1)
    x, y = bad
    s_op = s.opposite()
    u = v = None
    for cand in range(s.left):
        if not (s.rows[x] >> cand & 1):
            continue
        mask = mid.rows[cand] & s_op.rows[y]
        if mask:
            u, v = cand, _first_bit(mask)
            break
    return Verdict(
        False, checked=1, counterexample={"x": x, "y": y, "u": u, "v": v}
    )


def check_jonsson_triple(r: RelLike, s: RelLike, t: RelLike, n: int) -> Verdict:
    """r ^ (s o t) <= (r^s, r^t)_{n+1}; at n=1 this is the majority condition."""
    if n < 1:
        raise ValueError(f"order must be at least 1, got {n}")
    r, s, t = _rel(r), _rel(s), _rel(t)
    lhs = r.meet(s.compose(t))
    rhs = alternating(r.meet(s), r.meet(t), n + 1)
    bad = _first_missing(lhs, rhs)
    if bad is None:
        return Verdict(True, checked=1)
    x, y = bad
    mask = s.rows[x] & t.opposite().rows[y]
    u = _first_bit(mask) if mask else None
    return Verdict(False, checked=1, counterexample={"x": x, "y": y, "u": u, "n": n})


def check_theorem_ii_triple(r: RelLike, s: Relation, t: Relation, n: int) -> Verdict:
    """The doubled-factor inclusion for an equivalence r and reflexive s, t:
    r ^ (s o t) <= ((r ^ ~s) o (r ^ s), (r ^ t) o (r ^ ~t))_{n+1}."""
    if n < 1:
        raise ValueError(f"order must be at least 1, got {n}")
    r = _rel(r)
    if not r.is_equivalence():
        raise ValueError("first relation must be an equivalence")
    if not s.is_reflexive() or not t.is_reflexive():
        raise ValueError("second and third relations must be reflexive")
    lhs = r.meet(s.compose(t))
    x_fac = r.meet(s.opposite()).compose(r.meet(s))
    y_fac = r.meet(t).compose(r.meet(t.opposite()))
    rhs = alternating(x_fac, y_fac, n + 1)
    bad = _first_missing(lhs, rhs)
    if bad is None:
        return Verdict(True, checked=1)
    return Verdict(
        False, checked=1, counterexample={"x": bad[0], "y": bad[1], "n": n}
    )


def check_freyd(r: Relation, s: Relation, t: Relation) -> Verdict:
    """(r o s) ^ t <= (r ^ (t o ~s)) o s for r: X->Y, s: Y->Z, t: X->Z.

    A law of relation calculus over finite sets; a counterexample indicates
    an engine bug.
    """
    if r.right != s.left or r.left != t.left or s.right != t.right:
        raise ValueError("relations do not form a composable triangle")
    lhs = r.compose(s).meet(t)
    rhs = r.meet(t.compose(s.opposite())).compose(s)
    bad = _first_missing(lhs, rhs)
    if bad is None:
        return Verdict(True, checked=1)
    return Verdict(False, checked=1, counterexample={"x": bad[0], "y": bad[1]})


def check_permutes_with(r: RelLike, s: RelLike, t: RelLike) -> Verdict:
    """Under s o t <= r o s and r ^ s <= t, test s o t = t o s."""
    r, s, t = _rel(r), _rel(s), _rel(t)
    st = s.compose(t)
    if not (st.leq(r.compose(s)) and r.meet(s).leq(t)):
        return Verdict(True, checked=1, skipped_vacuous=1, vacuous=True)
    ts = t.compose(s)
    if st == ts:
        return Verdict(True, checked=1)
    bad = _first_missing(st, ts)
    side = "s;t"
    if bad is None:
        bad = _first_missing(ts, st)
        side = "t;s"
    return Verdict(
        False,
        checked=1,
        counterexample={"x": bad[0], "y": bad[1], "only_in": side},
    )


def check_factor_formula(
    f: Congruence,
    s: Congruence,
    t: Congruence,
    lattice: Optional[CongruenceLattice] = None,
) -> Verdict:
    """(F o S) ^ (F o T) = F o (S ^ T) for a certified factor congruence F."""
    if lattice is None:
        lattice = congruence_lattice(f.algebra)
    if lattice.index(f) not in factor_congruence_indices(lattice):
        raise ValueError("first congruence is not a factor relation")
    return _factor_formula_body(f.rel(), s, t)


def _factor_formula_body(frel: Relation, s: Congruence, t: Congruence) -> Verdict:
    srel, trel = s.rel(), t.rel()
    lhs = frel.compose(srel).meet(frel.compose(trel))
    rhs = frel.compose(srel.meet(trel))
    if not rhs.leq(lhs):
        bad = _first_missing(rhs, lhs)
        return Verdict(
            False,
            checked=1,
            counterexample={"x": bad[0], "y": bad[1], "direction": ">="},
        )
    bad = _first_missing(lhs, rhs)
    if bad is None:
        return Verdict(True, checked=1)
    return Verdict(
        False, checked=1, counterexample={"x": bad[0], "y": bad[1], "direction": "<="}
    )


def check_factor_formula_all(algebra_or_lattice) -> Verdict:
    """The factor formula over every factor congruence and congruence pair."""
    lattice = _as_lattice(algebra_or_lattice)
    factors = factor_congruence_indices(lattice)
    checked = 0
    for fi in factors:
        frel = lattice.elements[fi].rel()
        for s in lattice.elements:
            for t in lattice.elements:
                v = _factor_formula_body(frel, s, t)
                checked += 1
                if not v.holds:
                    ce = dict(v.counterexample)
                    ce["factor"] = fi
                    return Verdict(False, checked=checked, counterexample=ce)
    return Verdict(True, checked=checked)


def check_boolean_factors(algebra_or_lattice) -> Verdict:
    """The factor congruences form a Boolean algebra under ^ and o, with
    complement law (F ^ G)' = F' o G'."""
    lattice = _as_lattice(algebra_or_lattice)
    factors = factor_congruence_indices(lattice)
    rels = {i: lattice.elements[i].rel() for i in factors}
    fset = set(factors)
    checked = 0

    def compose_index(i: int, j: int) -> Optional[int]:
        comp = rels[i].compose(rels[j])
        for m in factors:
            if rels[m] == comp:
                return m
        return None

    complements: dict[int, int] = {}
    for i in factors:
        mates = [
            j
            for j in factors
            if lattice.meet(i, j) == lattice.bottom
            and compose_index(i, j) == lattice.top
            and compose_index(j, i) == lattice.top
        ]
        checked += 1
        if len(mates) != 1:
            return Verdict(
                False,
                checked=checked,
                counterexample={"factor": i, "complements": mates},
            )
        complements[i] = mates[0]

    for i in factors:
        for j in factors:
            checked += 1
            if lattice.meet(i, j) not in fset:
                return Verdict(
                    False, checked=checked, counterexample={"meet": (i, j)}
                )
            cij = compose_index(i, j)
            if cij is None:
                return Verdict(
                    False, checked=checked, counterexample={"compose": (i, j)}
                )
            if compose_index(j, i) != cij:
                return Verdict(
                    False, checked=checked, counterexample={"commute": (i, j)}
                )
            if complements[lattice.meet(i, j)] != compose_index(
                complements[i], complements[j]
            ):
                return Verdict(
                    False, checked=checked, counterexample={"de_morgan": (i, j)}
                )

    for i in factors:
        for j in factors:
            for m in factors:
                checked += 1
                lhs = lattice.meet(i, compose_index(j, m))
                rhs = compose_index(lattice.meet(i, j), lattice.meet(i, m))
                if lhs != rhs:
                    return Verdict(
                        False,
                        checked=checked,
                        counterexample={"distributive": (i, j, m)},
                    )
    return Verdict(True, checked=checked)


def check_distributive_inequality(algebra_or_lattice, j_max: int) -> Verdict:
    """r ^ (s,t)_j <= (r^s) v (r^t) over all congruence triples, 1 <= j <= j_max."""
    if j_max < 1:
        raise ValueError(f"j_max must be at least 1, got {j_max}")
    lattice = _as_lattice(algebra_or_lattice)
    rels = [c.rel() for c in lattice.elements]
    k = len(rels)
    checked = 0
    for i in range(k):
        for j in range(k):
            for m in range(k):
                rhs = rels[
                    lattice.join(lattice.meet(i, j), lattice.meet(i, m))
                ]
                for jj in range(1, j_max + 1):
                    checked += 1
                    lhs = rels[i].meet(alternating(rels[j], rels[m], jj))
                    bad = _first_missing(lhs, rhs)
                    if bad is not None:
                        return Verdict(
                            False,
                            checked=checked,
                            counterexample={
                                "triple": (i, j, m),
                                "j": jj,
                                "x": bad[0],
                                "y": bad[1],
                            },
                        )
    return Verdict(True, checked=checked)


# ---------------------------------------------------------------------------
# whole-algebra quantification


def _triple_sweep(lattice: CongruenceLattice, checker) -> Verdict:
    k = len(lattice.elements)
    checked = 0
    vacuous = 0
    for i in range(k):
        for j in range(k):
            for m in range(k):
                v = checker(
                    lattice.elements[i], lattice.elements[j], lattice.elements[m]
                )
                checked += 1
                vacuous += v.skipped_vacuous
                if not v.holds:
                    ce = dict(v.counterexample or {})
                    ce["triple"] = (i, j, m)
                    return Verdict(
                        False, checked=checked, skipped_vacuous=vacuous,
                        counterexample=ce,
                    )
    return Verdict(True, checked=checked, skipped_vacuous=vacuous)


def check_trapezoid(algebra_or_lattice) -> Verdict:
    return _triple_sweep(_as_lattice(algebra_or_lattice), check_trapezoid_triple)


def check_shifting(algebra_or_lattice) -> Verdict:
    return _triple_sweep(_as_lattice(algebra_or_lattice), check_shifting_triple)


def check_permutes_with_all(algebra_or_lattice) -> Verdict:
    return _triple_sweep(_as_lattice(algebra_or_lattice), check_permutes_with)


def deep_family(
    algebra: FiniteAlgebra, size_bound: int = 12
) -> list[tuple[str, FiniteAlgebra]]:
    """The algebra, its square, and all its quotients."""
    base = algebra.name or "A"
    members: list[tuple[str, FiniteAlgebra]] = [(base, algebra)]
    square, _, _ = product(algebra, algebra)
    members.append((f"{base}^2", square))
    lattice = congruence_lattice(algebra, size_bound=size_bound)
    for i, theta in enumerate(lattice.elements):
        quo, _ = quotient(algebra, theta)
        members.append((f"{base}/c{i}", quo))
    return members


def _family_verdict(algebra: FiniteAlgebra, deep: bool, runner) -> Verdict:
    members = deep_family(algebra) if deep else [(algebra.name or "A", algebra)]
    checked = 0
    vacuous = 0
    for name, member in members:
        lattice = congruence_lattice(member, size_bound=max(12, member.size))
        v = runner(lattice)
        checked += v.checked
        vacuous += v.skipped_vacuous
        if not v.holds:
            ce = dict(v.counterexample or {})
            ce["member"] = name
            return Verdict(False, checked=checked, skipped_vacuous=vacuous,
                           counterexample=ce)
    return Verdict(True, checked=checked, skipped_vacuous=vacuous)


def check_trapezoid_family(algebra: FiniteAlgebra, deep: bool = False) -> Verdict:
    return _family_verdict(algebra, deep, check_trapezoid)


def check_shifting_family(algebra: FiniteAlgebra, deep: bool = False) -> Verdict:
    return _family_verdict(algebra, deep, check_shifting)


def check_factor_permutability_family(algebra: FiniteAlgebra, deep: bool = False) -> Verdict:
    from .congruences import check_factor_permutability

    return _family_verdict(algebra, deep, check_factor_permutability)


def jonsson_order_relational(
    algebra: FiniteAlgebra,
    bound: int = 10,
    deep: bool = False,
    size_bound: int = 12,
) -> OrderReport:
    """Least n making the order-n inclusion pass on every congruence triple
    of the test family; nonexistence is definitive when some triple has a
    stabilized chain that still misses the left side."""
    if bound < 1:
        raise ValueError(f"bound must be at least 1, got {bound}")
    members = (
        deep_family(algebra, size_bound=size_bound)
        if deep
        else [(algebra.name or "A", algebra)]
    )
    worst = 1
    checked = 0
    for name, member in members:
        lattice = congruence_lattice(member, size_bound=max(size_bound, member.size))
        rels = [c.rel() for c in lattice.elements]
        k = len(rels)
        for i in range(k):
            for j in range(k):
                for m in range(k):
                    checked += 1
                    minimal = _triple_minimal_order(rels[i], rels[j], rels[m])
                    if minimal is None:
                        return OrderReport(
                            minimal_order=None,
                            bound=bound,
                            per_order=tuple(False for _ in range(bound)),
                            triples_checked=checked,
                            definitive_none=True,
                            failing={"member": name, "triple": (i, j, m)},
                            members=tuple(n for n, _ in members),
                        )
                    worst = max(worst, minimal)
    per_order = tuple(n >= worst for n in range(1, bound + 1))
    return OrderReport(
        minimal_order=worst if worst <= bound else None,
        bound=bound,
        per_order=per_order,
        triples_checked=checked,
        definitive_none=False,
        failing=None if worst <= bound else {"true_order": worst},
        members=tuple(n for n, _ in members),
    )


def _triple_minimal_order(r: Relation, s: Relation, t: Relation) -> Optional[int]:
    """Least n >= 1 with r^(s o t) <= (r^s, r^t)_{n+1}, or None if the
    alternating chain stabilizes below the left side."""
    lhs = r.meet(s.compose(t))
    x_fac = r.meet(s)
    y_fac = r.meet(t)
    chain = Relation.diagonal(r.left)
    stalls = 0
    m = 0
    while True:
        if lhs.leq(chain):
            return max(1, m - 1)
        grown = chain.compose(x_fac if m % 2 == 0 else y_fac)
        stalls = stalls + 1 if grown == chain else 0
        if stalls >= 2:
            return None
        chain = grown
        m += 1


# ---------------------------------------------------------------------------
# seeded relation sampling


def random_reflexive(rng: random.Random, size: int, density: float = 0.3) -> Relation:
    """Reflexive closure of a random bit matrix."""
    rows = []
    for i in range(size):
        row = 1 << i
        for j in range(size):
            if rng.random() < density:
                row |= 1 << j
        rows.append(row)
    return Relation(size, size, rows)


def random_compatible_reflexive(
    algebra: FiniteAlgebra,
    rng: random.Random,
    density: float = 0.3,
    square: Optional[FiniteAlgebra] = None,
) -> Relation:
    """Reflexive compatible relation: the subalgebra of A^2 generated by the
    diagonal plus a random pair sample."""
    n = algebra.size
    if square is None:
        square, _, _ = product(algebra, algebra)
    seeds = {a * n + a for a in range(n)}
    for a in range(n):
        for b in range(n):
            if a != b and rng.random() < density:
                seeds.add(a * n + b)
    closed = generate_subuniverse(square, seeds)
    return Relation.from_pairs(n, n, [(code // n, code % n) for code in closed])
