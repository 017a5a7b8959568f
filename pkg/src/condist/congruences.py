"""Congruences as canonical partition vectors and the lattice Con(A).

A partition vector maps each element to the least element of its block, so
two vectors are equal iff the partitions are.  Con(A) is generated as the
join closure of all principal congruences; a brute-force enumeration over
all partitions doubles as a cross-check for small carriers.
"""
from __future__ import annotations

import functools
import itertools
import json
from typing import Iterable, Optional, Sequence

from .algebras import ElementMap, FiniteAlgebra, Operation
from .relations import Relation
from .verdicts import Verdict

DEFAULT_SIZE_BOUND = 12


def canonical_partition(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel an arbitrary labeling so each element maps to its block minimum."""
    first: dict[int, int] = {}
    for i, lab in enumerate(labels):
        if lab not in first:
            first[lab] = i
    return tuple(first[lab] for lab in labels)


def is_compatible(algebra: FiniteAlgebra, partition: Sequence[int]) -> bool:
    """One-coordinate substitution test; sufficient by transitivity."""
    n = algebra.size
    for op in algebra.operations:
        k = op.arity
        if k == 0:
            continue
        merged = [
            (a, b)
            for a in range(n)
            for b in range(a + 1, n)
            if partition[a] == partition[b]
        ]
        if not merged:
            continue
        for pos in range(k):
            for rest in itertools.product(range(n), repeat=k - 1):
                for a, b in merged:
                    args_a = rest[:pos] + (a,) + rest[pos:]
                    args_b = rest[:pos] + (b,) + rest[pos:]
                    if partition[algebra.apply(op, args_a)] != partition[
                        algebra.apply(op, args_b)
                    ]:
                        return False
    return True


class Congruence:
    """A compatible equivalence relation on an algebra."""

    __slots__ = ("algebra", "partition")

    def __init__(
        self,
        algebra: FiniteAlgebra,
        partition: Sequence[int],
        trusted: bool = False,
    ):
        vec = canonical_partition(partition)
        if len(vec) != algebra.size:
            raise ValueError(
                f"partition has {len(vec)} entries for carrier of {algebra.size}"
            )
        if not trusted and not is_compatible(algebra, vec):
            raise ValueError("partition is not compatible with the operations")
        self.algebra = algebra
        self.partition = vec

    def related(self, a: int, b: int) -> bool:
        return self.partition[a] == self.partition[b]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, rep in enumerate(self.partition):
            out.setdefault(rep, []).append(i)
        return [out[rep] for rep in sorted(out)]

    def rel(self) -> Relation:
        groups: dict[int, int] = {}
        for i, rep in enumerate(self.partition):
            groups[rep] = groups.get(rep, 0) | (1 << i)
        return Relation(
            self.algebra.size,
            self.algebra.size,
            [groups[rep] for rep in self.partition],
        )

    def is_diagonal(self) -> bool:
        return all(self.partition[i] == i for i in range(len(self.partition)))

    def is_full(self) -> bool:
        return all(rep == 0 for rep in self.partition)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Congruence)
            and self.algebra == other.algebra
            and self.partition == other.partition
        )

    def __hash__(self) -> int:
        return hash((self.algebra, self.partition))

    def __repr__(self) -> str:
        body = "|".join(" ".join(str(x) for x in blk) for blk in self.blocks())
        return f"<congruence {body}>"


def diagonal_congruence(algebra: FiniteAlgebra) -> Congruence:
    return Congruence(algebra, range(algebra.size), trusted=True)


def full_congruence(algebra: FiniteAlgebra) -> Congruence:
    return Congruence(algebra, [0] * algebra.size, trusted=True)


def congruence_from_relation(algebra: FiniteAlgebra, r: Relation) -> Congruence:
    if not r.is_equivalence():
        raise ValueError("relation is not an equivalence")
    labels = [min(i, (row & -row).bit_length() - 1) for i, row in enumerate(r.rows)]
    return Congruence(algebra, labels)


def congruence_from_pairs(
    algebra: FiniteAlgebra, pairs: Iterable[tuple[int, int]]
) -> Congruence:
    """Least congruence containing the pairs: union-find closed under all
    one-position translations of merged pairs."""
    n = algebra.size
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> bool:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if rx > ry:
            rx, ry = ry, rx
        parent[ry] = rx
        return True

    work = []
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"pair ({a}, {b}) outside carrier")
        if union(a, b):
            work.append((a, b))
    while work:
        a, b = work.pop()
        for op in algebra.operations:
            k = op.arity
            if k == 0:
                continue
            for pos in range(k):
                for rest in itertools.product(range(n), repeat=k - 1):
                    args_a = rest[:pos] + (a,) + rest[pos:]
                    args_b = rest[:pos] + (b,) + rest[pos:]
                    va = algebra.apply(op, args_a)
                    vb = algebra.apply(op, args_b)
                    if union(va, vb):
                        work.append((va, vb))
    return Congruence(algebra, [find(i) for i in range(n)], trusted=True)


def principal_congruence(algebra: FiniteAlgebra, a: int, b: int) -> Congruence:
    return congruence_from_pairs(algebra, [(a, b)])


def meet_con(theta: Congruence, psi: Congruence) -> Congruence:
    if theta.algebra != psi.algebra:
        raise ValueError("congruences live on different algebras")
    keys = list(zip(theta.partition, psi.partition))
    first: dict[tuple[int, int], int] = {}
    for i, key in enumerate(keys):
        first.setdefault(key, i)
    return Congruence(theta.algebra, [first[k] for k in keys], trusted=True)


def join_con(theta: Congruence, psi: Congruence) -> Congruence:
    """Transitive closure of the union; a congruence whenever both inputs are."""
    if theta.algebra != psi.algebra:
        raise ValueError("congruences live on different algebras")
    n = theta.algebra.size
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for vec in (theta.partition, psi.partition):
        for i, rep in enumerate(vec):
            ri, rr = find(i), find(rep)
            if ri != rr:
                parent[max(ri, rr)] = min(ri, rr)
    return Congruence(theta.algebra, [find(i) for i in range(n)], trusted=True)


def kernel_congruence(f: ElementMap) -> Congruence:
    if not f.is_homomorphism():
        raise ValueError("map is not a homomorphism")
    return Congruence(f.source, canonical_partition([f(x) for x in range(f.source.size)]))


def quotient(algebra: FiniteAlgebra, theta: Congruence) -> tuple[FiniteAlgebra, ElementMap]:
    """A/theta on block-minimum representatives, with the canonical surjection."""
    if theta.algebra != algebra:
        raise ValueError("congruence does not belong to this algebra")
    reps = sorted(set(theta.partition))
    rank = {rep: i for i, rep in enumerate(reps)}
    m = len(reps)
    ops = []
    for op in algebra.operations:
        table = []
        for args in itertools.product(reps, repeat=op.arity):
            table.append(rank[theta.partition[algebra.apply(op, args)]])
        ops.append(Operation(op.name, op.arity, tuple(table)))
    label = f"{algebra.name or '?'}/{len(reps)}blocks"
    quo = FiniteAlgebra(m, ops, name=label)
    q = ElementMap.homomorphism(algebra, quo, [rank[rep] for rep in theta.partition])
    return quo, q


class CongruenceLattice:
    """All congruences of one algebra, with order, meet and join tables."""

    def __init__(self, algebra: FiniteAlgebra, elements: Sequence[Congruence]):
        self.algebra = algebra
        self.elements = tuple(sorted(elements, key=lambda c: c.partition))
        self._where = {c.partition: i for i, c in enumerate(self.elements)}
        k = len(self.elements)
        self.leq = [[self._refines(i, j) for j in range(k)] for i in range(k)]
        self.meet_table = [
            [self.index(meet_con(self.elements[i], self.elements[j])) for j in range(k)]
            for i in range(k)
        ]
        self.join_table = [
            [self.index(join_con(self.elements[i], self.elements[j])) for j in range(k)]
            for i in range(k)
        ]
        self.bottom = self.index(diagonal_congruence(algebra))
        self.top = self.index(full_congruence(algebra))

    def _refines(self, i: int, j: int) -> bool:
        p, q = self.elements[i].partition, self.elements[j].partition
        return all(q[p[a]] == q[a] for a in range(len(p)))

    def index(self, c: Congruence) -> int:
        if c.algebra != self.algebra:
            raise ValueError("congruence belongs to a different algebra")
        try:
            return self._where[c.partition]
        except KeyError:
            raise ValueError("congruence is not in the lattice") from None

    def __len__(self) -> int:
        return len(self.elements)

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (i, j) where j covers i."""
        k = len(self.elements)
        out = []
        for i in range(k):
            for j in range(k):
                if i == j or not self.leq[i][j]:
                    continue
                if any(
                    m != i and m != j and self.leq[i][m] and self.leq[m][j]
                    for m in range(k)
                ):
                    continue
                out.append((i, j))
        return out

    def __repr__(self) -> str:
        return f"<Con({self.algebra.name or '?'}): {len(self.elements)} congruences>"


@functools.lru_cache(maxsize=None)
def _lattice(algebra: FiniteAlgebra) -> CongruenceLattice:
    found = {diagonal_congruence(algebra).partition: diagonal_congruence(algebra)}
    work = []
    for a in range(algebra.size):
        for b in range(a + 1, algebra.size):
            c = principal_congruence(algebra, a, b)
            if c.partition not in found:
                found[c.partition] = c
                work.append(c)
    while work:
        c = work.pop()
        for other in list(found.values()):
            j = join_con(c, other)
            if j.partition not in found:
                found[j.partition] = j
                work.append(j)
    return CongruenceLattice(algebra, list(found.values()))


def congruence_lattice(
    algebra: FiniteAlgebra,
    size_bound: int = DEFAULT_SIZE_BOUND,
    force: bool = False,
) -> CongruenceLattice:
    if algebra.size > size_bound and not force:
        raise ValueError(
            f"carrier size {algebra.size} exceeds bound {size_bound}; "
            "raise size_bound or pass force=True"
        )
    return _lattice(algebra)


def congruences_by_enumeration(algebra: FiniteAlgebra, limit: int = 6) -> list[Congruence]:
    """All congruences by filtering every partition; only for small carriers."""
    n = algebra.size
    if n > limit:
        raise ValueError(f"carrier size {n} exceeds enumeration limit {limit}")
    out = []
    for labels in _restricted_growth(n):
        vec = canonical_partition(labels)
        if is_compatible(algebra, vec):
            out.append(Congruence(algebra, vec, trusted=True))
    return sorted(out, key=lambda c: c.partition)


def _restricted_growth(n: int):
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(labels)
            return
        for lab in range(top + 2):
            labels[i] = lab
            yield from rec(i + 1, max(top, lab))

    if n == 0:
        yield ()
    else:
        yield from rec(1, 0)


# ---------------------------------------------------------------------------
# lattice-level verdicts


def is_distributive(lattice: CongruenceLattice) -> Verdict:
    k = len(lattice.elements)
    checked = 0
    for i, j, m in itertools.product(range(k), repeat=3):
        checked += 1
        lhs = lattice.meet(i, lattice.join(j, m))
        rhs = lattice.join(lattice.meet(i, j), lattice.meet(i, m))
        if lhs != rhs:
            return Verdict(
                False,
                checked=checked,
                counterexample={"triple": (i, j, m), "lhs": lhs, "rhs": rhs},
            )
    return Verdict(True, checked=checked)


def is_modular(lattice: CongruenceLattice) -> Verdict:
    k = len(lattice.elements)
    checked = 0
    for i, j, m in itertools.product(range(k), repeat=3):
        if not lattice.leq[i][m]:
            continue
        checked += 1
        lhs = lattice.meet(lattice.join(i, j), m)
        rhs = lattice.join(i, lattice.meet(j, m))
        if lhs != rhs:
            return Verdict(
                False,
                checked=checked,
                counterexample={"triple": (i, j, m), "lhs": lhs, "rhs": rhs},
            )
    return Verdict(True, checked=checked)


def is_n_permutable(algebra_or_lattice, n: int) -> Verdict:
    """(R,S)_n = (S,R)_n for all congruence pairs; on success the join
    formula R v S = (R,S)_n is verified as well."""
    from .relations import alternating

    if n < 2:
        raise ValueError(f"permutability degree must be at least 2, got {n}")
    lattice = _as_lattice(algebra_or_lattice)
    rels = [c.rel() for c in lattice.elements]
    checked = 0
    k = len(rels)
    for i in range(k):
        for j in range(k):
            checked += 1
            if alternating(rels[i], rels[j], n) != alternating(rels[j], rels[i], n):
                return Verdict(
                    False, checked=checked, counterexample={"pair": (i, j), "n": n}
                )
    for i in range(k):
        for j in range(k):
            joined = rels[lattice.join(i, j)]
            if alternating(rels[i], rels[j], n) != joined:
                return Verdict(
                    False,
                    checked=checked,
                    counterexample={"pair": (i, j), "n": n, "reason": "join formula"},
                )
    return Verdict(True, checked=checked)


def permutability_level(algebra_or_lattice, bound: int = 8) -> Optional[int]:
    lattice = _as_lattice(algebra_or_lattice)
    for n in range(2, bound + 1):
        if is_n_permutable(lattice, n).holds:
            return n
    return None


def _as_lattice(algebra_or_lattice) -> CongruenceLattice:
    if isinstance(algebra_or_lattice, CongruenceLattice):
        return algebra_or_lattice
    return congruence_lattice(algebra_or_lattice)


# ---------------------------------------------------------------------------
# factor relations


class FactorPair:
    """Complementary factor congruences, certified by an isomorphism
    A -> A/F x A/F'."""

    def __init__(self, lattice: CongruenceLattice, first: int, second: int):
        self.lattice = lattice
        self.first = first
        self.second = second
        self.iso = self._certify()

    def _certify(self) -> ElementMap:
        from .algebras import product

        a = self.lattice.algebra
        qf, pf = quotient(a, self.lattice.elements[self.first])
        qg, pg = quotient(a, self.lattice.elements[self.second])
        prod, _, _ = product(qf, qg)
        values = [pf(x) * qg.size + pg(x) for x in range(a.size)]
        if len(set(values)) != a.size or prod.size != a.size:
            raise ValueError("factor pair does not decompose the algebra")
        return ElementMap.homomorphism(a, prod, values)

    def __repr__(self) -> str:
        return f"<factor pair ({self.first}, {self.second})>"


def factor_relations(algebra_or_lattice) -> list[FactorPair]:
    """All unordered pairs (F, F') with F ^ F' = bottom and F o F' = F' o F = top."""
    lattice = _as_lattice(algebra_or_lattice)
    rels = [c.rel() for c in lattice.elements]
    full = full_congruence(lattice.algebra).rel()
    out = []
    k = len(lattice.elements)
    for i in range(k):
        for j in range(i, k):
            if lattice.meet(i, j) != lattice.bottom:
                continue
            fwd = rels[i].compose(rels[j])
            if fwd != full or rels[j].compose(rels[i]) != full:
                continue
            out.append(FactorPair(lattice, i, j))
    return out


def factor_congruence_indices(algebra_or_lattice) -> tuple[int, ...]:
    lattice = _as_lattice(algebra_or_lattice)
    seen = set()
    for pair in factor_relations(lattice):
        seen.add(pair.first)
        seen.add(pair.second)
    return tuple(sorted(seen))


def check_factor_permutability(algebra_or_lattice) -> Verdict:
    """Every factor congruence composition-commutes with every congruence."""
    lattice = _as_lattice(algebra_or_lattice)
    rels = [c.rel() for c in lattice.elements]
    factors = factor_congruence_indices(lattice)
    checked = 0
    for fi in factors:
        for ei in range(len(rels)):
            checked += 1
            if rels[ei].compose(rels[fi]) != rels[fi].compose(rels[ei]):
                return Verdict(
                    False, checked=checked, counterexample={"factor": fi, "congruence": ei}
                )
    return Verdict(True, checked=checked)


# ---------------------------------------------------------------------------
# exports


def lattice_to_dot(lattice: CongruenceLattice) -> str:
    lines = ["digraph con {", "  rankdir=BT;"]
    for i, c in enumerate(lattice.elements):
        label = "|".join("".join(str(x) for x in blk) for blk in c.blocks())
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in lattice.covers():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_json(lattice: CongruenceLattice) -> str:
    payload = {
        "schema": 1,
        "algebra": lattice.algebra.name,
        "size": len(lattice.elements),
        "elements": [list(c.partition) for c in lattice.elements],
        "meet": lattice.meet_table,
        "join": lattice.join_table,
        "bottom": lattice.bottom,
        "top": lattice.top,
        "distributive": is_distributive(lattice).holds,
        "modular": is_modular(lattice).holds,
    }
    return json.dumps(payload, indent=2) + "\n"
