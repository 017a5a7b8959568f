"""Free algebras on few generators inside A^(A^k) and the chain search.

An element of the free algebra is the value vector of a k-ary term operation,
indexed row-major over argument tuples.  Every non-generator element carries
a witness (operation, children) so it can be printed and re-evaluated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebras import FiniteAlgebra
from .verdicts import Verdict

F3_SIZE_BOUND = 6
NU_SIZE_BOUND = 4
DEFAULT_SIZE_CAP = 2_000_000


class FreeAlgebraCapError(RuntimeError):
    def __init__(self, partial: int, cap: int):
        super().__init__(f"free algebra exceeded cap {cap} (at {partial} elements)")
        self.partial = partial
        self.cap = cap


class FreeAlgebra:
    """Closure of the k projections under the base algebra's operations."""

    def __init__(self, base: FiniteAlgebra, k: int, size_cap: int = DEFAULT_SIZE_CAP):
        if k < 1:
            raise ValueError("need at least one generator")
        self.base = base
        self.k = k
        n = base.size
        m = n ** k
        self.elements: list[tuple[int, ...]] = []
        self.witness: list[tuple] = []
        self._where: dict[tuple[int, ...], int] = {}
        gens = []
        for g in range(k):
            vec = tuple(
                args[g] for args in itertools.product(range(n), repeat=k)
            )
            idx = self._where.get(vec)
            if idx is None:
                idx = self._add(vec, ("var", g))
            gens.append(idx)
        self.gens = tuple(gens)
        self._close(size_cap)

    def _add(self, vec: tuple[int, ...], wit: tuple) -> int:
        idx = len(self.elements)
        self.elements.append(vec)
        self.witness.append(wit)
        self._where[vec] = idx
        return idx

    def _apply(self, op_idx: int, children: Sequence[int]) -> tuple[int, ...]:
        op = self.base.operations[op_idx]
        table = op.table
        n = self.base.size
        vecs = [self.elements[c] for c in children]
        if op.arity == 0:
            return tuple(table[0] for _ in range(len(self.elements[0])))
        out = []
        for p in range(len(vecs[0])):
            i = 0
            for v in vecs:
                i = i * n + v[p]
            out.append(table[i])
        return tuple(out)

    def _close(self, size_cap: int) -> None:
        frontier_start = 0
        first_round = True
        while True:
            frontier_end = len(self.elements)
            fresh = []
            for op_idx, op in enumerate(self.base.operations):
                if op.arity == 0:
                    if first_round:
                        fresh.append((self._apply(op_idx, ()), (op_idx, ())))
                    continue
                for children in itertools.product(
                    range(frontier_end), repeat=op.arity
                ):
                    if not first_round and all(c < frontier_start for c in children):
                        continue
                    vec = self._apply(op_idx, children)
                    if vec not in self._where:
                        fresh.append((vec, (op_idx, children)))
            added = False
            for vec, wit in fresh:
                if vec in self._where:
                    continue
                self._add(vec, wit)
                added = True
                if len(self.elements) > size_cap:
                    raise FreeAlgebraCapError(len(self.elements), size_cap)
            if not added:
                return
            frontier_start = frontier_end
            first_round = False

    def __len__(self) -> int:
        return len(self.elements)

    def var_names(self) -> tuple[str, ...]:
        if self.k <= 3:
            return ("x", "y", "z")[: self.k]
        return tuple(f"x{i + 1}" for i in range(self.k))

    def term_string(self, index: int) -> str:
        names = self.var_names()

        def rec(i: int) -> str:
            wit = self.witness[i]
            if wit[0] == "var":
                return names[wit[1]]
            op = self.base.operations[wit[0]]
            if op.arity == 0:
                return op.name
            return f"{op.name}({', '.join(rec(c) for c in wit[1])})"

        return rec(index)

    def evaluate_witness(self, index: int) -> tuple[int, ...]:
        """Recompute the vector from the witness DAG."""
        wit = self.witness[index]
        if wit[0] == "var":
            n = self.base.size
            return tuple(
                args[wit[1]]
                for args in itertools.product(range(n), repeat=self.k)
            )
        return self._apply(wit[0], [c for c in wit[1]])

    def __repr__(self) -> str:
        return f"<free algebra on {self.k} generators over {self.base.name or '?'}: {len(self)} elements>"


def build_free_f3(
    algebra: FiniteAlgebra,
    size_cap: int = DEFAULT_SIZE_CAP,
    size_bound: int = F3_SIZE_BOUND,
) -> FreeAlgebra:
    if algebra.size > size_bound:
        raise ValueError(
            f"carrier size {algebra.size} exceeds free-algebra bound {size_bound}; "
            "raise size_bound to override"
        )
    return FreeAlgebra(algebra, 3, size_cap=size_cap)


def _tuple_index(args: Sequence[int], size: int) -> int:
    i = 0
    for a in args:
        i = i * size + a
    return i


def _slice_positions(size: int):
    """Position lists for the three ternary slice families."""
    aba = [(_tuple_index((a, b, a), size), a) for a in range(size) for b in range(size)]
    aab = [_tuple_index((a, a, b), size) for a in range(size) for b in range(size)]
    baa = [_tuple_index((b, a, a), size) for a in range(size) for b in range(size)]
    return aba, aab, baa


@dataclass(frozen=True)
class TermWitness:
    index: int
    term: str


@dataclass(frozen=True)
class JonssonChain:
    order: int
    indices: tuple[int, ...]
    terms: tuple[str, ...]


def verify_chain(f3: FreeAlgebra, indices: Sequence[int]) -> bool:
    """Check the chain equation system verbatim over all slice positions."""
    n = len(indices)
    if n < 1:
        return False
    size = f3.base.size
    aba, aab, baa = _slice_positions(size)
    elems = [f3.elements[i] for i in indices]
    for e in elems:
        if any(e[p] != want for p, want in aba):
            return False
    first = f3.elements[f3.gens[0]]
    if any(elems[0][p] != first[p] for p in aab):
        return False
    for i in range(1, n):
        ps = baa if i % 2 == 1 else aab
        if any(elems[i - 1][p] != elems[i][p] for p in ps):
            return False
    last = f3.elements[f3.gens[2]]
    ps = aab if n % 2 == 0 else baa
    if any(elems[n - 1][p] != last[p] for p in ps):
        return False
    return True


def _chain_universe(f3: FreeAlgebra):
    size = f3.base.size
    aba, aab, baa = _slice_positions(size)
    universe = [
        i
        for i, vec in enumerate(f3.elements)
        if all(vec[p] == want for p, want in aba)
    ]
    aab_sig = {i: tuple(f3.elements[i][p] for p in aab) for i in universe}
    baa_sig = {i: tuple(f3.elements[i][p] for p in baa) for i in universe}
    return universe, aab_sig, baa_sig


def find_jonsson_chain(
    algebra: FiniteAlgebra,
    max_n: Optional[int] = None,
    size_cap: int = DEFAULT_SIZE_CAP,
    size_bound: int = F3_SIZE_BOUND,
) -> Optional[JonssonChain]:
    """Minimal chain by alternating-edge BFS from the first projection to the
    third.  Returns None when no chain of any length exists (definitive), or
    when the minimal order exceeds max_n."""
    f3 = build_free_f3(algebra, size_cap=size_cap, size_bound=size_bound)
    chain = _search_chain(f3)
    if chain is None:
        return None
    if max_n is not None and chain.order > max_n:
        return None
    return chain


def _search_chain(f3: FreeAlgebra) -> Optional[JonssonChain]:
    if f3.base.size == 1:
        idx = f3.gens[2]
        return JonssonChain(1, (idx,), (f3.term_string(idx),))
    universe, aab_sig, baa_sig = _chain_universe(f3)
    gx, gz = f3.gens[0], f3.gens[2]
    groups_even: dict[tuple, list[int]] = {}
    groups_odd: dict[tuple, list[int]] = {}
    for i in universe:
        groups_even.setdefault(aab_sig[i], []).append(i)
        groups_odd.setdefault(baa_sig[i], []).append(i)
    start = (gx, 0)
    parent: dict[tuple[int, int], Optional[tuple[int, int]]] = {start: None}
    frontier = [start]
    edges = 0
    while frontier:
        edges += 1
        nxt = []
        for state in frontier:
            elem, parity = state
            group = (
                groups_even[aab_sig[elem]]
                if parity == 0
                else groups_odd[baa_sig[elem]]
            )
            for other in group:
                succ = (other, 1 - parity)
                if succ in parent:
                    continue
                parent[succ] = state
                if other == gz:
                    return _rebuild(f3, parent, succ, edges)
                nxt.append(succ)
        frontier = nxt
    return None


def _rebuild(
    f3: FreeAlgebra,
    parent: dict,
    goal: tuple[int, int],
    edges: int,
) -> JonssonChain:
    path = []
    state: Optional[tuple[int, int]] = goal
    while state is not None:
        path.append(state[0])
        state = parent[state]
    path.reverse()
    interior = tuple(path[1:-1])
    order = edges - 1
    if order == 0:
        # only reachable when first and third projections share a slice,
        # which needs a one-element carrier, handled earlier
        interior = (f3.gens[2],)
        order = 1
    chain = JonssonChain(
        order, interior, tuple(f3.term_string(i) for i in interior)
    )
    if not verify_chain(f3, chain.indices):
        raise RuntimeError("chain search produced an invalid chain")
    return chain


def find_majority_term(
    algebra: FiniteAlgebra,
    size_cap: int = DEFAULT_SIZE_CAP,
    size_bound: int = F3_SIZE_BOUND,
) -> Optional[TermWitness]:
    """Least element of F3 with m(a,a,b) = m(a,b,a) = m(b,a,a) = a."""
    f3 = build_free_f3(algebra, size_cap=size_cap, size_bound=size_bound)
    size = f3.base.size
    aba, aab, baa = _slice_positions(size)
    want_aab = [(p, f3.elements[f3.gens[0]][p]) for p in aab]
    want_baa = [(p, f3.elements[f3.gens[2]][p]) for p in baa]
    for i, vec in enumerate(f3.elements):
        if (
            all(vec[p] == w for p, w in aba)
            and all(vec[p] == w for p, w in want_aab)
            and all(vec[p] == w for p, w in want_baa)
        ):
            return TermWitness(i, f3.term_string(i))
    return None


def find_near_unanimity(
    algebra: FiniteAlgebra,
    k: int,
    size_cap: int = DEFAULT_SIZE_CAP,
    size_bound: Optional[int] = None,
) -> Optional[TermWitness]:
    """k-ary term returning the repeated value whenever all but one argument
    agree.  A found term forces a chain of order at most 2k-5, which is
    rechecked here."""
    if k < 3:
        raise ValueError(f"near-unanimity arity must be at least 3, got {k}")
    if size_bound is None:
        size_bound = F3_SIZE_BOUND if k == 3 else NU_SIZE_BOUND
    if k == 3:
        return find_majority_term(algebra, size_cap=size_cap, size_bound=size_bound)
    if algebra.size > size_bound:
        raise ValueError(
            f"carrier size {algebra.size} exceeds free-algebra bound {size_bound}; "
            "raise size_bound to override"
        )
    free = FreeAlgebra(algebra, k, size_cap=size_cap)
    size = algebra.size
    wanted = []
    for pos in range(k):
        for a in range(size):
            for b in range(size):
                args = [a] * k
                args[pos] = b
                wanted.append((_tuple_index(args, size), a))
    found = None
    for i, vec in enumerate(free.elements):
        if all(vec[p] == w for p, w in wanted):
            found = TermWitness(i, free.term_string(i))
            break
    if found is None:
        return None
    chain = find_jonsson_chain(
        algebra, size_cap=size_cap, size_bound=max(F3_SIZE_BOUND, algebra.size)
    )
    if chain is None or chain.order > 2 * k - 5:
        raise RuntimeError(
            f"near-unanimity term found but chain order violates the 2k-5 bound "
            f"(got {chain.order if chain else None})"
        )
    return found


def certify_chain_against_relations(
    algebra: FiniteAlgebra, chain: JonssonChain, size_bound: int = 12
) -> Verdict:
    """Run the order-n inclusion over all congruence triples of the algebra,
    its square, and its quotients; a valid chain must always pass."""
    from .congruences import congruence_lattice
    from .lemmas import check_jonsson_triple, deep_family

    f3 = build_free_f3(
        algebra, size_bound=max(F3_SIZE_BOUND, algebra.size)
    )
    if not verify_chain(f3, chain.indices):
        raise ValueError("chain does not satisfy the equation system")
    checked = 0
    for name, member in deep_family(algebra, size_bound=size_bound):
        lattice = congruence_lattice(member, size_bound=max(size_bound, member.size))
        for r in lattice.elements:
            for s in lattice.elements:
                for t in lattice.elements:
                    v = check_jonsson_triple(r, s, t, chain.order)
                    checked += 1
                    if not v.holds:
                        ce = dict(v.counterexample or {})
                        ce["member"] = name
                        return Verdict(False, checked=checked, counterexample=ce)
    return Verdict(True, checked=checked)
