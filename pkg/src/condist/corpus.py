"""Built-in test algebras with their expected properties.

Expectations here are frozen reference values; `verify_entry` recomputes each
one so drift in any engine shows up as a corpus failure.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional

from .algebras import FiniteAlgebra, Operation, load_algebra, product
from .congruences import congruence_lattice, is_distributive, permutability_level
from .terms import F3_SIZE_BOUND, build_free_f3, find_jonsson_chain


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    algebra: FiniteAlgebra
    distributive: bool
    permutability: Optional[int]
    chain_order: Optional[int]
    con_size: int
    f3_size: Optional[int]
    note: str = ""


def _lattice_algebra(name: str, leq: list[list[bool]]) -> FiniteAlgebra:
    n = len(leq)

    def bound(a: int, b: int, lower: bool) -> int:
        if lower:
            cands = [c for c in range(n) if leq[c][a] and leq[c][b]]
            best = [c for c in cands if all(leq[d][c] for d in cands)]
        else:
            cands = [c for c in range(n) if leq[a][c] and leq[b][c]]
            best = [c for c in cands if all(leq[c][d] for d in cands)]
        if len(best) != 1:
            raise ValueError(f"order is not a lattice at ({a}, {b})")
        return best[0]

    meet = tuple(bound(a, b, True) for a in range(n) for b in range(n))
    join = tuple(bound(a, b, False) for a in range(n) for b in range(n))
    return FiniteAlgebra(
        n,
        [Operation("meet", 2, meet), Operation("join", 2, join)],
        name=name,
    )


def _leq_from_covers(n: int, covers: list[tuple[int, int]]) -> list[list[bool]]:
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in covers:
        leq[a][b] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    return leq


def _median3_table() -> tuple[int, ...]:
    out = []
    for a in range(3):
        for b in range(3):
            for c in range(3):
                out.append(sorted((a, b, c))[1])
    return tuple(out)


@functools.lru_cache(maxsize=1)
def builtin_corpus() -> tuple[CorpusEntry, ...]:
    l2 = _lattice_algebra("l2", _leq_from_covers(2, [(0, 1)]))
    l2xl2, _, _ = product(l2, l2)
    l2xl2.name = "l2xl2"
    l2cube, _, _ = product(l2xl2, l2)
    l2cube.name = "l2cube"
    bool2 = FiniteAlgebra(
        2,
        [
            Operation("and", 2, (0, 0, 0, 1)),
            Operation("or", 2, (0, 1, 1, 1)),
            Operation("not", 1, (1, 0)),
            Operation("zero", 0, (0,)),
            Operation("one", 0, (1,)),
        ],
        name="bool2",
    )
    median = FiniteAlgebra(
        2, [Operation("m", 3, (0, 0, 0, 1, 0, 1, 1, 1))], name="median"
    )
    median3 = FiniteAlgebra(3, [Operation("m", 3, _median3_table())], name="median3")
    imp2 = FiniteAlgebra(2, [Operation("imp", 2, (1, 1, 0, 1))], name="imp2")
    z2 = FiniteAlgebra(
        2,
        [
            Operation("add", 2, (0, 1, 1, 0)),
            Operation("neg", 1, (0, 1)),
            Operation("zero", 0, (0,)),
        ],
        name="z2",
    )
    z2z2, _, _ = product(z2, z2)
    z2z2.name = "z2z2"
    n5 = _lattice_algebra("n5", _leq_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]))
    m3 = _lattice_algebra("m3", _leq_from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]))

    return (
        CorpusEntry("l2", l2, True, 2, 1, 2, 18, "two-element lattice"),
        CorpusEntry("l2xl2", l2xl2, True, 2, 1, 4, None, "square of l2"),
        CorpusEntry("l2cube", l2cube, True, 2, 1, 8, None, "cube of l2"),
        CorpusEntry("bool2", bool2, True, 2, 1, 2, 256, "two-element Boolean algebra"),
        CorpusEntry("median", median, True, 2, 1, 2, 4, "two-element majority algebra"),
        CorpusEntry("median3", median3, True, 3, 1, 4, 4, "median of the three-chain"),
        CorpusEntry("imp2", imp2, True, 2, 2, 2, 38, "two-element implication algebra"),
        CorpusEntry("z2", z2, True, 2, None, 2, 8, "two-element group"),
        CorpusEntry("z2z2", z2z2, False, 2, None, 5, None, "Klein four-group"),
        CorpusEntry("n5", n5, True, 2, 1, 5, 99, "pentagon lattice"),
        CorpusEntry("m3", m3, True, 2, 1, 2, 28, "diamond lattice"),
    )


def corpus_names() -> tuple[str, ...]:
    return tuple(e.name for e in builtin_corpus())


def corpus_entry(name: str) -> CorpusEntry:
    for e in builtin_corpus():
        if e.name == name:
            return e
    raise ValueError(
        f"no corpus algebra named {name!r} (have {', '.join(corpus_names())})"
    )


def resolve_algebra(spec: str) -> FiniteAlgebra:
    """A 'corpus:NAME' reference or a path to an .alg file."""
    if spec.startswith("corpus:"):
        return corpus_entry(spec[len("corpus:"):]).algebra
    return load_algebra(spec)


def verify_entry(entry: CorpusEntry) -> list[tuple[str, bool, str]]:
    """Recompute each expectation; returns (check, ok, detail) rows."""
    rows = []
    lattice = congruence_lattice(entry.algebra)
    rows.append(
        (
            "con_size",
            len(lattice) == entry.con_size,
            f"expected {entry.con_size}, got {len(lattice)}",
        )
    )
    dist = is_distributive(lattice).holds
    rows.append(
        ("distributive", dist == entry.distributive, f"expected {entry.distributive}, got {dist}")
    )
    level = permutability_level(lattice)
    rows.append(
        ("permutability", level == entry.permutability, f"expected {entry.permutability}, got {level}")
    )
    bound = max(F3_SIZE_BOUND, entry.algebra.size)
    chain = find_jonsson_chain(entry.algebra, size_bound=bound)
    order = chain.order if chain else None
    rows.append(
        ("chain_order", order == entry.chain_order, f"expected {entry.chain_order}, got {order}")
    )
    if entry.f3_size is not None:
        f3 = build_free_f3(entry.algebra, size_bound=bound)
        rows.append(
            ("f3_size", len(f3) == entry.f3_size, f"expected {entry.f3_size}, got {len(f3)}")
        )
    return rows
