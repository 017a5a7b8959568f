"""Finite algebras as operation tables, plus the text format.

Elements are 0..size-1.  An operation of arity k is a flat row-major table of
length size**k indexed by sum(a_i * size**(k-1-i)).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class SignatureError(ValueError):
    """Operation lists of two algebras do not line up by (name, arity)."""


class AlgebraParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    table: tuple[int, ...]


class FiniteAlgebra:
    """A finite carrier with named finitary operations."""

    def __init__(self, size: int, operations: Iterable[Operation], name: str = ""):
        if size < 1:
            raise ValueError(f"carrier size must be positive, got {size}")
        ops = tuple(operations)
        seen = set()
        for op in ops:
            if op.arity < 0:
                raise ValueError(f"operation {op.name!r} has negative arity")
            if op.name in seen:
                raise ValueError(f"duplicate operation name {op.name!r}")
            seen.add(op.name)
            expected = size ** op.arity
            if len(op.table) != expected:
                raise ValueError(
                    f"operation {op.name!r} needs {expected} entries, got {len(op.table)}"
                )
            for v in op.table:
                if not 0 <= v < size:
                    raise ValueError(
                        f"operation {op.name!r} has entry {v} outside 0..{size - 1}"
                    )
        self.size = size
        self.operations = ops
        self.name = name
        self._by_name = {op.name: op for op in ops}

    def op(self, name: str) -> Operation:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValueError(f"no operation named {name!r}") from None

    def apply(self, op: Operation | str, args: Sequence[int]) -> int:
        if isinstance(op, str):
            op = self.op(op)
        if len(args) != op.arity:
            raise ValueError(f"{op.name} expects {op.arity} arguments, got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return op.table[idx]

    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((op.name, op.arity) for op in self.operations)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteAlgebra)
            and self.size == other.size
            and self.operations == other.operations
        )

    def __hash__(self) -> int:
        return hash((self.size, self.operations))

    def __repr__(self) -> str:
        label = self.name or "algebra"
        sig = ", ".join(f"{n}/{a}" for n, a in self.signature())
        return f"<{label}: size {self.size}, ops {sig}>"


class ElementMap:
    """A function between carriers, optionally certified as a homomorphism."""

    def __init__(self, source: FiniteAlgebra, target: FiniteAlgebra, values: Sequence[int]):
        values = tuple(values)
        if len(values) != source.size:
            raise ValueError(f"map needs {source.size} values, got {len(values)}")
        for v in values:
            if not 0 <= v < target.size:
                raise ValueError(f"map value {v} outside target carrier")
        self.source = source
        self.target = target
        self.values = values

    def __call__(self, x: int) -> int:
        return self.values[x]

    def is_homomorphism(self) -> bool:
        if self.source.signature() != self.target.signature():
            return False
        for op_s, op_t in zip(self.source.operations, self.target.operations):
            for args in itertools.product(range(self.source.size), repeat=op_s.arity):
                lhs = self.values[self.source.apply(op_s, args)]
                rhs = self.target.apply(op_t, [self.values[a] for a in args])
                if lhs != rhs:
                    return False
        return True

    @classmethod
    def homomorphism(
        cls, source: FiniteAlgebra, target: FiniteAlgebra, values: Sequence[int]
    ) -> "ElementMap":
        f = cls(source, target, values)
        if source.signature() != target.signature():
            raise SignatureError(
                f"signatures differ: {source.signature()} vs {target.signature()}"
            )
        if not f.is_homomorphism():
            raise ValueError("map does not commute with the operations")
        return f

    def compose(self, then: "ElementMap") -> "ElementMap":
        if then.source.size != self.target.size:
            raise ValueError("maps do not compose: carrier mismatch")
        return ElementMap(self.source, then.target, [then.values[v] for v in self.values])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ElementMap)
            and self.values == other.values
            and self.source == other.source
            and self.target == other.target
        )

    def __repr__(self) -> str:
        return f"<map {list(self.values)}>"


def product(a: FiniteAlgebra, b: FiniteAlgebra) -> tuple[FiniteAlgebra, ElementMap, ElementMap]:
    """Direct product with pairs encoded as x*|B| + y.

    Returns the product algebra and the two projections, each a verified
    homomorphism.
    """
    if a.signature() != b.signature():
        raise SignatureError(
            f"signatures differ: {a.signature()} vs {b.signature()}"
        )
    n = a.size * b.size
    ops = []
    for op_a, op_b in zip(a.operations, b.operations):
        k = op_a.arity
        table = []
        for args in itertools.product(range(n), repeat=k):
            xa = a.apply(op_a, [p // b.size for p in args])
            xb = b.apply(op_b, [p % b.size for p in args])
            table.append(xa * b.size + xb)
        ops.append(Operation(op_a.name, k, tuple(table)))
    label = f"{a.name or '?'}x{b.name or '?'}"
    c = FiniteAlgebra(n, ops, name=label)
    p1 = ElementMap.homomorphism(c, a, [p // b.size for p in range(n)])
    p2 = ElementMap.homomorphism(c, b, [p % b.size for p in range(n)])
    return c, p1, p2


def power(a: FiniteAlgebra, k: int) -> FiniteAlgebra:
    """Iterated product A^k (left-nested encoding)."""
    if k < 1:
        raise ValueError("exponent must be positive")
    out = a
    for _ in range(k - 1):
        out, _, _ = product(out, a)
    out.name = f"{a.name or '?'}^{k}"
    return out


def generate_subuniverse(algebra: FiniteAlgebra, seeds: Iterable[int]) -> tuple[int, ...]:
    """Smallest subset containing seeds and closed under every operation,
    nullary constants included."""
    members = set()
    for s in seeds:
        if not 0 <= s < algebra.size:
            raise ValueError(f"seed {s} outside carrier")
        members.add(s)
    work = True
    while work:
        work = False
        current = sorted(members)
        for op in algebra.operations:
            for args in itertools.product(current, repeat=op.arity):
                v = algebra.apply(op, args)
                if v not in members:
                    members.add(v)
                    work = True
    return tuple(sorted(members))


# ---------------------------------------------------------------------------
# text format: '#' comment lines, 'size N', then 'op NAME ARITY' blocks whose
# row-major entries may span lines.


def parse_algebra(text: str, name: str = "") -> FiniteAlgebra:
    tokens: list[tuple[str, int]] = []  # (token, 1-based line)
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for tok in stripped.split():
            tokens.append((tok, lineno))

    pos = 0

    def peek() -> Optional[tuple[str, int]]:
        return tokens[pos] if pos < len(tokens) else None

    def take(what: str) -> tuple[str, int]:
        nonlocal pos
        if pos >= len(tokens):
            last = tokens[-1][1] if tokens else 1
            raise AlgebraParseError(f"unexpected end of input, expected {what}", last)
        tok = tokens[pos]
        pos += 1
        return tok

    def take_int(what: str) -> tuple[int, int]:
        tok, line = take(what)
        try:
            return int(tok), line
        except ValueError:
            raise AlgebraParseError(f"expected {what}, got {tok!r}", line) from None

    kw, line = take("'size'")
    if kw != "size":
        raise AlgebraParseError(f"expected 'size', got {kw!r}", line)
    size, line = take_int("carrier size")
    if size < 1:
        raise AlgebraParseError(f"carrier size must be positive, got {size}", line)

    ops = []
    while peek() is not None:
        kw, line = take("'op'")
        if kw != "op":
            raise AlgebraParseError(f"expected 'op', got {kw!r}", line)
        op_name, _ = take("operation name")
        arity, line = take_int("arity")
        if arity < 0:
            raise AlgebraParseError(f"arity must be nonnegative, got {arity}", line)
        count = size ** arity
        table = []
        for _ in range(count):
            v, line = take_int("table entry")
            if not 0 <= v < size:
                raise AlgebraParseError(
                    f"table entry {v} outside 0..{size - 1}", line
                )
            table.append(v)
        ops.append(Operation(op_name, arity, tuple(table)))

    try:
        return FiniteAlgebra(size, ops, name=name)
    except ValueError as exc:
        raise AlgebraParseError(str(exc), tokens[-1][1] if tokens else 1) from None


def format_algebra(algebra: FiniteAlgebra) -> str:
    lines = []
    if algebra.name:
        lines.append(f"# {algebra.name}")
    lines.append(f"size {algebra.size}")
    for op in algebra.operations:
        lines.append(f"op {op.name} {op.arity}")
        if op.arity == 0:
            lines.append(str(op.table[0]))
            continue
        width = algebra.size
        for start in range(0, len(op.table), width):
            lines.append(" ".join(str(v) for v in op.table[start : start + width]))
    return "\n".join(lines) + "\n"


def load_algebra(path: str, name: str = "") -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read(), name=name or path)
