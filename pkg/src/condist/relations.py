"""Binary relations on finite sets and the alternating-composite calculus.

A relation is stored as one Python int per row: bit j of ``rows[i]`` is set
iff (i, j) is in the relation.  Composition is diagrammatic, so
``compose(r, s)`` relates x to z when x r y and y s z for some y.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


class RelationParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Relation:
    __slots__ = ("left", "right", "rows")

    def __init__(self, left: int, right: int, rows: Iterable[int]):
        rows = tuple(rows)
        if left < 0 or right < 0:
            raise ValueError("carrier sizes must be nonnegative")
        if len(rows) != left:
            raise ValueError(f"expected {left} rows, got {len(rows)}")
        mask = (1 << right) - 1
        for i, r in enumerate(rows):
            if r < 0 or r & ~mask:
                raise ValueError(f"row {i} has bits outside 0..{right - 1}")
        self.left = left
        self.right = right
        self.rows = rows

    # construction -------------------------------------------------------

    @classmethod
    def from_pairs(cls, left: int, right: int, pairs: Iterable[tuple[int, int]]) -> "Relation":
        rows = [0] * left
        for a, b in pairs:
            if not (0 <= a < left and 0 <= b < right):
                raise ValueError(f"pair ({a}, {b}) outside carriers")
            rows[a] |= 1 << b
        return cls(left, right, rows)

    @classmethod
    def diagonal(cls, n: int) -> "Relation":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def full(cls, left: int, right: Optional[int] = None) -> "Relation":
        if right is None:
            right = left
        row = (1 << right) - 1
        return cls(left, right, [row] * left)

    # queries ------------------------------------------------------------

    def has(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for a, row in enumerate(self.rows):
            while row:
                low = row & -row
                yield a, low.bit_length() - 1
                row ^= low

    def count(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def is_reflexive(self) -> bool:
        return self.left == self.right and all(
            r >> i & 1 for i, r in enumerate(self.rows)
        )

    def is_symmetric(self) -> bool:
        if self.left != self.right:
            return False
        return all(self.has(b, a) for a, b in self.pairs())

    def is_transitive(self) -> bool:
        if self.left != self.right:
            return False
        for a, row in enumerate(self.rows):
            acc = 0
            r = row
            while r:
                low = r & -r
                acc |= self.rows[low.bit_length() - 1]
                r ^= low
            if acc & ~row:
                return False
        return True

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    # algebra of relations -----------------------------------------------

    def meet(self, other: "Relation") -> "Relation":
        self._same_type(other)
        return Relation(
            self.left, self.right, [a & b for a, b in zip(self.rows, other.rows)]
        )

    def union(self, other: "Relation") -> "Relation":
        self._same_type(other)
        return Relation(
            self.left, self.right, [a | b for a, b in zip(self.rows, other.rows)]
        )

    def compose(self, other: "Relation") -> "Relation":
        if self.right != other.left:
            raise ValueError(
                f"cannot compose: middle carriers differ ({self.right} vs {other.left})"
            )
        out = []
        for row in self.rows:
            acc = 0
            r = row
            while r:
                low = r & -r
                acc |= other.rows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return Relation(self.left, other.right, out)

    def opposite(self) -> "Relation":
        rows = [0] * self.right
        for a, b in self.pairs():
            rows[b] |= 1 << a
        return Relation(self.right, self.left, rows)

    def leq(self, other: "Relation") -> bool:
        self._same_type(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def _same_type(self, other: "Relation") -> None:
        if self.left != other.left or self.right != other.right:
            raise ValueError(
                f"carrier mismatch: {self.left}x{self.right} vs {other.left}x{other.right}"
            )

    # operators, so calculus code reads like the formulas ------------------

    __and__ = meet
    __or__ = union
    __mul__ = compose
    __le__ = leq

    def __invert__(self) -> "Relation":
        return self.opposite()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Relation)
            and self.left == other.left
            and self.right == other.right
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.left, self.right, self.rows))

    def __repr__(self) -> str:
        return f"<relation {self.left}x{self.right}, {self.count()} pairs>"


def alternating(r: Relation, s: Relation, n: int) -> Relation:
    """Length-n alternating composite: diagonal for n=0, then r, r*s, r*s*r, ...

    Both arguments must be endorelations on the same carrier.
    """
    if n < 0:
        raise ValueError(f"length must be nonnegative, got {n}")
    if r.left != r.right or s.left != s.right or r.left != s.left:
        raise ValueError("alternating composite needs endorelations on one carrier")
    out = Relation.diagonal(r.left)
    for i in range(n):
        out = out.compose(r if i % 2 == 0 else s)
    return out


@dataclass(frozen=True)
class RelationProperties:
    reflexive: bool
    symmetric: bool
    transitive: bool
    equivalence: bool


def closure_properties(r: Relation) -> RelationProperties:
    """Reflexive/symmetric/transitive/equivalence flags for a square relation."""
    if r.left != r.right:
        raise ValueError(f"relation is not square ({r.left}x{r.right})")
    rf = r.is_reflexive()
    sy = r.is_symmetric()
    tr = r.is_transitive()
    return RelationProperties(rf, sy, tr, rf and sy and tr)


def transitive_closure(r: Relation) -> Relation:
    if r.left != r.right:
        raise ValueError("closure needs an endorelation")
    rows = list(r.rows)
    n = r.left
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rows[k]
    return Relation(n, n, rows)


def equivalence_closure(r: Relation) -> Relation:
    if r.left != r.right:
        raise ValueError("closure needs an endorelation")
    return transitive_closure(r.union(r.opposite()).union(Relation.diagonal(r.left)))


class TernaryRelation:
    """A set of triples over one carrier, indexed in sorted order."""

    def __init__(self, size: int, triples: Iterable[tuple[int, int, int]]):
        members = sorted(set(triples))
        for t in members:
            if len(t) != 3 or any(not 0 <= c < size for c in t):
                raise ValueError(f"triple {t} outside carrier 0..{size - 1}")
        self.size = size
        self.triples = tuple(members)
        self._index = {t: i for i, t in enumerate(self.triples)}

    def __contains__(self, triple: tuple[int, int, int]) -> bool:
        return triple in self._index

    def __len__(self) -> int:
        return len(self.triples)

    def index(self, triple: tuple[int, int, int]) -> int:
        return self._index[triple]

    def coordinate_kernel(self, coord: int) -> Relation:
        """Equivalence on triple indices identifying triples that agree in
        the given coordinate."""
        if coord not in (0, 1, 2):
            raise ValueError(f"coordinate must be 0, 1 or 2, got {coord}")
        m = len(self.triples)
        groups: dict[int, int] = {}
        for i, t in enumerate(self.triples):
            groups[t[coord]] = groups.get(t[coord], 0) | (1 << i)
        rows = [groups[t[coord]] for t in self.triples]
        return Relation(m, m, rows)

    def __repr__(self) -> str:
        return f"<ternary relation on {self.size}, {len(self.triples)} triples>"


def build_proof_relation_D(r: Relation, s: Relation, t: Relation) -> TernaryRelation:
    """(x,y,z) is a member iff x r z and some v has y r v, x s v, v t z.

    Intended use has r an equivalence and s, t reflexive; any square
    relations on one carrier are accepted.
    """
    n = r.left
    for q in (r, s, t):
        if q.left != q.right or q.left != n:
            raise ValueError("all three relations must live on one carrier")
    t_cols = t.opposite().rows  # t_cols[z] = bitset of v with v t z
    triples = []
    for x in range(n):
        for y in range(n):
            mid = r.rows[y] & s.rows[x]
            if not mid:
                continue
            row = r.rows[x]
            for z in range(n):
                if row >> z & 1 and mid & t_cols[z]:
                    triples.append((x, y, z))
    return TernaryRelation(n, triples)


# ---------------------------------------------------------------------------
# text format: 'rel NAME on N' header, then one 'a b' pair per line.


def parse_relation(text: str) -> tuple[str, Relation]:
    name = ""
    size = -1
    pairs = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not saw_header:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "rel" or parts[2] != "on":
                raise RelationParseError(
                    f"expected header 'rel NAME on N', got {line!r}", lineno
                )
            name = parts[1]
            try:
                size = int(parts[3])
            except ValueError:
                raise RelationParseError(
                    f"carrier size must be an integer, got {parts[3]!r}", lineno
                ) from None
            if size < 1:
                raise RelationParseError(f"carrier size must be positive, got {size}", lineno)
            saw_header = True
            continue
        parts = line.split()
        if len(parts) != 2:
            raise RelationParseError(f"expected 'a b' pair, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise RelationParseError(f"pair entries must be integers in {line!r}", lineno) from None
        if not (0 <= a < size and 0 <= b < size):
            raise RelationParseError(f"pair ({a}, {b}) outside 0..{size - 1}", lineno)
        pairs.append((a, b))
    if not saw_header:
        raise RelationParseError("missing 'rel NAME on N' header", 1)
    return name, Relation.from_pairs(size, size, pairs)


def format_relation(name: str, r: Relation) -> str:
    if r.left != r.right:
        raise ValueError("text format holds square relations only")
    lines = [f"rel {name} on {r.left}"]
    lines.extend(f"{a} {b}" for a, b in r.pairs())
    return "\n".join(lines) + "\n"


def load_relation(path: str) -> tuple[str, Relation]:
    with open(path, encoding="utf-8") as fh:
        return parse_relation(fh.read())
