"""Relation-expression language.

Grammar:

    stmt := expr (("<=" | "=") expr)?
    expr := meet
    meet := comp ("&" comp)*
    comp := atom (";" atom)*
    atom := NAME | "delta" | "nabla" | "~" atom
          | "alt(" expr "," expr "," INT ")" | "(" expr ")"

Precedence: ~ binds tighter than ;, which binds tighter than &.  The unicode
spellings for composition, meet and inclusion are accepted as aliases.
Error positions are byte offsets into the UTF-8 encoding of the input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .relations import Relation, alternating

_ALIASES = {"∘": ";", "∧": "&", "≤": "<="}
_KEYWORDS = {"delta": "DELTA", "nabla": "NABLA", "alt": "ALT"}


class DslError(ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        detail = f"byte {offset}: {message}"
        if expected:
            detail += f" (expected {', '.join(sorted(expected))})"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class DslEvalError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"byte {offset}: {message}")
        self.offset = offset


@dataclass(frozen=True)
class Name:
    ident: str
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Delta:
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Nabla:
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Opposite:
    child: "RelExpr"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Compose:
    left: "RelExpr"
    right: "RelExpr"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Meet:
    left: "RelExpr"
    right: "RelExpr"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Alt:
    left: "RelExpr"
    right: "RelExpr"
    count: int
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Statement:
    kind: str  # "<=" or "="
    left: "RelExpr"
    right: "RelExpr"
    offset: int = field(default=0, compare=False)


RelExpr = Union[Name, Delta, Nabla, Opposite, Compose, Meet, Alt, Statement]


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _lex(text: str) -> list[_Token]:
    tokens = []
    offset = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        width = len(ch.encode("utf-8"))
        if ch in _ALIASES:
            alias = _ALIASES[ch]
            kind = {";": "SEMI", "&": "AMP", "<=": "LE"}[alias]
            tokens.append(_Token(kind, alias, offset))
            i += 1
            offset += width
            continue
        if ch.isspace():
            i += 1
            offset += width
            continue
        if ch == "<":
            if i + 1 < n and text[i + 1] == "=":
                tokens.append(_Token("LE", "<=", offset))
                i += 2
                offset += 2
                continue
            raise DslError("stray '<'", offset, frozenset({"'<='"}))
        simple = {
            ";": "SEMI", "&": "AMP", "~": "TILDE", "(": "LPAREN",
            ")": "RPAREN", ",": "COMMA", "=": "EQ",
        }
        if ch in simple:
            tokens.append(_Token(simple[ch], ch, offset))
            i += 1
            offset += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], offset))
            offset += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(_Token(_KEYWORDS.get(word, "NAME"), word, offset))
            offset += j - i
            i = j
            continue
        raise DslError(f"unexpected character {ch!r}", offset)
    tokens.append(_Token("EOF", "", offset))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str, expected: str) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            raise DslError(
                f"got {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.offset,
                frozenset({expected}),
            )
        self.pos += 1
        return tok

    def statement(self) -> RelExpr:
        left = self.expr()
        tok = self.peek()
        if tok.kind in ("LE", "EQ"):
            self.pos += 1
            right = self.expr()
            self._finish()
            return Statement("<=" if tok.kind == "LE" else "=", left, right, tok.offset)
        self._finish()
        return left

    def _finish(self) -> None:
        tok = self.peek()
        if tok.kind != "EOF":
            raise DslError(
                f"trailing input {tok.text!r}",
                tok.offset,
                frozenset({"'<='", "'='", "end of input"}),
            )

    def expr(self) -> RelExpr:
        node = self.comp()
        while self.peek().kind == "AMP":
            tok = self.take("AMP", "'&'")
            node = Meet(node, self.comp(), tok.offset)
        return node

    def comp(self) -> RelExpr:
        node = self.atom()
        while self.peek().kind == "SEMI":
            tok = self.take("SEMI", "';'")
            node = Compose(node, self.atom(), tok.offset)
        return node

    def atom(self) -> RelExpr:
        tok = self.peek()
        if tok.kind == "NAME":
            self.pos += 1
            return Name(tok.text, tok.offset)
        if tok.kind == "DELTA":
            self.pos += 1
            return Delta(tok.offset)
        if tok.kind == "NABLA":
            self.pos += 1
            return Nabla(tok.offset)
        if tok.kind == "TILDE":
            self.pos += 1
            return Opposite(self.atom(), tok.offset)
        if tok.kind == "ALT":
            self.pos += 1
            self.take("LPAREN", "'('")
            left = self.expr()
            self.take("COMMA", "','")
            right = self.expr()
            self.take("COMMA", "','")
            num = self.take("INT", "INT")
            self.take("RPAREN", "')'")
            return Alt(left, right, int(num.text), tok.offset)
        if tok.kind == "LPAREN":
            self.pos += 1
            node = self.expr()
            self.take("RPAREN", "')'")
            return node
        raise DslError(
            f"got {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
            tok.offset,
            frozenset({"NAME", "'delta'", "'nabla'", "'~'", "'alt'", "'('"}),
        )


def parse(text: str) -> RelExpr:
    return _Parser(_lex(text)).statement()


def unparse(node: RelExpr) -> str:
    """Canonical ASCII spelling; reparsing yields an equal tree."""

    def prec(n: RelExpr) -> int:
        if isinstance(n, Meet):
            return 1
        if isinstance(n, Compose):
            return 2
        return 4

    def wrap(n: RelExpr, minimum: int) -> str:
        s = rec(n)
        return f"({s})" if prec(n) < minimum else s

    def rec(n: RelExpr) -> str:
        if isinstance(n, Name):
            return n.ident
        if isinstance(n, Delta):
            return "delta"
        if isinstance(n, Nabla):
            return "nabla"
        if isinstance(n, Opposite):
            return "~" + wrap(n.child, 4)
        if isinstance(n, Compose):
            return f"{wrap(n.left, 2)} ; {wrap(n.right, 3)}"
        if isinstance(n, Meet):
            return f"{wrap(n.left, 1)} & {wrap(n.right, 2)}"
        if isinstance(n, Alt):
            return f"alt({rec(n.left)}, {rec(n.right)}, {n.count})"
        if isinstance(n, Statement):
            return f"{rec(n.left)} {n.kind} {rec(n.right)}"
        raise TypeError(f"not a relation expression: {n!r}")

    return rec(node)


def evaluate(
    node: RelExpr,
    env: dict[str, Relation],
    size: Optional[int] = None,
):
    """Relation for expressions, bool for statements."""
    if size is None:
        dims = set()
        for r in env.values():
            dims.add(r.left)
            dims.add(r.right)
        if len(dims) == 1:
            size = dims.pop()

    def rec(n: RelExpr) -> Relation:
        if isinstance(n, Name):
            try:
                return env[n.ident]
            except KeyError:
                raise DslEvalError(f"unbound name {n.ident!r}", n.offset) from None
        if isinstance(n, Delta):
            if size is None:
                raise DslEvalError("carrier size for delta is ambiguous", n.offset)
            return Relation.diagonal(size)
        if isinstance(n, Nabla):
            if size is None:
                raise DslEvalError("carrier size for nabla is ambiguous", n.offset)
            return Relation.full(size)
        if isinstance(n, Opposite):
            return rec(n.child).opposite()
        if isinstance(n, Compose):
            left, right = rec(n.left), rec(n.right)
            try:
                return left.compose(right)
            except ValueError as exc:
                raise DslEvalError(str(exc), n.offset) from None
        if isinstance(n, Meet):
            left, right = rec(n.left), rec(n.right)
            try:
                return left.meet(right)
            except ValueError as exc:
                raise DslEvalError(str(exc), n.offset) from None
        if isinstance(n, Alt):
            left, right = rec(n.left), rec(n.right)
            try:
                return alternating(left, right, n.count)
            except ValueError as exc:
                raise DslEvalError(str(exc), n.offset) from None
        raise TypeError(f"not a relation expression: {n!r}")

    if isinstance(node, Statement):
        left, right = rec(node.left), rec(node.right)
        if left.left != right.left or left.right != right.right:
            raise DslEvalError(
                f"cannot compare {left.left}x{left.right} with {right.left}x{right.right}",
                node.offset,
            )
        return left.leq(right) if node.kind == "<=" else left == right
    return rec(node)
