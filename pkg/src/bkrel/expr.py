"""A small expression language for relational terms.

Grammar::

    stmt    := expr [ ("<=" | "==") expr ]
    expr    := postfix { binop postfix }
    postfix := primary { "'" }
    primary := NAME | "(" expr ")"
    binop   := "o" | "<|" | "|>" | "[]" | "m<|" | "m|>" | "m[]"

Only ``o`` may be chained (it associates to the left).  Every other operator
is non-associative, so ``A <| B |> C`` and ``A o B <| C`` are rejected and
have to be parenthesised.  ``'`` is postfix converse.  The mean operators are
recognised only when ``m`` is written directly against the triangle or
square, so a relation named ``m`` is still usable as ``m <| S``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ExprSyntaxError, NonAssociativeChainError, UnboundNameError
from .lattice import Lattice
from .relation import (
    Connective,
    Relation,
    circle,
    converse,
    equals,
    included_in,
    mean_product,
    square,
    sub,
    sup,
)


class Expr:
    """Base class of AST nodes."""


@dataclass(frozen=True)
class RelRef(Expr):
    name: str


@dataclass(frozen=True)
class Converse(Expr):
    arg: Expr


@dataclass(frozen=True)
class Binary(Expr):
    left: Expr
    right: Expr
    symbol = "?"


class Circle(Binary):
    symbol = "o"


class Sub(Binary):
    symbol = "<|"


class Sup(Binary):
    symbol = "|>"


class Square(Binary):
    symbol = "[]"


class MeanSub(Binary):
    symbol = "m<|"


class MeanSup(Binary):
    symbol = "m|>"


class MeanSquare(Binary):
    symbol = "m[]"


@dataclass(frozen=True)
class Included(Expr):
    left: Expr
    right: Expr
    symbol = "<="


@dataclass(frozen=True)
class Equal(Expr):
    left: Expr
    right: Expr
    symbol = "=="


BINOPS = {cls.symbol: cls for cls in (Circle, Sub, Sup, Square, MeanSub, MeanSup, MeanSquare)}
RELOPS = {"<=": Included, "==": Equal}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op>m<\||m\|>|m\[\]|<\||\|>|\[\]|<=|==|[()'])
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass
class _Token:
    kind: str  # "op", "name" or "end"
    text: str
    pos: int


def tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "name" and m.group() == "o":
            kind = "op"
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str):
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", self.tok.pos)
        self.advance()

    def stmt(self) -> Expr:
        left = self.expr()
        if self.tok.text in RELOPS:
            cls = RELOPS[self.advance().text]
            right = self.expr()
            left = cls(left, right)
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return left

    def expr(self) -> Expr:
        left = self.postfix()
        first = None
        while self.tok.kind == "op" and self.tok.text in BINOPS:
            op = self.advance()
            if first is not None and not (first.text == "o" and op.text == "o"):
                raise NonAssociativeChainError(
                    f"operator {op.text!r} after {first.text!r} needs parentheses: "
                    "only 'o' chains without them", op.pos)
            first = first or op
            left = BINOPS[op.text](left, self.postfix())
        return left

    def postfix(self) -> Expr:
        node = self.primary()
        while self.tok.text == "'":
            self.advance()
            node = Converse(node)
        return node

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "name":
            self.advance()
            return RelRef(tok.text)
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise ExprSyntaxError(f"expected a relation name or '(', found {found!r}", tok.pos)


def parse(text: str) -> Expr:
    """Parse a statement into an AST."""
    return _Parser(text).stmt()


def to_text(e: Expr) -> str:
    """Render an AST back to source; ``parse(to_text(e)) == e``."""
    if isinstance(e, RelRef):
        return e.name
    if isinstance(e, Converse):
        inner = to_text(e.arg)
        if not isinstance(e.arg, (RelRef, Converse)):
            inner = f"({inner})"
        return inner + "'"
    if isinstance(e, (Included, Equal)):
        return f"{to_text(e.left)} {e.symbol} {to_text(e.right)}"
    if isinstance(e, Binary):
        left = to_text(e.left)
        if isinstance(e.left, Binary) and not (isinstance(e, Circle) and isinstance(e.left, Circle)):
            left = f"({left})"
        right = to_text(e.right)
        if isinstance(e.right, Binary):
            right = f"({right})"
        return f"{left} {e.symbol} {right}"
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# Evaluation


@dataclass
class Workspace:
    """An active lattice and the relations loaded under it."""

    lattice: Lattice
    relations: dict[str, Relation] = field(default_factory=dict)

    def add(self, name: str, rel: Relation) -> None:
        if rel.lattice != self.lattice:
            raise ValueError(f"relation {name!r} is over {rel.lattice.name!r}, "
                             f"workspace lattice is {self.lattice.name!r}")
        if name in self.relations:
            raise ValueError(f"relation {name!r} is already loaded")
        self.relations[name] = rel.renamed(name)

    def __getitem__(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            known = ", ".join(sorted(self.relations)) or "none"
            raise UnboundNameError(f"no relation named {name!r} (loaded: {known})") from None


_EVAL = {
    Circle: circle,
    Sub: sub,
    Sup: sup,
    Square: square,
    MeanSub: lambda r, s: mean_product(r, s, Connective.SUB),
    MeanSup: lambda r, s: mean_product(r, s, Connective.SUP),
    MeanSquare: lambda r, s: mean_product(r, s, Connective.SQUARE),
}


def evaluate(e: Expr, ws: Workspace) -> Relation | bool:
    """Evaluate an AST; inclusion and equality statements give booleans."""
    if isinstance(e, Included):
        return included_in(_relation(e.left, ws), _relation(e.right, ws))
    if isinstance(e, Equal):
        return equals(_relation(e.left, ws), _relation(e.right, ws))
    return _relation(e, ws)


def _relation(e: Expr, ws: Workspace) -> Relation:
    if isinstance(e, RelRef):
        return ws[e.name]
    if isinstance(e, Converse):
        return converse(_relation(e.arg, ws))
    if isinstance(e, Binary):
        return _EVAL[type(e)](_relation(e.left, ws), _relation(e.right, ws))
    raise ExprSyntaxError(f"{type(e).__name__} may only appear at the top of a statement")
