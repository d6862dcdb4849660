"""Radial profile expressions F(r), G(r).

A profile is a small arithmetic expression in the single variable ``r``::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | 'r' | FUNC '(' expr ')' | '(' expr ')'

with FUNC one of exp, ln, sin, cos, sqrt. ``^`` binds tightest and is right
associative, so ``-r^2`` is ``-(r^2)`` and ``2^3^2`` is ``2^(3^2)``.

Profiles evaluate on :class:`~qschwarz.jets.Jet2` inputs and can be
differentiated symbolically, which is how the dust metric obtains F' to
second order without third-order jets.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from . import jets
from .errors import ExprSyntaxError, UnknownIdentifier
from .jets import Jet2

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Node",
    "Profile",
    "parse",
    "eval_jet",
    "evaluate",
    "to_source",
    "derivative",
    "FUNCTIONS",
]

FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "r"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]


# ---------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int


def _tokenize(source: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    # offsets are byte offsets into the UTF-8 encoding
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), _byte_offset(source, pos)))
        pos = m.end()
    toks.append(_Tok("end", "", _byte_offset(source, len(source))))
    return toks


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


# ------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _expect(self, text: str) -> None:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", self.tok.offset)
        self._advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self._advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.text == "-":
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.text == "^":
            self._advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self._advance()
            value = float(t.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"numeric literal {t.text!r} overflows", t.offset)
            return Num(value)
        if t.kind == "ident":
            self._advance()
            if t.text == "r":
                return Var("r")
            if t.text in FUNCTIONS:
                if self.tok.text != "(":
                    raise ExprSyntaxError(f"function {t.text!r} must be followed by '('", self.tok.offset)
                self._advance()
                arg = self.expr()
                self._expect(")")
                return Call(t.text, arg)
            raise UnknownIdentifier(t.text, t.offset)
        if t.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        found = t.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", t.offset)


# ------------------------------------------------------------ pretty printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    if isinstance(node, Num) and (node.value < 0 or math.copysign(1.0, node.value) < 0):
        return _PREC["neg"]
    return _PREC["atom"]


def _wrap(node: Node, min_prec: int) -> str:
    s = to_source(node)
    return s if _prec(node) >= min_prec else f"({s})"


def to_source(node: Node) -> str:
    """Render an expression tree with the minimum parentheses needed to re-parse it."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _PREC["neg"])
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    op = node.op
    if op in ("+", "-"):
        return f"{_wrap(node.left, 1)} {op} {_wrap(node.right, 2)}"
    if op in ("*", "/"):
        return f"{_wrap(node.left, 2)}{op}{_wrap(node.right, 3)}"
    return f"{_wrap(node.left, 5)}^{_wrap(node.right, 3)}"


# --------------------------------------------------------------- evaluation


def _is_constant(node: Node) -> bool:
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, (Neg, Call)):
        return _is_constant(node.arg)
    return _is_constant(node.left) and _is_constant(node.right)


def _eval(node: Node, r: Jet2) -> Jet2:
    if isinstance(node, Num):
        return jets.lift_const(node.value)
    if isinstance(node, Var):
        return r
    if isinstance(node, Neg):
        return -_eval(node.arg, r)
    if isinstance(node, Call):
        return jets.elem(_eval(node.arg, r), node.func)
    if node.op == "^":
        base = _eval(node.left, r)
        if _is_constant(node.right):
            return jets.pow_const(base, _eval(node.right, r).val)
        return jets.exp(_eval(node.right, r) * jets.ln(base))
    kind = {"+": "add", "-": "sub", "*": "mul", "/": "div"}[node.op]
    return jets.arith(_eval(node.left, r), _eval(node.right, r), kind)


# ------------------------------------------------------ symbolic derivative

_ZERO, _ONE = Num(0.0), Num(1.0)


def _add(a: Node, b: Node) -> Node:
    if a == _ZERO:
        return b
    if b == _ZERO:
        return a
    return BinOp("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if b == _ZERO:
        return a
    if a == _ZERO:
        return _neg(b)
    return BinOp("-", a, b)


def _mul(a: Node, b: Node) -> Node:
    if a == _ZERO or b == _ZERO:
        return _ZERO
    if a == _ONE:
        return b
    if b == _ONE:
        return a
    return BinOp("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if a == _ZERO:
        return _ZERO
    if b == _ONE:
        return a
    return BinOp("/", a, b)


def _neg(a: Node) -> Node:
    if a == _ZERO:
        return _ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def derivative(node: Node) -> Node:
    """Symbolic d/dr of an expression tree."""
    if isinstance(node, Num):
        return _ZERO
    if isinstance(node, Var):
        return _ONE
    if isinstance(node, Neg):
        return _neg(derivative(node.arg))
    if isinstance(node, Call):
        u, du = node.arg, derivative(node.arg)
        if du == _ZERO:
            return _ZERO
        outer = {
            "exp": lambda: node,
            "ln": lambda: _div(_ONE, u),
            "sin": lambda: Call("cos", u),
            "cos": lambda: _neg(Call("sin", u)),
            "sqrt": lambda: _div(_ONE, BinOp("*", Num(2.0), node)),
        }[node.func]()
        return _mul(outer, du)
    a, b = node.left, node.right
    da, db = derivative(a), derivative(b)
    if node.op == "+":
        return _add(da, db)
    if node.op == "-":
        return _sub(da, db)
    if node.op == "*":
        return _add(_mul(da, b), _mul(a, db))
    if node.op == "/":
        return _div(_sub(_mul(da, b), _mul(a, db)), BinOp("^", b, Num(2.0)))
    # power
    if _is_constant(b):
        if da == _ZERO:
            return _ZERO
        p = _eval(b, jets.lift_const(0.0)).val
        lowered = _ONE if p == 1.0 else BinOp("^", a, Num(p - 1.0))
        return _mul(_mul(Num(p), lowered), da)
    # a^b = exp(b ln a)
    inner = _add(_mul(db, Call("ln", a)), _mul(b, _div(da, a)))
    return _mul(node, inner)


# ------------------------------------------------------------------ Profile


@dataclass(frozen=True)
class Profile:
    """A parsed radial profile; immutable and safe to share."""

    source: str
    ast: Node

    @cached_property
    def derivative(self) -> "Profile":
        d = derivative(self.ast)
        return Profile(to_source(d), d)

    @property
    def is_constant(self) -> bool:
        return _is_constant(self.ast)

    def __call__(self, r: float) -> float:
        return evaluate(self, r)

    def __str__(self) -> str:
        return self.source


def parse(source: str) -> Profile:
    return Profile(source, _Parser(source).parse())


def eval_jet(p: Profile, r: Jet2) -> Jet2:
    """Evaluate the profile on a jet. Raises DomainError outside its domain."""
    return _eval(p.ast, r)


def evaluate(p: Profile, r: float) -> float:
    return _eval(p.ast, jets.lift_const(float(r))).val
