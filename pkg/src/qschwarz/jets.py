"""Second-order Taylor jets in the two comoving coordinates (r, tau).

A :class:`Jet2` carries a value together with its gradient and Hessian with
respect to ``r`` and ``tau``. Arithmetic and the elementary functions
propagate all six fields exactly (up to rounding), so curvature quantities
that need at most second partial derivatives of the metric can be evaluated
without symbolic algebra or finite differences.
"""

from __future__ import annotations

import math
from numbers import Real
from typing import Callable, Union

from .errors import DivisionByZero, DomainError

__all__ = [
    "Jet2",
    "lift_const",
    "coord_r",
    "coord_tau",
    "coords",
    "arith",
    "elem",
    "exp",
    "ln",
    "sqrt",
    "sin",
    "cos",
    "pow_const",
]

JetLike = Union["Jet2", float, int]


class Jet2:
    __slots__ = ("val", "d_r", "d_tau", "d_rr", "d_rtau", "d_tautau")

    def __init__(self, val, d_r=0.0, d_tau=0.0, d_rr=0.0, d_rtau=0.0, d_tautau=0.0):
        self.val = float(val)
        self.d_r = float(d_r)
        self.d_tau = float(d_tau)
        self.d_rr = float(d_rr)
        self.d_rtau = float(d_rtau)
        self.d_tautau = float(d_tautau)

    def fields(self) -> tuple[float, float, float, float, float, float]:
        return (self.val, self.d_r, self.d_tau, self.d_rr, self.d_rtau, self.d_tautau)

    def grad(self, var: str) -> float:
        return self.d_r if var == "r" else self.d_tau

    def hess(self, a: str, b: str) -> float:
        if a == b:
            return self.d_rr if a == "r" else self.d_tautau
        return self.d_rtau

    def is_finite(self) -> bool:
        return all(math.isfinite(x) for x in self.fields())

    def __repr__(self) -> str:
        return (
            f"Jet2(val={self.val!r}, d_r={self.d_r!r}, d_tau={self.d_tau!r}, "
            f"d_rr={self.d_rr!r}, d_rtau={self.d_rtau!r}, d_tautau={self.d_tautau!r})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Jet2):
            return NotImplemented
        return self.fields() == other.fields()

    def __hash__(self) -> int:
        return hash(self.fields())

    # univariate chain rule: f0 = f(a), f1 = f'(a), f2 = f''(a)
    def _compose(self, f0: float, f1: float, f2: float) -> Jet2:
        if not (math.isfinite(f0) and math.isfinite(f1) and math.isfinite(f2)):
            raise DomainError(f"derivative overflow at {self.val!r}")
        return Jet2(
            f0,
            f1 * self.d_r,
            f1 * self.d_tau,
            f1 * self.d_rr + f2 * self.d_r * self.d_r,
            f1 * self.d_rtau + f2 * self.d_r * self.d_tau,
            f1 * self.d_tautau + f2 * self.d_tau * self.d_tau,
        )

    def __add__(self, other: JetLike) -> Jet2:
        if isinstance(other, Jet2):
            return Jet2(*(a + b for a, b in zip(self.fields(), other.fields())))
        if isinstance(other, Real):
            return Jet2(self.val + other, self.d_r, self.d_tau, self.d_rr, self.d_rtau, self.d_tautau)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> Jet2:
        return Jet2(*(-a for a in self.fields()))

    def __pos__(self) -> Jet2:
        return self

    def __sub__(self, other: JetLike) -> Jet2:
        if isinstance(other, Jet2):
            return Jet2(*(a - b for a, b in zip(self.fields(), other.fields())))
        if isinstance(other, Real):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: JetLike) -> Jet2:
        return (-self) + other

    def __mul__(self, other: JetLike) -> Jet2:
        if isinstance(other, Jet2):
            a, b = self, other
            return Jet2(
                a.val * b.val,
                a.val * b.d_r + a.d_r * b.val,
                a.val * b.d_tau + a.d_tau * b.val,
                a.val * b.d_rr + 2.0 * a.d_r * b.d_r + a.d_rr * b.val,
                a.val * b.d_rtau + a.d_r * b.d_tau + a.d_tau * b.d_r + a.d_rtau * b.val,
                a.val * b.d_tautau + 2.0 * a.d_tau * b.d_tau + a.d_tautau * b.val,
            )
        if isinstance(other, Real):
            return Jet2(*(a * other for a in self.fields()))
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> Jet2:
        x = self.val
        if x == 0.0:
            raise DivisionByZero("division by a jet with zero value")
        inv = 1.0 / x
        return self._compose(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other: JetLike) -> Jet2:
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        if isinstance(other, Real):
            if other == 0:
                raise DivisionByZero("division of a jet by zero")
            return Jet2(*(a / other for a in self.fields()))
        return NotImplemented

    def __rtruediv__(self, other: JetLike) -> Jet2:
        if isinstance(other, Real):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, p: JetLike) -> Jet2:
        if isinstance(p, Jet2):
            return exp(p * ln(self))
        if isinstance(p, Real):
            return pow_const(self, float(p))
        return NotImplemented


def lift_const(c: float) -> Jet2:
    if not math.isfinite(c):
        raise DomainError(f"cannot lift non-finite constant {c!r}")
    return Jet2(c)


def coord_r(r0: float) -> Jet2:
    """Seed jet of the coordinate r at r0."""
    return Jet2(r0, d_r=1.0)


def coord_tau(tau0: float) -> Jet2:
    return Jet2(tau0, d_tau=1.0)


def coords(r0: float, tau0: float) -> tuple[Jet2, Jet2]:
    return coord_r(r0), coord_tau(tau0)


def _as_jet(x: JetLike) -> Jet2:
    return x if isinstance(x, Jet2) else lift_const(float(x))


def arith(a: JetLike, b: JetLike, kind: str) -> Jet2:
    a, b = _as_jet(a), _as_jet(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def exp(a: Jet2) -> Jet2:
    try:
        e = math.exp(a.val)
    except OverflowError as exc:
        raise DomainError(f"exp overflow at {a.val!r}") from exc
    return a._compose(e, e, e)


def ln(a: Jet2) -> Jet2:
    x = a.val
    if not x > 0.0:
        raise DomainError(f"ln requires a positive argument, got {x!r}")
    inv = 1.0 / x
    return a._compose(math.log(x), inv, -inv * inv)


def sqrt(a: Jet2) -> Jet2:
    x = a.val
    if not x > 0.0:
        raise DomainError(f"sqrt requires a positive argument, got {x!r}")
    s = math.sqrt(x)
    return a._compose(s, 0.5 / s, -0.25 / (s * x))


def sin(a: Jet2) -> Jet2:
    s, c = math.sin(a.val), math.cos(a.val)
    return a._compose(s, c, -s)


def cos(a: Jet2) -> Jet2:
    s, c = math.sin(a.val), math.cos(a.val)
    return a._compose(c, -s, -c)


def pow_const(a: Jet2, p: float) -> Jet2:
    """``a**p`` for a constant exponent ``p``.

    Integer exponents accept any base (negative exponents still need a
    non-zero base); non-integer exponents need a positive base.
    """
    x = a.val
    p = float(p)
    integral = p.is_integer()
    if not integral and not x > 0.0:
        raise DomainError(f"non-integer power {p!r} of non-positive base {x!r}")
    try:
        f0 = x**p
        f1 = p * x ** (p - 1.0) if p != 0.0 else 0.0
        f2 = p * (p - 1.0) * x ** (p - 2.0) if p not in (0.0, 1.0) else 0.0
    except ZeroDivisionError as exc:
        raise DomainError(f"power {p!r} of zero base") from exc
    except OverflowError as exc:
        raise DomainError(f"power {p!r} of {x!r} overflows") from exc
    return a._compose(f0, f1, f2)


_ELEMENTARY: dict[str, Callable[[Jet2], Jet2]] = {
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
    "sin": sin,
    "cos": cos,
}


def elem(a: JetLike, kind: str, p: float | None = None) -> Jet2:
    a = _as_jet(a)
    if kind == "pow_const":
        if p is None:
            raise ValueError("pow_const needs an exponent")
        return pow_const(a, p)
    try:
        fn = _ELEMENTARY[kind]
    except KeyError:
        raise ValueError(f"unknown elementary function {kind!r}") from None
    return fn(a)
