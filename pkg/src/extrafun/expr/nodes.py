"""Expression trees in the point variable ``x`` and the sequence index ``n``.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and trees can be shared between threads.  Numeric literals are kept as
exact :class:`fractions.Fraction` values until evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Union

import numpy as np
from scipy.stats import binom

from ..errors import DomainError

Number = Union[int, float, Fraction]


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    # arithmetic sugar; no simplification happens here
    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        from .printer import to_source
        return to_source(self)

    def children(self):
        return ()


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Fraction
    name: str | None = None

    def __post_init__(self):
        if self.name is None and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __repr__(self):
        if self.name:
            return f"Const({self.name})"
        return f"Const({self.value})"


PI = Const(math.pi, "pi")


@dataclass(frozen=True, repr=False)
class VarX(Expr):
    def __repr__(self):
        return "VarX"


@dataclass(frozen=True, repr=False)
class VarN(Expr):
    def __repr__(self):
        return "VarN"


X = VarX()
N = VarN()


@dataclass(frozen=True, repr=False)
class Unary(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"{type(self).__name__}({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Binary(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Neg(Unary):
    pass


class Add(Binary):
    pass


class Sub(Binary):
    pass


class Mul(Binary):
    pass


class Div(Binary):
    pass


class Pow(Binary):
    @property
    def base(self):
        return self.left

    @property
    def exponent(self):
        return self.right


class Func(Unary):
    name = ""


class Sin(Func):
    name = "sin"


class Cos(Func):
    name = "cos"


class Exp(Func):
    name = "exp"


class Log(Func):
    name = "log"


class Abs(Func):
    name = "abs"


FUNCTIONS = {cls.name: cls for cls in (Sin, Cos, Exp, Log, Abs)}


@dataclass(frozen=True, repr=False, eq=True)
class Bernstein(Expr):
    """Polynomial sum_k c_k B_{k,d}((x - a)/(b - a)) held in Bernstein form.

    Kept in this basis because converting high-degree Bernstein polynomials to
    monomials is numerically hopeless.
    """

    coeffs: tuple
    a: float
    b: float
    _arr: np.ndarray = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("Bernstein interval needs a < b")
        object.__setattr__(self, "_arr", np.asarray(self.coeffs, dtype=float))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __repr__(self):
        return f"Bernstein(degree={self.degree}, [{self.a}, {self.b}])"

    @cached_property
    def _hash(self):
        return hash((self.coeffs, self.a, self.b))

    def __hash__(self):
        return self._hash

    def derivative(self):
        d = self.degree
        if d == 0:
            return Const(0)
        diffs = d * np.diff(self._arr) / (self.b - self.a)
        if d == 1:
            return Const(float(diffs[0]))
        return Bernstein(tuple(diffs.tolist()), self.a, self.b)

    def evaluate(self, xs):
        xs = np.asarray(xs, dtype=float)
        t = (xs - self.a) / (self.b - self.a)
        out = np.empty_like(t)
        inside = (t >= 0.0) & (t <= 1.0)
        if np.any(inside):
            out[inside] = _bernstein_inside(self._arr, t[inside])
        if np.any(~inside):
            out[~inside] = _de_casteljau(self._arr, t[~inside])
        return out


def _bernstein_inside(c, t, chunk=256):
    # binomial weights beyond ~9 standard deviations of k ~ Bin(d, t) are negligible;
    # log-weights inside the window follow from the first by the ratio recurrence
    d = len(c) - 1
    if d == 0:
        return np.full_like(t, c[0])
    out = np.empty_like(t)
    for start in range(0, len(t), chunk):
        tt = np.clip(t[start:start + chunk], 1e-300, 1.0 - 1e-16)
        sd = np.sqrt(d * tt * (1.0 - tt))
        half = int(np.ceil(9.0 * sd.max())) + 2
        width = min(d + 1, 2 * half + 1)
        lo = np.clip(np.floor(d * tt).astype(int) - half, 0, d + 1 - width)
        k = lo[:, None] + np.arange(width)[None, :]
        step = np.log((d - k[:, :-1]) / (k[:, :-1] + 1.0)) + np.log(tt / (1.0 - tt))[:, None]
        logw = np.concatenate([binom.logpmf(lo, d, tt)[:, None], step], axis=1)
        w = np.exp(np.cumsum(logw, axis=1))
        out[start:start + chunk] = np.sum(w * c[k], axis=1)
    out[t == 0.0] = c[0]
    out[t == 1.0] = c[-1]
    return out


def _de_casteljau(c, t):
    beta = np.tile(c, (len(t), 1))
    tt = t[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(1, len(c)):
            beta = beta[:, :-1] * (1.0 - tt) + beta[:, 1:] * tt
    return beta[:, 0]


def as_expr(value) -> Expr:
    """Coerce numbers and source strings to expressions."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        from .parser import parse
        return parse(value)
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not expressions")
    if isinstance(value, (int, Fraction, np.integer)):
        return Const(Fraction(int(value)) if isinstance(value, np.integer) else Fraction(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite constant {value!r}")
        return Const(Fraction(float(value)))
    raise TypeError(f"cannot make an expression from {type(value).__name__}")


# ---------------------------------------------------------------- queries

def contains(e: Expr, kind) -> bool:
    if isinstance(e, kind):
        return True
    return any(contains(c, kind) for c in e.children())


def depends_on_x(e: Expr) -> bool:
    return contains(e, (VarX, Bernstein))


def depends_on_n(e: Expr) -> bool:
    return contains(e, VarN)


def substitute_n(e: Expr, value) -> Expr:
    """Replace every occurrence of ``n`` by a constant."""
    if isinstance(e, VarN):
        return as_expr(value)
    if isinstance(e, Unary):
        return type(e)(substitute_n(e.arg, value))
    if isinstance(e, Binary):
        return type(e)(substitute_n(e.left, value), substitute_n(e.right, value))
    return e


def substitute_x(e: Expr, replacement: Expr) -> Expr:
    if isinstance(e, VarX):
        return replacement
    if isinstance(e, Bernstein):
        raise ValueError("cannot substitute into a Bernstein polynomial")
    if isinstance(e, Unary):
        return type(e)(substitute_x(e.arg, replacement))
    if isinstance(e, Binary):
        return type(e)(substitute_x(e.left, replacement), substitute_x(e.right, replacement))
    return e


# ------------------------------------------------------------- evaluation

def evaluate(e: Expr, x, n):
    """Evaluate ``e`` at point(s) ``x`` for sequence index ``n``.

    ``x`` may be a scalar or a numpy array; the result has the same shape.
    Raises DomainError on log of a non-positive number, division by zero,
    zero to a negative power or a negative base with fractional exponent.
    Overflow produces infinities, as IEEE arithmetic does.
    """
    xs = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _ev(e, xs, float(n))
    return np.broadcast_to(out, xs.shape).astype(float) if np.ndim(out) < xs.ndim else out


def eval_expr(e: Expr, x: float, n: int) -> float:
    """Scalar evaluation, returning a Python float."""
    if n < 1:
        raise ValueError("sequence index n starts at 1")
    return float(evaluate(e, float(x), n))


def _ev(e, x, n):
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, VarX):
        return x
    if isinstance(e, VarN):
        return n
    if isinstance(e, Bernstein):
        return e.evaluate(x)
    if isinstance(e, Neg):
        return -_ev(e.arg, x, n)
    if isinstance(e, Add):
        return _ev(e.left, x, n) + _ev(e.right, x, n)
    if isinstance(e, Sub):
        return _ev(e.left, x, n) - _ev(e.right, x, n)
    if isinstance(e, Mul):
        return _ev(e.left, x, n) * _ev(e.right, x, n)
    if isinstance(e, Div):
        num, den = _ev(e.left, x, n), _ev(e.right, x, n)
        if np.any(den == 0):
            raise DomainError(f"division by zero in {e}")
        return num / den
    if isinstance(e, Pow):
        base, ex = _ev(e.left, x, n), _ev(e.right, x, n)
        if np.any((base == 0) & (ex < 0)):
            raise DomainError(f"zero raised to a negative power in {e}")
        if np.any((base < 0) & (np.floor(ex) != ex)):
            raise DomainError(f"negative base with fractional exponent in {e}")
        return np.power(base, ex)
    if isinstance(e, Sin):
        return np.sin(_ev(e.arg, x, n))
    if isinstance(e, Cos):
        return np.cos(_ev(e.arg, x, n))
    if isinstance(e, Exp):
        return np.exp(_ev(e.arg, x, n))
    if isinstance(e, Log):
        arg = _ev(e.arg, x, n)
        if np.any(arg <= 0):
            raise DomainError(f"log of a non-positive number in {e}")
        return np.log(arg)
    if isinstance(e, Abs):
        return np.abs(_ev(e.arg, x, n))
    raise TypeError(f"unknown node {type(e).__name__}")
