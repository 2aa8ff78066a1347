"""Bernstein polynomial approximation on an interval."""
from fractions import Fraction
from math import comb

import numpy as np

from ..errors import DomainError
from .nodes import X, Bernstein, Const, Expr, as_expr, evaluate
from .simplify import simplify


def bernstein_approx(f, interval, degree: int, n: int = 1) -> Expr:
    """Degree-``degree`` Bernstein polynomial of ``f`` (at sequence index ``n``)
    rescaled to ``interval = (a, b)``.

    The result interpolates f at both endpoints, reproduces linear functions
    exactly and converges uniformly on [a, b] as the degree grows, at the
    O(1/degree) rate typical of Bernstein operators.
    """
    f = as_expr(f)
    a, b = (float(v) for v in interval)
    if not a < b:
        raise ValueError("interval must satisfy a < b")
    if degree < 1:
        raise ValueError("degree must be at least 1")
    nodes = a + (b - a) * np.arange(degree + 1) / degree
    values = evaluate(f, nodes, n)
    bad = ~np.isfinite(values)
    if np.any(bad):
        raise DomainError(f"{f} is not finite at Bernstein node x={nodes[bad][0]:g}")
    return Bernstein(tuple(values.tolist()), a, b)


def to_monomial(p: Bernstein) -> Expr:
    """Expand a (low-degree) Bernstein polynomial into powers of x.

    Exact in rational arithmetic on the stored float coefficients; intended
    for display and for checking small cases, not for high degrees.
    """
    d = p.degree
    a, b = Fraction(p.a), Fraction(p.b)
    # coefficients in t = (x - a)/(b - a)
    t_poly = [Fraction(0)] * (d + 1)
    for k, c in enumerate(p.coeffs):
        c = Fraction(c)
        for j in range(d - k + 1):
            # c * C(d,k) * t^k * C(d-k, j) * (-t)^j
            t_poly[k + j] += c * comb(d, k) * comb(d - k, j) * (-1) ** j
    # substitute t = (x - a)/(b - a) and collect powers of x
    x_poly = [Fraction(0)] * (d + 1)
    scale = 1 / (b - a)
    for m, c in enumerate(t_poly):
        if c == 0:
            continue
        for j in range(m + 1):
            x_poly[j] += c * scale ** m * comb(m, j) * (-a) ** (m - j)
    expr = Const(0)
    for j, c in enumerate(x_poly):
        if c != 0:
            expr = expr + Const(c) * X ** Const(j)
    return simplify(expr)
