"""Finite probe realizations of seminorm families.

A seminorm family ``Q = {q_t : t in K}`` is realized by a finite, ordered list
of probes of one kind:

* :class:`PointProbe` -- ``|f(x)|`` at a fixed point (pointwise extrafunctions);
* :class:`IntervalProbe` -- max of ``|f|`` over a uniform grid on ``[a, b]``, a
  grid approximation of the sup norm on a compact (compactwise extrafunctions);
* :class:`TestFnProbe` -- ``|integral of f*g over [a, b]|`` by composite Simpson
  (extended distributions);
* :class:`AbsProbe` -- absolute value of an x-free number sequence
  (hypernumbers).

Every decision made elsewhere in the package is relative to the probe family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError, ShapeError
from .expr import Expr, as_expr, depends_on_x, evaluate

DEFAULT_GRID = 1001


class Probe:
    """One seminorm ``q_t``: sample points plus a reduction of sampled values."""

    kind = ""

    def sample_points(self) -> np.ndarray:
        raise NotImplementedError

    def reduce(self, values: np.ndarray) -> float:
        raise NotImplementedError

    def check(self, f: Expr):
        pass

    def value(self, f, n: int) -> float:
        f = as_expr(f)
        self.check(f)
        return self.reduce(_finite(evaluate(f, self.sample_points(), n), f))


def _finite(values, f):
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{f} is not finite on the probe's sample points")
    return values


@dataclass(frozen=True)
class PointProbe(Probe):
    x: float
    kind = "pointwise"

    @cached_property
    def _points(self):
        return np.array([float(self.x)])

    def sample_points(self):
        return self._points

    def reduce(self, values):
        return float(abs(values[0]))

    def __str__(self):
        return f"pt({self.x:g})"


@dataclass(frozen=True)
class IntervalProbe(Probe):
    a: float
    b: float
    grid: int = DEFAULT_GRID
    kind = "compact-sup"

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval probe needs a < b, got [{self.a}, {self.b}]")
        if self.grid < 2:
            raise ValueError("grid needs at least 2 points")

    @cached_property
    def _points(self):
        return np.linspace(self.a, self.b, self.grid)

    def sample_points(self):
        return self._points

    def reduce(self, values):
        return float(np.max(np.abs(values)))

    def __str__(self):
        return f"max[{self.a:g},{self.b:g}]"


@dataclass(frozen=True)
class TestFnProbe(Probe):
    g: Expr
    a: float
    b: float
    quad_nodes: int = 128
    kind = "test-integral"

    __test__ = False  # not a pytest class

    def __post_init__(self):
        object.__setattr__(self, "g", as_expr(self.g))
        if not self.a < self.b:
            raise ValueError(f"test-function probe needs a < b, got [{self.a}, {self.b}]")
        if self.quad_nodes < 2:
            raise ValueError("need at least 2 quadrature subintervals")
        _finite(evaluate(self.g, self._points, 1), self.g)

    @cached_property
    def _points(self):
        m = self.quad_nodes + (self.quad_nodes % 2)   # Simpson needs an even count
        return np.linspace(self.a, self.b, m + 1)

    @cached_property
    def _weights(self):
        return evaluate(self.g, self._points, 1)

    def sample_points(self):
        return self._points

    def reduce(self, values):
        return float(abs(simpson(values * self._weights, x=self._points)))

    def __str__(self):
        return f"int[{self.a:g},{self.b:g}]({self.g})"


@dataclass(frozen=True)
class AbsProbe(Probe):
    kind = "absolute"

    def sample_points(self):
        return _ORIGIN

    def reduce(self, values):
        return float(abs(values[0]))

    def check(self, f):
        if depends_on_x(f):
            raise ShapeError(f"absolute-value probe needs an x-free expression, got {f}")

    def __str__(self):
        return "abs"


_ORIGIN = np.zeros(1)


@dataclass(frozen=True)
class SeminormFamily:
    """Ordered, non-empty, single-kind list of probes."""

    probes: tuple
    label: str = ""
    kind: str = field(init=False, compare=False)

    def __post_init__(self):
        probes = tuple(self.probes)
        if not probes:
            raise ValueError("a seminorm family needs at least one probe")
        kinds = {p.kind for p in probes}
        if len(kinds) > 1:
            raise ShapeError(f"probe family mixes kinds {sorted(kinds)}")
        object.__setattr__(self, "probes", probes)
        object.__setattr__(self, "kind", probes[0].kind)
        if not self.label:
            object.__setattr__(self, "label", f"{self.kind}{{{', '.join(map(str, probes))}}}")

    def __len__(self):
        return len(self.probes)

    def __iter__(self):
        return iter(self.probes)

    def __str__(self):
        return self.label


def pointwise(points, label="") -> SeminormFamily:
    return SeminormFamily(tuple(PointProbe(float(x)) for x in points), label)


def compact_sup(intervals, grid=DEFAULT_GRID, label="") -> SeminormFamily:
    return SeminormFamily(tuple(IntervalProbe(float(a), float(b), grid) for a, b in intervals), label)


def test_integral(test_functions, a, b, quad_nodes=128, label="") -> SeminormFamily:
    return SeminormFamily(tuple(TestFnProbe(g, float(a), float(b), quad_nodes) for g in test_functions), label)


test_integral.__test__ = False


def absolute(label="") -> SeminormFamily:
    return SeminormFamily((AbsProbe(),), label)


def seminorm_value(p: Probe, f, n: int) -> float:
    """``q_p(f_n)`` for the expression f evaluated at sequence index n."""
    return p.value(f, n)


def family_sup(Q: SeminormFamily, f, n: int) -> float:
    """Largest probe value, ``max_t q_t(f_n)``."""
    f = as_expr(f)
    return max(p.value(f, n) for p in Q.probes)
