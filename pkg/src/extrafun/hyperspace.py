"""Function sequences, the seminorm-limit equivalence and the hyperspace.

A sequence ``f = (f_i)`` is equivalent to ``g`` relative to a probe family
``Q`` when ``q(f_i - g_i) -> 0`` for every probe ``q``.  Limits cannot be
decided from finitely many terms, so every limit-based predicate here returns
a three-valued :class:`Decision` computed on a finite :class:`Window` of
indices, together with per-probe evidence traces.

The quarter-tail rule used by :func:`null_check`: with ``m = ceil((end -
start) / 4)`` the *head* is the first ``m`` indices of the window and the
*tail* the last ``m``.  For each probe

* it *holds* when ``max(tail) < eps`` and ``max(tail) <= max(head)``, values
  below ``eps / 1000`` counting as round-off;
* it *fails* when ``max(tail) >= eps`` and ``max(tail) >= min(head)``, i.e. the
  tail never dropped below the smallest value already seen in the head.

The whole check Holds when every probe holds, Fails when some probe fails,
and is Inconclusive otherwise (e.g. a sequence still visibly decaying but not
yet below ``eps``).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, FamilyMismatch, ShapeError
from .expr import (Add, Const, Expr, Mul, Sub, as_expr, depends_on_n,
                   depends_on_x, evaluate, simplify, substitute_n)
from .seminorm import (Probe, SeminormFamily, absolute, compact_sup,
                       pointwise)


# ----------------------------------------------------------------- sequences

class FunSeq:
    """A sequence of functions ``(f_i)``, indexed from 1.

    ``expr_at(i)`` is an expression to be evaluated with ``n = i``; it may or
    may not mention ``n``.
    """

    def expr_at(self, i: int) -> Expr:
        raise NotImplementedError

    def term(self, i: int) -> Expr:
        """The i-th function as an expression in x alone."""
        if i < 1:
            raise IndexError("sequences are indexed from 1")
        return simplify(substitute_n(self.expr_at(i), i))

    def values(self, i: int, xs) -> np.ndarray:
        if i < 1:
            raise IndexError("sequences are indexed from 1")
        return evaluate(self.expr_at(i), xs, i)

    def __add__(self, other):
        return seq_add(self, other)

    def __sub__(self, other):
        return seq_sub(self, other)

    def __rmul__(self, c):
        return seq_scale(c, self)

    def __neg__(self):
        return seq_scale(-1, self)


@dataclass(frozen=True)
class ExprSeq(FunSeq):
    """``f_i = e(x, n=i)`` for a closed-form expression."""

    expr: Expr

    def __post_init__(self):
        object.__setattr__(self, "expr", as_expr(self.expr))

    def expr_at(self, i):
        return self.expr

    def __str__(self):
        return f"({self.expr})_n"


@dataclass(frozen=True)
class ListSeq(FunSeq):
    """Explicit head terms followed by a closed-form tail rule."""

    head: tuple
    tail: Expr

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(as_expr(h) for h in self.head))
        object.__setattr__(self, "tail", as_expr(self.tail))

    def expr_at(self, i):
        if i <= len(self.head):
            return self.head[i - 1]
        return self.tail

    def __str__(self):
        head = ", ".join(str(h) for h in self.head)
        return f"({head}, ...; {self.tail})_n"


class MapSeq(FunSeq):
    """Sequence produced term by term by a rule ``i -> Expr`` (cached)."""

    def __init__(self, rule: Callable[[int], Expr], label: str = "mapped"):
        self._rule = lru_cache(maxsize=None)(rule)
        self.label = label

    def expr_at(self, i):
        return self._rule(i)

    def __str__(self):
        return f"<{self.label}>"

    def __repr__(self):
        return f"MapSeq({self.label!r})"


def as_seq(value) -> FunSeq:
    if isinstance(value, FunSeq):
        return value
    return ExprSeq(as_expr(value))


def is_stable(f: FunSeq) -> bool:
    """Syntactically constant sequence (the image of the diagonal embedding)."""
    return isinstance(f, ExprSeq) and not depends_on_n(f.expr)


def _combine(f, g, op):
    if isinstance(f, ExprSeq) and isinstance(g, ExprSeq):
        return ExprSeq(op(f.expr, g.expr))
    if isinstance(f, (ExprSeq, ListSeq)) and isinstance(g, (ExprSeq, ListSeq)):
        size = max(len(getattr(f, "head", ())), len(getattr(g, "head", ())))
        head = tuple(op(f.expr_at(i), g.expr_at(i)) for i in range(1, size + 1))
        tail_f = f.tail if isinstance(f, ListSeq) else f.expr
        tail_g = g.tail if isinstance(g, ListSeq) else g.expr
        return ListSeq(head, op(tail_f, tail_g))
    return MapSeq(lambda i: op(f.expr_at(i), g.expr_at(i)), f"{f} {op.__name__} {g}")


def _add(a, b):
    return Add(a, b)


def _sub(a, b):
    return Sub(a, b)


_add.__name__, _sub.__name__ = "+", "-"


def seq_add(f, g) -> FunSeq:
    """Coordinatewise sum ``(f_i + g_i)``."""
    return _combine(as_seq(f), as_seq(g), _add)


def seq_sub(f, g) -> FunSeq:
    """Coordinatewise difference ``(f_i - g_i)``."""
    return _combine(as_seq(f), as_seq(g), _sub)


def seq_scale(c, f) -> FunSeq:
    """Coordinatewise multiple ``(c * f_i)``."""
    f = as_seq(f)
    k = as_expr(c)
    if isinstance(f, ExprSeq):
        return ExprSeq(Mul(k, f.expr))
    if isinstance(f, ListSeq):
        return ListSeq(tuple(Mul(k, h) for h in f.head), Mul(k, f.tail))
    return MapSeq(lambda i: Mul(k, f.expr_at(i)), f"{c}*{f}")


def embed_stable(l) -> ExprSeq:
    """The constant sequence ``(l, l, l, ...)``; ``l`` must not mention n."""
    l = as_expr(l)
    if depends_on_n(l):
        raise ShapeError(f"stable embedding needs an n-free expression, got {l}")
    return ExprSeq(l)


# --------------------------------------------------------------- decisions

@dataclass(frozen=True)
class Window:
    """Finite stand-in for ``i -> infinity``: indices start..end, threshold eps."""

    start: int = 8
    end: int = 64
    epsilon: float = 1e-6

    def __post_init__(self):
        if not 1 <= self.start < self.end:
            raise ValueError(f"window needs 1 <= start < end, got {self.start}:{self.end}")
        if not self.epsilon > 0:
            raise ValueError("window epsilon must be positive")

    @property
    def indices(self):
        return range(self.start, self.end + 1)

    @property
    def noise_floor(self) -> float:
        """Values below this count as zero in the trend test (round-off)."""
        return self.epsilon * 1e-3

    @property
    def quarter(self) -> int:
        return max(1, math.ceil((self.end - self.start) / 4))

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``"START:END:EPS"``."""
        try:
            start, end, eps = text.split(":")
            return cls(int(start), int(end), float(eps))
        except ValueError as exc:
            raise ValueError(f"window must look like START:END:EPS, got {text!r}") from exc

    def __str__(self):
        return f"{self.start}:{self.end}:{self.epsilon:g}"


DEFAULT_WINDOW = Window()
HYPERNUMBER_WINDOW = Window(8, 512, 1e-2)
# for differences that decay like 1/n (the typical null perturbation h/n)
SLOW_DECAY_WINDOW = HYPERNUMBER_WINDOW


def default_window(Q: SeminormFamily) -> Window:
    """Defaults per family: 1/n-type decay of number sequences needs a longer window."""
    return HYPERNUMBER_WINDOW if Q.kind == "absolute" else DEFAULT_WINDOW


class Verdict(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ProbeTrace:
    """Seminorm values of one probe across the window."""

    probe: Probe
    indices: tuple
    values: tuple
    head_max: float
    head_min: float
    tail_max: float
    tail_argmax: int
    bound: float

    def rows(self):
        return list(zip(self.indices, self.values))


@dataclass(frozen=True)
class Witness:
    probe: Probe
    index: int
    value: float


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    traces: tuple = ()
    witness: Witness | None = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.verdict is Verdict.INCONCLUSIVE

    def __str__(self):
        s = str(self.verdict)
        if self.witness:
            w = self.witness
            s += f" (witness {w.probe} at i={w.index}: {w.value:.6g})"
        return s


def probe_values(probe: Probe, f: FunSeq, indices) -> list:
    """``q(f_i)`` for each index, with the probe's shape checks applied."""
    pts = probe.sample_points()
    out = []
    for i in indices:
        e = f.expr_at(i)
        probe.check(e)
        vals = f.values(i, pts)
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"term {i} of {f} is not finite on {probe}")
        out.append(probe.reduce(vals))
    return out


def _trace(probe, f, w, bound):
    idx = tuple(w.indices)
    vals = tuple(probe_values(probe, f, idx))
    m = w.quarter
    head, tail = vals[:m], vals[-m:]
    k = int(np.argmax(tail))
    return ProbeTrace(probe, idx, vals, max(head), min(head), max(tail), idx[-m + k], bound)


def null_check(f, Q: SeminormFamily, w: Window | None = None) -> Decision:
    """Decide ``lim q(f_i) = 0`` for every probe of Q on the window ``w``."""
    f = as_seq(f)
    w = w or default_window(Q)
    traces = tuple(_trace(p, f, w, w.epsilon) for p in Q.probes)
    failing = [t for t in traces if t.tail_max >= w.epsilon and t.tail_max >= t.head_min]
    if failing:
        worst = max(failing, key=lambda t: t.tail_max)
        return Decision(Verdict.FAILS, traces, Witness(worst.probe, worst.tail_argmax, worst.tail_max))
    if all(t.tail_max < w.epsilon and t.tail_max <= max(t.head_max, w.noise_floor) for t in traces):
        return Decision(Verdict.HOLDS, traces)
    return Decision(Verdict.INCONCLUSIVE, traces)


def equivalent(f, g, Q: SeminormFamily, w: Window | None = None) -> Decision:
    """Decide ``f ~_Q g``: the null check of the difference sequence."""
    return null_check(seq_sub(as_seq(f), as_seq(g)), Q, w)


def separates(Q: SeminormFamily, f, g, tol: float = 1e-12) -> bool:
    """True if some probe tells the n-free functions f and g apart,
    i.e. ``q(f - g) > tol``."""
    diff = Sub(as_expr(f), as_expr(g))
    return any(p.value(diff, 1) > tol for p in Q.probes)


# ---------------------------------------------------------------- hyperspace

@dataclass(frozen=True, eq=False)
class HyperElement:
    """Class of ``rep`` under the equivalence induced by ``family``.

    ``==`` is the equivalence decision on the family's default window, never
    equality of representatives.  ``decomposition`` optionally records the
    element as a finite combination of basis classes (see
    :class:`extrafun.bundle.BasisLinearSection`).
    """

    rep: FunSeq
    family: SeminormFamily
    decomposition: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rep", as_seq(self.rep))

    def equals(self, other: "HyperElement", w: Window | None = None) -> Decision:
        _same_family(self, other)
        return equivalent(self.rep, other.rep, self.family, w)

    def __eq__(self, other):
        if not isinstance(other, HyperElement):
            return NotImplemented
        return self.equals(other).holds

    __hash__ = None

    def __add__(self, other):
        return hyper_add(self, other)

    def __sub__(self, other):
        return hyper_sub(self, other)

    def __rmul__(self, c):
        return hyper_scale(c, self)

    def __neg__(self):
        return hyper_scale(-1, self)

    def __str__(self):
        return f"[{self.rep}]_{self.family.label}"


def project(f, Q: SeminormFamily) -> HyperElement:
    """The natural projection: the class of ``f``."""
    return HyperElement(as_seq(f), Q)


def _same_family(F, G):
    if F.family != G.family:
        raise FamilyMismatch(f"cannot combine classes of {F.family.label} and {G.family.label}")


def _combine_decomposition(F, G, sign):
    if F.decomposition is None or G.decomposition is None:
        return None
    coeffs = dict()
    order = []
    for basis, c in F.decomposition:
        order.append(basis)
        coeffs[id(basis)] = c
    for basis, c in G.decomposition:
        if id(basis) not in coeffs:
            order.append(basis)
            coeffs[id(basis)] = 0
        coeffs[id(basis)] += sign * c
    return tuple((b, coeffs[id(b)]) for b in order)


def hyper_add(F: HyperElement, G: HyperElement) -> HyperElement:
    _same_family(F, G)
    return HyperElement(seq_add(F.rep, G.rep), F.family, _combine_decomposition(F, G, 1))


def hyper_sub(F: HyperElement, G: HyperElement) -> HyperElement:
    _same_family(F, G)
    return HyperElement(seq_sub(F.rep, G.rep), F.family, _combine_decomposition(F, G, -1))


def hyper_scale(c, F: HyperElement) -> HyperElement:
    dec = None
    if F.decomposition is not None:
        dec = tuple((b, c * a) for b, a in F.decomposition)
    return HyperElement(seq_scale(c, F.rep), F.family, dec)


def zero(Q: SeminormFamily) -> HyperElement:
    return HyperElement(ExprSeq(Const(0)), Q)


def embed(l, Q: SeminormFamily) -> HyperElement:
    """The composite embedding of a function as a stable class."""
    return project(embed_stable(l), Q)


def is_stable_element(F: HyperElement, w: Window | None = None) -> Decision:
    """Semidecision for having a constant-sequence representative.

    Holds if the stored representative is syntactically n-free, or if it is
    equivalent to the constant sequence of its own term at ``w.end``;
    Inconclusive otherwise (never Fails).
    """
    w = w or default_window(F.family)
    if is_stable(F.rep):
        return Decision(Verdict.HOLDS, note="representative is n-free")
    candidate = ExprSeq(F.rep.term(w.end))
    d = equivalent(F.rep, candidate, F.family, w)
    if d.holds:
        return Decision(Verdict.HOLDS, d.traces, note=f"equivalent to the constant sequence of term {w.end}")
    return Decision(Verdict.INCONCLUSIVE, d.traces, note="no stable representative found")


# -------------------------------------------------- notation constructors

def ec(f, intervals=((0.0, 1.0),), grid=1001) -> HyperElement:
    """Compactwise extrafunction class of ``f``."""
    return project(f, compact_sup(intervals, grid))


def ep(f, points) -> HyperElement:
    """Pointwise extrafunction class of ``f``."""
    return project(f, pointwise(points))


def hn(*terms) -> HyperElement:
    """Hypernumber: ``hn(2)`` is the class of 2, 2, 2, ...; ``hn("1 + 1/n")`` the
    class of the number sequence given by a rule."""
    if len(terms) != 1:
        raise TypeError("hn takes one number, expression or sequence")
    t = terms[0]
    if isinstance(t, (int, float, Fraction)):
        seq = ExprSeq(Const(Fraction(t)))
    else:
        seq = as_seq(t)
    e = seq.expr if isinstance(seq, ExprSeq) else None
    if e is not None and depends_on_x(e):
        raise ShapeError(f"hypernumbers are number sequences; {e} depends on x")
    return project(seq, absolute())
