"""Sections of the projection from sequences onto classes, and the
sectional derivative they induce.

A section ``r`` picks a representative sequence for each class (so that
projecting it back gives the class).  Differentiating that representative
term by term and projecting the result gives the sectional derivative
``d/d_r F``.  Different sections can give different derivatives of the same
class; :func:`irregularity_demo` shows why.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import (FamilyMismatch, OutOfDomain, PreconditionViolation,
                     ShapeError, UndefinedDerivative, ZeroScalar)
from .expr import (Const, Mul, NonDifferentiable, as_expr, bernstein_approx,
                   depends_on_n, differentiate, evaluate)
from .hyperspace import (Decision, ExprSeq, FunSeq, HyperElement, ListSeq,
                         MapSeq, ProbeTrace, Verdict, Window, Witness,
                         as_seq, default_window, embed, equivalent,
                         hn, hyper_add, hyper_scale, hyper_sub, null_check,
                         project, seq_add, seq_scale)
from .seminorm import PointProbe, SeminormFamily, absolute

DEFAULT_MAX_SCAN = 64
SMOOTHING_CAP = 2 ** 14


# ------------------------------------------------------------------ sections

class Section:
    """Strategy choosing a representative sequence for a class."""

    def apply(self, F: HyperElement) -> FunSeq:
        raise NotImplementedError

    def __call__(self, F):
        return self.apply(F)


@dataclass(frozen=True)
class RepSection(Section):
    """Return the stored representative."""

    def apply(self, F):
        return F.rep

    def __str__(self):
        return "rep"


@dataclass(frozen=True, eq=False)
class BasisLinearSection(Section):
    """Linear section fixed by its values on a finite basis of classes.

    ``basis`` holds ``(H, q)`` pairs, ``q`` being the representative chosen for
    ``H``.  Only elements carrying an explicit decomposition over these basis
    classes (see :meth:`combine`) are in the domain; there
    ``r(sum a_k H_k) = sum a_k q_k``.
    """

    basis: tuple
    window: Window | None = None

    def __post_init__(self):
        basis = tuple((H, as_seq(q)) for H, q in self.basis)
        if not basis:
            raise ValueError("empty basis")
        object.__setattr__(self, "basis", basis)
        family = basis[0][0].family
        for H, q in basis:
            if H.family != family:
                raise FamilyMismatch("basis classes must share one seminorm family")
            if equivalent(H.rep, q, family, self.window).fails:
                raise ValueError(f"chosen representative {q} is not in the class {H}")
        for j, (H, _) in enumerate(basis):
            for K, _ in basis[j + 1:]:
                d = H.equals(K, self.window)
                if not d.fails:
                    raise ValueError(f"basis classes {H} and {K} are not distinct ({d.verdict})")

    @property
    def family(self) -> SeminormFamily:
        return self.basis[0][0].family

    def combine(self, coeffs) -> HyperElement:
        """The element ``sum a_k H_k`` with its decomposition attached."""
        coeffs = tuple(coeffs)
        if len(coeffs) != len(self.basis):
            raise ValueError(f"{len(coeffs)} coefficients for {len(self.basis)} basis classes")
        rep = None
        for (H, _), a in zip(self.basis, coeffs):
            term = seq_scale(a, H.rep)
            rep = term if rep is None else seq_add(rep, term)
        return HyperElement(rep, self.family, tuple((H, a) for (H, _), a in zip(self.basis, coeffs)))

    def apply(self, F):
        if F.family != self.family:
            raise FamilyMismatch(f"section is over {self.family.label}, element over {F.family.label}")
        if F.decomposition is None:
            raise OutOfDomain("element has no decomposition over the section's basis")
        chosen = {id(H): q for H, q in self.basis}
        out = None
        for H, a in F.decomposition:
            if id(H) not in chosen:
                raise OutOfDomain(f"{H} is not a basis class of this section")
            if a == 0:
                continue
            term = seq_scale(a, chosen[id(H)])
            out = term if out is None else seq_add(out, term)
        return out if out is not None else ExprSeq(Const(0))

    def __str__(self):
        return f"basis-linear({len(self.basis)})"


def _symmetric_interval(scale):
    return lambda i: (-scale * i, scale * i)


def _capped_doubling(cap):
    return lambda i: min(2 ** min(i, 62), cap)


class SmoothingSection(Section):
    """Replace every term by a Bernstein polynomial.

    Term i of ``base(F)`` is approximated on ``intervals(i)`` with degree
    ``degrees(i)``; defaults are ``[-i, i]`` and ``min(2^i, 2^14)``.  Every
    output term is a polynomial, so the sectional derivative always exists.
    Whether the output still represents F depends on the schedule; see
    :func:`smoothing_error`.
    """

    def __init__(self, intervals: Callable | None = None, degrees: Callable | None = None,
                 base: Section | None = None, scale: float = 1.0, cap: int = SMOOTHING_CAP):
        self.intervals = intervals or _symmetric_interval(scale)
        self.degrees = degrees or _capped_doubling(cap)
        self.base = base or RepSection()
        self.cap = cap

    def apply(self, F):
        return smoothing_section_build(F, self.intervals, self.degrees, self.base)

    def __str__(self):
        return f"smoothing(cap={self.cap})"


def smoothing_section_build(F: HyperElement, intervals, degree_schedule, base: Section | None = None) -> FunSeq:
    """Sequence of Bernstein approximants of the terms of ``base(F)``."""
    seq = (base or RepSection()).apply(F)

    def term(i):
        return bernstein_approx(seq.expr_at(i), intervals(i), degree_schedule(i), n=i)

    return MapSeq(term, f"bernstein({seq})")


@dataclass(frozen=True, eq=False)
class PatchedSection(Section):
    """``base`` except on the patched classes, matched by equivalence."""

    base: Section
    patches: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "patches", tuple((H, as_seq(q)) for H, q in self.patches))

    def apply(self, F):
        for H, q in self.patches:
            if H.family == F.family and H.equals(F).holds:
                return q
        return self.base.apply(F)

    def __str__(self):
        return f"patched({self.base}, {len(self.patches)})"


def nonadditive_patched_section() -> PatchedSection:
    """Stored representatives everywhere, except that the hypernumber 2 is
    represented by ``2 + 1/n``.  Then ``r(1) + r(1) = (2, 2, ...)`` while
    ``r(2) = (3, 5/2, 7/3, ...)``."""
    return PatchedSection(RepSection(), ((hn(2), ExprSeq("2 + 1/n")),))


@dataclass(frozen=True, eq=False)
class MtConjugate(Section):
    """``mt_a . r . mt_(1/a)``: scale down, apply ``r``, scale back up."""

    a: object
    base: Section

    def apply(self, F):
        inv = 1 / Fraction(self.a)
        return seq_scale(self.a, self.base.apply(hyper_scale(inv, F)))

    def __str__(self):
        return f"mt({self.a})*{self.base}"


@dataclass(frozen=True, eq=False)
class AdConjugate(Section):
    """``ad_e . r . ad_(-e)``: shift by ``-e``, apply ``r``, shift back."""

    e: object
    base: Section

    def apply(self, F):
        shifted = hyper_sub(F, embed(self.e, F.family))
        return seq_add(self.base.apply(shifted), ExprSeq(self.e))

    def __str__(self):
        return f"ad({self.e})*{self.base}"


def conjugate_mt(a, r: Section) -> Section:
    if a == 0:
        raise ZeroScalar("cannot conjugate by multiplication with 0")
    if isinstance(a, float):
        a = Fraction(a)
    return MtConjugate(a, r)


def conjugate_ad(e, r: Section) -> Section:
    e = as_expr(e)
    if depends_on_n(e):
        raise ShapeError(f"shift must not depend on n, got {e}")
    return AdConjugate(e, r)


def section_apply(r: Section, F: HyperElement) -> FunSeq:
    return r.apply(F)


# --------------------------------------------------------------- derivatives

@dataclass(frozen=True)
class LiftedDerivative:
    """Term-by-term derivative; terms before ``cutoff`` are set to zero."""

    seq: FunSeq
    cutoff: int


def _derivative_or_raise(e, i):
    d = differentiate(e)
    if isinstance(d, NonDifferentiable):
        raise UndefinedDerivative(f"term {i} is not differentiable ({d.subterm})")
    return d


def lift_partial_derivative(f, max_scan: int = DEFAULT_MAX_SCAN) -> LiftedDerivative:
    """Differentiate a sequence term by term from the first index after
    which every term is differentiable."""
    f = as_seq(f)
    if isinstance(f, ExprSeq):
        d = differentiate(f.expr)
        if isinstance(d, NonDifferentiable):
            raise UndefinedDerivative(f"every term contains {d.subterm}")
        return LiftedDerivative(ExprSeq(d), 1)
    if isinstance(f, ListSeq):
        tail = differentiate(f.tail)
        if isinstance(tail, NonDifferentiable):
            raise UndefinedDerivative(f"the tail rule contains {tail.subterm}")
        bad = [i for i, h in enumerate(f.head, 1) if isinstance(differentiate(h), NonDifferentiable)]
        cutoff = bad[-1] + 1 if bad else 1
        head = tuple(Const(0) if i < cutoff else differentiate(h) for i, h in enumerate(f.head, 1))
        return LiftedDerivative(ListSeq(head, tail), cutoff)
    cutoff = 1
    for i in range(1, max_scan + 1):
        if isinstance(differentiate(f.expr_at(i)), NonDifferentiable):
            cutoff = i + 1
    if cutoff > max_scan:
        raise UndefinedDerivative(f"term {max_scan} is still not differentiable")

    def term(i):
        return Const(0) if i < cutoff else _derivative_or_raise(f.expr_at(i), i)

    return LiftedDerivative(MapSeq(term, f"d/dx {f}"), cutoff)


def sectional_derivative(r: Section, F: HyperElement, max_scan: int = DEFAULT_MAX_SCAN) -> HyperElement:
    """``pi(d(r(F)))``."""
    return project(lift_partial_derivative(r.apply(F), max_scan).seq, F.family)


# ------------------------------------------------------------------- checks

def check_additivity(r: Section, F, G, w: Window | None = None) -> Decision:
    """``d/d_r (F + G)`` against ``d/d_r F + d/d_r G``."""
    lhs = sectional_derivative(r, hyper_add(F, G))
    rhs = hyper_add(sectional_derivative(r, F), sectional_derivative(r, G))
    return lhs.equals(rhs, w)


def check_homogeneity(r: Section, c, F, w: Window | None = None) -> Decision:
    """``d/d_r (c F)`` against ``c d/d_r F``."""
    lhs = sectional_derivative(r, hyper_scale(c, F))
    rhs = hyper_scale(c, sectional_derivative(r, F))
    return lhs.equals(rhs, w)


def compare_sequences(f, g, Q: SeminormFamily, indices=range(1, 65), tol=1e-9) -> Decision:
    """Coordinatewise equality of two sequences on the probes' sample points.

    Holds if every sampled term agrees within ``tol``; otherwise Fails with
    the first differing index as witness.
    """
    f, g = as_seq(f), as_seq(g)
    for i in indices:
        for p in Q.probes:
            pts = p.sample_points()
            gap = float(np.max(np.abs(f.values(i, pts) - g.values(i, pts))))
            if gap > tol:
                return Decision(Verdict.FAILS, witness=Witness(p, i, gap),
                                note=f"term {i} differs by {gap:.6g}")
    return Decision(Verdict.HOLDS, note="all sampled terms agree")


def check_section_additivity(r: Section, F, G, indices=range(1, 65)) -> Decision:
    """Is ``r(F + G) = r(F) + r(G)`` as sequences (not just as classes)?"""
    return compare_sequences(r.apply(hyper_add(F, G)), seq_add(r.apply(F), r.apply(G)), F.family, indices)


@dataclass(frozen=True)
class IrregularityReport:
    f: FunSeq
    g: FunSeq
    df: FunSeq
    dg: FunSeq
    equivalence: Decision
    derivative: Decision

    @property
    def pattern(self):
        return (self.equivalence.verdict, self.derivative.verdict)


def irregularity_demo(Q: SeminormFamily, w: Window | None = None,
                      f="(1/2)^n*sin(2^n*x)", g="0") -> IrregularityReport:
    """Two equivalent sequences whose term-wise derivatives are not.

    With ``f = (1/2)^n sin(2^n x)`` and ``g = 0`` the classes agree, so the
    stored-representative section assigns the zero class two different
    derivatives depending on which representative it holds.
    """
    f, g = as_seq(f), as_seq(g)
    df = lift_partial_derivative(f).seq
    dg = lift_partial_derivative(g).seq
    return IrregularityReport(f, g, df, dg, equivalent(f, g, Q, w), equivalent(df, dg, Q, w))


def constancy_check(F: HyperElement, r: Section, points, w: Window | None = None) -> Decision:
    """Check that F is a constant class, given that its sectional derivative
    vanishes.

    Raises PreconditionViolation (with the derivative's null check as the
    report) if ``d/d_r F`` does not null-check.  Otherwise, for each pair
    ``(c, d)`` the number sequence ``h_i(c) - h_i(d)`` with ``h = r(F)`` is
    null-checked under the absolute value.
    """
    w = w or default_window(F.family)
    pre = null_check(sectional_derivative(r, F).rep, F.family, w)
    if not pre.holds:
        raise PreconditionViolation(f"sectional derivative does not vanish ({pre})", pre)
    h = r.apply(F)
    verdicts = []
    traces = []
    for c, d in points:
        xs = np.array([float(c), float(d)])
        diff = MapSeq(lambda i, xs=xs: Const(float(np.subtract(*h.values(i, xs)))), f"h({c}) - h({d})")
        dec = null_check(diff, absolute(), w)
        verdicts.append(dec.verdict)
        traces.extend(dec.traces)
    if all(v is Verdict.HOLDS for v in verdicts):
        return Decision(Verdict.HOLDS, tuple(traces))
    if any(v is Verdict.FAILS for v in verdicts):
        return Decision(Verdict.FAILS, tuple(traces))
    return Decision(Verdict.INCONCLUSIVE, tuple(traces))


def check_leibniz(f, g, rng: np.random.Generator | None = None, samples: int = 100,
                  interval=(0.25, 2.0), n: int = 1, tol: float = 1e-9):
    """Compare ``d(fg)`` with ``(df) g + f (dg)`` at random points.

    Returns a Decision, or the NonDifferentiable marker if f or g is outside
    the domain of d/dx.  Agreement is relative: ``|lhs - rhs| <= tol * max(1, |lhs|)``.
    """
    f, g = as_expr(f), as_expr(g)
    df, dg = differentiate(f), differentiate(g)
    for d in (df, dg):
        if isinstance(d, NonDifferentiable):
            return d
    dfg = differentiate(Mul(f, g))
    rng = rng if rng is not None else np.random.default_rng()
    xs = rng.uniform(*interval, size=samples)
    lhs = evaluate(dfg, xs, n)
    rhs = evaluate(df, xs, n) * evaluate(g, xs, n) + evaluate(f, xs, n) * evaluate(dg, xs, n)
    err = np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))
    k = int(np.argmax(err))
    if err[k] <= tol:
        return Decision(Verdict.HOLDS, note=f"max relative gap {err[k]:.3g}")
    return Decision(Verdict.FAILS, witness=Witness(PointProbe(float(xs[k])), n, float(err[k])))


def smoothing_error(F: HyperElement, section: SmoothingSection, i: int, interval, grid: int = 2001) -> float:
    """Grid sup of ``|r(F)_i - f_i|`` on ``interval``."""
    xs = np.linspace(*interval, grid)
    smoothed = section.apply(F)
    return float(np.max(np.abs(smoothed.values(i, xs) - F.rep.values(i, xs))))
