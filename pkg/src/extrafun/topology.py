"""Neighbourhood membership for the local and uniform topologies.

The existential quantifiers of the neighbourhood definitions are made
explicit: the margins ``k_t`` (or the shared ``k``) are passed in, and the
cutoff ``n(t)`` is taken to be the start of the window.  Membership of
sequences and classes is therefore a three-valued :class:`Decision`:

* Holds -- every sampled index of the window is inside the bound for every
  probe, and a rising tail is far enough below the bound to rise once more;
* Fails -- for some probe the whole tail quarter violates the bound, with room
  to fall once more;
* Inconclusive -- anything in between.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSeparable
from .expr import Sub, as_expr
from .hyperspace import (Decision, FunSeq, HyperElement, MapSeq, ProbeTrace,
                         Verdict, Window, Witness, _same_family, as_seq,
                         default_window, probe_values, seq_add, seq_scale,
                         seq_sub)
from .seminorm import Probe, SeminormFamily, family_sup


@dataclass(frozen=True)
class LocalRadii:
    """One positive radius per probe of a family."""

    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(float(v) for v in self.r))
        if any(not v > 0 for v in self.r):
            raise ValueError("radii must be positive")

    def check(self, Q: SeminormFamily):
        if len(self.r) != len(Q):
            raise ValueError(f"{len(self.r)} radii for {len(Q)} probes")

    @classmethod
    def uniform(cls, r, Q):
        return cls((r,) * len(Q))


@dataclass(frozen=True)
class UniformRadius:
    """Radius ``r`` with the existential margin ``k`` made explicit (0 < k < r)."""

    r: float
    k: float

    def __post_init__(self):
        if not 0 < self.k < self.r:
            raise ValueError(f"need 0 < k < r, got r={self.r}, k={self.k}")

    @property
    def bound(self):
        return self.r - self.k


# ------------------------------------------------------------- points of L

def in_local_nbhd_point(g, l, N: LocalRadii, Q: SeminormFamily) -> bool:
    """``q_t(l - g) < r_t`` for every probe t."""
    N.check(Q)
    diff = Sub(as_expr(l), as_expr(g))
    return all(p.value(diff, 1) < r for p, r in zip(Q.probes, N.r))


def in_uniform_nbhd_point(g, l, u: UniformRadius, Q: SeminormFamily) -> bool:
    """``sup_t q_t(l - g) < r - k``."""
    return family_sup(Q, Sub(as_expr(l), as_expr(g)), 1) < u.bound


# ----------------------------------------------------------- sequences of L

def _membership(diff: FunSeq, Q, bounds, w: Window) -> Decision:
    traces = []
    failing = []
    inside = True
    m = w.quarter
    idx = tuple(w.indices)
    for p, bound in zip(Q.probes, bounds):
        vals = tuple(probe_values(p, diff, idx))
        head, tail = vals[:m], vals[-m:]
        k = int(np.argmax(tail))
        traces.append(ProbeTrace(p, idx, vals, max(head), min(head), max(tail), idx[-m + k], bound))
        if any(v >= bound for v in vals):
            inside = False
        # a tail still rising must leave room for the same rise again
        rise = max(tail) - max(head)
        if rise > 0 and max(tail) + rise >= bound:
            inside = False
        # likewise a falling tail must stay outside after falling once more
        fall = min(head) - min(tail)
        if min(tail) >= bound and (fall <= 0 or min(tail) - fall >= bound):
            failing.append(traces[-1])
    if failing:
        worst = max(failing, key=lambda t: t.tail_max)
        return Decision(Verdict.FAILS, tuple(traces), Witness(worst.probe, worst.tail_argmax, worst.tail_max))
    if inside:
        return Decision(Verdict.HOLDS, tuple(traces))
    return Decision(Verdict.INCONCLUSIVE, tuple(traces))


def in_local_nbhd_seq(g, f, N: LocalRadii, margins, Q: SeminormFamily, w: Window | None = None) -> Decision:
    """Is ``g`` in the locally defined neighbourhood ``O_N f`` (margins k_t explicit)?"""
    N.check(Q)
    margins = tuple(float(k) for k in margins)
    if len(margins) != len(Q) or any(not 0 < k < r for k, r in zip(margins, N.r)):
        raise ValueError("need one margin per probe with 0 < k_t < r_t")
    bounds = [r - k for r, k in zip(N.r, margins)]
    return _membership(seq_sub(as_seq(f), as_seq(g)), Q, bounds, w or default_window(Q))


def in_uniform_nbhd_seq(g, f, u: UniformRadius, Q: SeminormFamily, w: Window | None = None) -> Decision:
    """Is ``g`` in the uniform neighbourhood ``O_r f`` (shared margin k)?"""
    bounds = [u.bound] * len(Q)
    return _membership(seq_sub(as_seq(f), as_seq(g)), Q, bounds, w or default_window(Q))


# ---------------------------------------------------------------- classes

def in_nbhd_hyper(G: HyperElement, F: HyperElement, N: LocalRadii, margins, w: Window | None = None) -> Decision:
    """Membership of G in the local neighbourhood of F, via the stored
    representatives (the projection of ``O_N f``)."""
    _same_family(F, G)
    return in_local_nbhd_seq(G.rep, F.rep, N, margins, F.family, w)


def in_uniform_nbhd_hyper(G: HyperElement, F: HyperElement, u: UniformRadius, w: Window | None = None) -> Decision:
    _same_family(F, G)
    return in_uniform_nbhd_seq(G.rep, F.rep, u, F.family, w)


# ------------------------------------------------------ Hausdorff separation

@dataclass(frozen=True)
class SeparationWitness:
    """A probe, a gap ``k`` and the sampled indices where ``q(f_i - g_i) > k``.

    The uniform neighbourhoods of radius ``k/4`` around the two classes are
    disjoint: a sequence within k/4 of both at a witness index j would force
    ``q(f_j - g_j) < k/2``.
    """

    probe: Probe
    gap: float
    radius: float
    witness_indices: tuple
    window: Window

    def neighbourhood(self, margin_fraction=1e-6) -> UniformRadius:
        return UniformRadius(self.radius, self.radius * margin_fraction)


def separation_witness(F: HyperElement, G: HyperElement, w: Window | None = None) -> SeparationWitness:
    """Pick the probe that best separates F and G on the window.

    The witness set is every sampled index where ``q(f_i - g_i)`` is at least
    half the largest tail value; the gap ``k`` is half the smallest value over
    that set, so each witness index has ``q > k``.
    """
    _same_family(F, G)
    Q = F.family
    w = w or default_window(Q)
    diff = seq_sub(F.rep, G.rep)
    idx = tuple(w.indices)
    best = None
    for p in Q.probes:
        vals = np.array(probe_values(p, diff, idx))
        tail_max = float(vals[-w.quarter:].max())
        if tail_max >= w.epsilon and (best is None or tail_max > best[1]):
            best = (p, tail_max, vals)
    if best is None:
        raise NotSeparable(f"every probe of {Q.label} decays below {w.epsilon:g}; the classes look equal")
    p, tail_max, vals = best
    mask = vals >= tail_max / 2
    chosen = tuple(i for i, keep in zip(idx, mask) if keep)
    gap = float(vals[mask].min()) / 2
    return SeparationWitness(p, gap, gap / 4, chosen, w)


def sample_candidates(F: HyperElement, G: HyperElement, count: int, rng: np.random.Generator):
    """Candidate sequences for probing the two witness neighbourhoods:
    convex mixtures of the representatives plus decaying perturbations."""
    f, g = F.rep, G.rep
    out = []
    if F.family.kind == "absolute":
        bumps = ["1", "-1", "1/2"]
    else:
        bumps = ["sin(x)", "x", "1", "cos(3*x)", "x^2/(1 + x^2)"]
    for j in range(count):
        t = rng.uniform(-0.25, 1.25)
        h = bumps[j % len(bumps)]
        c = float(rng.normal(scale=0.5))
        mix = seq_add(seq_scale(1 - t, f), seq_scale(t, g))
        decay = MapSeq(lambda i, h=h, c=c: as_expr(f"{c!r}*({h})/{i}"), f"{c:.3g}*{h}/n")
        out.append(seq_add(mix, decay))
    return out


def in_both(witness: SeparationWitness, F: HyperElement, G: HyperElement, h) -> bool:
    """True if h is (verdict Holds) a member of both witness neighbourhoods."""
    u = witness.neighbourhood()
    a = in_uniform_nbhd_seq(h, F.rep, u, F.family, witness.window)
    if not a.holds:
        return False
    return in_uniform_nbhd_seq(h, G.rep, u, G.family, witness.window).holds
