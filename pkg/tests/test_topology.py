import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extrafun.errors import FamilyMismatch, NotSeparable
from extrafun.hyperspace import ExprSeq, Verdict, Window, hn, project, seq_add, zero
from extrafun.seminorm import absolute, compact_sup, pointwise
from extrafun.topology import (LocalRadii, UniformRadius, in_both,
                               in_local_nbhd_point, in_local_nbhd_seq,
                               in_nbhd_hyper, in_uniform_nbhd_hyper,
                               in_uniform_nbhd_point, in_uniform_nbhd_seq,
                               sample_candidates, separation_witness)

from oracles import NUMPY_FIXTURES, per_index_grid_sup

UNIT = compact_sup([(0, 1)])
DECAY = "(1/2)^n*sin(2^n*x)"
W = Window(8, 64, 1e-6)


# --------------------------------------------------------------- radii

def test_radii_validation():
    with pytest.raises(ValueError):
        LocalRadii((0.1, 0))
    with pytest.raises(ValueError):
        UniformRadius(1, 1)
    with pytest.raises(ValueError):
        UniformRadius(1, 0)
    assert UniformRadius(1, 0.2).bound == pytest.approx(0.8)
    with pytest.raises(ValueError):
        in_local_nbhd_point("0", "0", LocalRadii((1, 1)), pointwise([0]))


# -------------------------------------------------------------- points

def test_local_point_examples():
    assert in_local_nbhd_point("sin(x)", "sin(x)", LocalRadii((1e-9,)), UNIT)
    assert not in_local_nbhd_point("1", "0", LocalRadii((0.5,)), pointwise([0]))
    # direct evaluation: x/10 is 0 and 0.2 at the two points
    assert in_local_nbhd_point("x/10", "0", LocalRadii((0.5, 0.5)), pointwise([0, 2]))
    assert not in_local_nbhd_point("x/10", "0", LocalRadii((0.5, 0.1)), pointwise([0, 2]))


def test_uniform_point_examples():
    Q = pointwise([0.9])
    assert in_uniform_nbhd_point("x", "x", UniformRadius(1e-6, 1e-7), UNIT)
    assert not in_uniform_nbhd_point("x", "0", UniformRadius(1, 0.2), Q)
    assert in_uniform_nbhd_point("x", "0", UniformRadius(1, 0.05), Q)


# ----------------------------------------------------------- sequences

def test_local_seq_examples():
    N, k = LocalRadii((0.1,)), [0.05]
    assert in_local_nbhd_seq(ExprSeq("x^n"), ExprSeq("x^n"), N, k, UNIT, W).holds
    d = in_local_nbhd_seq(ExprSeq(DECAY), ExprSeq("0"), N, k, UNIT, W)
    assert d.holds
    assert max(per_index_grid_sup(NUMPY_FIXTURES[DECAY], 0, 1, range(8, 65))) < 0.05
    d = in_local_nbhd_seq(ExprSeq("cos(2^n*x)"), ExprSeq("0"), N, k, UNIT, W)
    assert d.fails
    assert min(per_index_grid_sup(NUMPY_FIXTURES["cos(2^n*x)"], 0, 1, range(50, 65))) > 0.05
    assert d.witness.value > 0.05


def test_uniform_seq_examples():
    u = UniformRadius(0.1, 0.05)
    assert in_uniform_nbhd_seq(ExprSeq("x^n"), ExprSeq("x^n"), u, UNIT, W).holds
    assert in_uniform_nbhd_seq(ExprSeq(DECAY), ExprSeq("0"), u, UNIT, W).holds
    assert in_uniform_nbhd_seq(ExprSeq("cos(2^n*x)"), ExprSeq("0"), u, UNIT, W).fails


def test_local_margins_checked():
    with pytest.raises(ValueError):
        in_local_nbhd_seq(ExprSeq("0"), ExprSeq("0"), LocalRadii((0.1,)), [0.2], UNIT)
    with pytest.raises(ValueError):
        in_local_nbhd_seq(ExprSeq("0"), ExprSeq("0"), LocalRadii((0.1,)), [0.01, 0.01], UNIT)


def test_membership_inconclusive_when_only_head_violates():
    # 1/n crosses the bound 0.05 at n = 20: head outside, tail inside
    d = in_uniform_nbhd_seq(ExprSeq("1/n"), ExprSeq("0"), UniformRadius(0.1, 0.05), absolute(), W)
    assert d.inconclusive
    assert in_uniform_nbhd_seq(ExprSeq("1/n"), ExprSeq("0"), UniformRadius(0.2, 0.05), absolute(), W).holds


def test_traces_carry_bounds():
    d = in_local_nbhd_seq(ExprSeq(DECAY), ExprSeq("0"), LocalRadii((0.1,)), [0.05], UNIT, W)
    t = d.traces[0]
    assert t.bound == pytest.approx(0.05)
    assert t.indices == tuple(range(8, 65))
    np.testing.assert_allclose(t.values, per_index_grid_sup(NUMPY_FIXTURES[DECAY], 0, 1, t.indices), rtol=1e-12)


# ------------------------------------------------------------- classes

def test_hyper_membership_examples():
    N, k = LocalRadii((0.1,)), [0.05]
    F = zero(UNIT)
    assert in_nbhd_hyper(F, F, N, k).holds
    assert in_nbhd_hyper(project(DECAY, UNIT), F, N, k).holds
    assert in_nbhd_hyper(project("cos(2^n*x)", UNIT), F, N, k).fails
    assert in_uniform_nbhd_hyper(project(DECAY, UNIT), F, UniformRadius(0.1, 0.05)).holds


def test_hyper_membership_family_mismatch():
    with pytest.raises(FamilyMismatch):
        in_nbhd_hyper(zero(UNIT), zero(pointwise([0])), LocalRadii((1,)), [0.5])


# ---------------------------------------------------------- separation

def test_separation_witness_cos():
    s = separation_witness(zero(UNIT), project("cos(2^n*x)", UNIT))
    tail = per_index_grid_sup(NUMPY_FIXTURES["cos(2^n*x)"], 0, 1, range(50, 65))
    assert max(tail) == pytest.approx(1.0)
    assert s.gap == pytest.approx(0.5, abs=0.02)
    assert s.radius == pytest.approx(s.gap / 4)
    assert s.probe is UNIT.probes[0]


def test_separation_witness_hypernumbers():
    s = separation_witness(hn(1), hn(2))
    assert s.gap == 0.5
    assert s.radius == 0.125
    assert s.witness_indices == tuple(range(8, 513))


def test_separation_witness_invariant():
    F, G = project("sin(x)", UNIT), project("cos(x)", UNIT)
    s = separation_witness(F, G)
    diff = lambda x, n: np.sin(x) - np.cos(x)
    for i in s.witness_indices:
        assert per_index_grid_sup(diff, 0, 1, [i])[0] > s.gap


def test_not_separable():
    F = project("x", UNIT)
    with pytest.raises(NotSeparable):
        separation_witness(F, F)
    with pytest.raises(NotSeparable):
        separation_witness(zero(UNIT), project(DECAY, UNIT))


@pytest.mark.parametrize("pair", [
    (zero(UNIT), project("cos(2^n*x)", UNIT)),
    (project("sin(x)", UNIT), project("cos(x)", UNIT)),
    (hn(1), hn(2)),
    (project("x^2", pointwise([0.3, 1.1])), project("x", pointwise([0.3, 1.1]))),
])
def test_hausdorff_neighbourhoods_disjoint(pair):
    F, G = pair
    s = separation_witness(F, G)
    rng = np.random.default_rng(1)
    cands = sample_candidates(F, G, 30, rng) + [F.rep, G.rep]
    assert not any(in_both(s, F, G, h) for h in cands)
    # the representatives themselves sit in their own neighbourhood
    u = s.neighbourhood()
    assert in_uniform_nbhd_seq(F.rep, F.rep, u, F.family, s.window).holds


# ---------------------------------------------------------- properties

FIXTURES = ["x", "sin(x)", "x^2 - 1", DECAY, "x^n", "exp(-x)", "cos(3*x)/2", "0"]
BUMPS = ["sin(x)", "x", "1", "cos(3*x)"]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FIXTURES), st.sampled_from(BUMPS), st.floats(0, 0.6),
       st.floats(0.1, 1.0), st.floats(0.05, 0.5))
def test_uniform_implies_local(f, h, c, r, kf):
    g = seq_add(ExprSeq(f), ExprSeq(f"{c!r}*({h})"))
    Q = compact_sup([(0, 1), (-1, 0.5)])
    k = r * kf
    uni = in_uniform_nbhd_seq(g, ExprSeq(f), UniformRadius(r, k), Q, W)
    loc = in_local_nbhd_seq(g, ExprSeq(f), LocalRadii.uniform(r, Q), [k, k], Q, W)
    if uni.holds:
        assert not loc.fails
        assert loc.holds


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FIXTURES), st.sampled_from(BUMPS), st.floats(0, 0.6),
       st.floats(0.1, 1.0), st.floats(0.05, 0.5))
def test_monotone_in_probe_family(f, h, c, r, kf):
    g = seq_add(ExprSeq(f), ExprSeq(f"{c!r}*({h})"))
    small = compact_sup([(0, 1)])
    big = compact_sup([(0, 1), (-1, 0.5)])
    u = UniformRadius(r, r * kf)
    if in_uniform_nbhd_seq(g, ExprSeq(f), u, big, W).holds:
        assert in_uniform_nbhd_seq(g, ExprSeq(f), u, small, W).holds


@pytest.mark.parametrize("r", [0.5, 0.1, 0.01, 1e-3])
def test_not_t0_on_sequences(r):
    f, g = ExprSeq(DECAY), ExprSeq("0")
    late = Window(24, 80)
    u = UniformRadius(r, r / 2)
    assert in_uniform_nbhd_seq(g, f, u, UNIT, late).holds
    assert in_uniform_nbhd_seq(f, g, u, UNIT, late).holds


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FIXTURES), st.sampled_from(BUMPS), st.sampled_from(BUMPS),
       st.floats(0, 0.6), st.floats(-2, 2))
def test_representative_independence(f, h, h2, c, s):
    g = seq_add(ExprSeq(f), ExprSeq(f"{c!r}*({h})"))
    alt = seq_add(ExprSeq(f), ExprSeq(f"{s!r}*({h2})/n"))
    u = UniformRadius(0.4, 0.1)
    a = in_uniform_nbhd_seq(g, ExprSeq(f), u, UNIT, W).verdict
    b = in_uniform_nbhd_seq(g, alt, u, UNIT, W).verdict
    assert {a, b} != {Verdict.HOLDS, Verdict.FAILS}


def test_rising_tail_near_bound_is_not_holds():
    # g = x + 0.3125 x sits outside radius 0.3 in the limit; the perturbation
    # sin(x)/n keeps every sampled term inside, but the values are still rising
    alt = seq_add(ExprSeq("x"), ExprSeq("sin(x)/n"))
    g = ExprSeq("x + 0.3125*x")
    d = in_uniform_nbhd_seq(g, alt, UniformRadius(0.4, 0.1), UNIT, W)
    assert not d.holds
    assert in_uniform_nbhd_seq(ExprSeq("x + 0.1*x"), alt, UniformRadius(0.4, 0.1), UNIT, W).holds


def test_falling_tail_near_bound_is_not_fails():
    # limit distance 0.34375 sin(1) = 0.289 is inside the bound 0.3, but the
    # perturbation cos(3x)/n keeps the whole sampled tail just above it
    alt = seq_add(ExprSeq("x"), ExprSeq("cos(3*x)/n"))
    g = ExprSeq("x + 0.34375*sin(x)")
    assert not in_uniform_nbhd_seq(g, alt, UniformRadius(0.4, 0.1), UNIT, W).fails
    assert in_uniform_nbhd_seq(ExprSeq("x + sin(x)"), alt, UniformRadius(0.4, 0.1), UNIT, W).fails
