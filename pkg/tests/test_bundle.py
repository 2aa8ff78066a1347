from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extrafun.bundle import (BasisLinearSection, PatchedSection, RepSection,
                             SmoothingSection, check_additivity,
                             check_homogeneity, check_leibniz,
                             check_section_additivity, compare_sequences,
                             conjugate_ad, conjugate_mt, constancy_check,
                             irregularity_demo, lift_partial_derivative,
                             nonadditive_patched_section, section_apply,
                             sectional_derivative, smoothing_error,
                             smoothing_section_build)
from extrafun.errors import (FamilyMismatch, OutOfDomain,
                             PreconditionViolation, ShapeError,
                             UndefinedDerivative, ZeroScalar)
from extrafun.expr import NonDifferentiable
from extrafun.hyperspace import (ExprSeq, ListSeq, Verdict, Window, embed, hn,
                                 hyper_scale, is_stable_element, null_check,
                                 project, zero)
from extrafun.seminorm import absolute, compact_sup, pointwise

from oracles import (NUMPY_FIXTURES, bernstein_square_error,
                     bernstein_sup_error, central_difference, patched_two,
                     per_index_grid_sup)

UNIT = compact_sup([(0, 1)])
DECAY = "(1/2)^n*sin(2^n*x)"
XS = np.linspace(0, 1, 11)


def same_terms(f, g, indices=range(1, 20), xs=XS, tol=1e-12):
    return all(np.allclose(f.values(i, xs), g.values(i, xs), rtol=tol, atol=tol) for i in indices)


def basis():
    H = [project(s, UNIT) for s in ("sin(x)", "x^n", DECAY + " + x^2")]
    return BasisLinearSection(((H[0], "sin(x)"), (H[1], "x^n"), (H[2], "x^2 + (1/2)^n*sin(2^n*x)")))


# ------------------------------------------------------------ sections

def test_rep_section_returns_representative():
    F = project("x^n", UNIT)
    assert section_apply(RepSection(), F) is F.rep


def test_basis_linear_combination():
    B = basis()
    F = B.combine([2, -3, 0])
    r = section_apply(B, F)
    for i in (1, 5, 12):
        expected = 2 * np.sin(XS) - 3 * XS ** i
        np.testing.assert_allclose(r.values(i, XS), expected, atol=1e-14)
    assert project(r, UNIT).equals(F).holds


def test_basis_linear_domain():
    B = basis()
    with pytest.raises(OutOfDomain):
        B.apply(project("sin(x)", UNIT))
    with pytest.raises(FamilyMismatch):
        B.apply(project("sin(x)", pointwise([0.5])))
    with pytest.raises(ValueError):
        B.combine([1, 2])
    assert np.all(B.apply(B.combine([0, 0, 0])).values(3, XS) == 0)


def test_basis_must_be_independent():
    H = project("x", UNIT)
    with pytest.raises(ValueError):
        BasisLinearSection(((H, "x"), (project("x + (1/2)^n", UNIT), "x")))
    with pytest.raises(ValueError):
        BasisLinearSection(((H, "x + 1"),))


def test_patched_section_on_two():
    r = nonadditive_patched_section()
    s = r.apply(hn(2))
    assert [s.values(i, np.array([0.0]))[0] for i in range(1, 6)] == pytest.approx([patched_two(i) for i in range(1, 6)])
    # matched by equivalence, not by identity
    assert r.apply(hn("2 + 2^(-n)")) is s
    assert r.apply(hn(1)).values(4, np.array([0.0]))[0] == 1.0


def test_patched_section_is_not_additive():
    r = nonadditive_patched_section()
    d = check_section_additivity(r, hn(1), hn(1))
    assert d.fails
    # r(1) + r(1) = 2 and r(2) = 2 + 1/i already differ at the first term
    assert d.witness.index == 1
    assert d.witness.value == pytest.approx(1.0)
    assert check_section_additivity(RepSection(), hn(1), hn(1)).holds


# --------------------------------------------------------- derivatives

def test_lift_power_sequence():
    d = lift_partial_derivative(ExprSeq("x^n"))
    assert d.cutoff == 1
    xs = np.linspace(0.1, 0.9, 9)
    for i in (1, 2, 7):
        np.testing.assert_allclose(d.seq.values(i, xs), NUMPY_FIXTURES["n*x^(n - 1)"](xs, i), rtol=1e-12)
        np.testing.assert_allclose(d.seq.values(i, xs), central_difference(NUMPY_FIXTURES["x^n"], xs, i), rtol=1e-7)


def test_lift_cutoff_after_bad_head():
    d = lift_partial_derivative(ListSeq(["abs(x)"], "x^2"))
    assert d.cutoff == 2
    xs = np.array([-1.0, 0.5, 2.0])
    assert np.all(d.seq.values(1, xs) == 0)
    np.testing.assert_allclose(d.seq.values(2, xs), 2 * xs)
    np.testing.assert_allclose(d.seq.values(9, xs), 2 * xs)


def test_lift_undefined():
    with pytest.raises(UndefinedDerivative):
        lift_partial_derivative(ExprSeq("abs(x)"))
    with pytest.raises(UndefinedDerivative):
        lift_partial_derivative(ListSeq(["x"], "abs(x)"))


def test_lift_scans_mapped_sequences():
    from extrafun.hyperspace import MapSeq
    from extrafun.expr import parse
    f = MapSeq(lambda i: parse("abs(x)" if i < 5 else "x^3"), "abs early")
    d = lift_partial_derivative(f)
    assert d.cutoff == 5
    assert d.seq.values(5, np.array([2.0]))[0] == 12.0
    g = MapSeq(lambda i: parse("abs(x)" if i < 40 else "x"), "abs long")
    with pytest.raises(UndefinedDerivative):
        lift_partial_derivative(g, max_scan=30)


def test_sectional_derivative_examples():
    r = RepSection()
    D = sectional_derivative(r, project("x^n", UNIT))
    assert D.equals(project("n*x^(n - 1)", UNIT)).holds
    D = sectional_derivative(r, embed("x^2", UNIT))
    assert D.equals(embed("2*x", UNIT)).holds
    assert is_stable_element(D).holds
    for c in ("5", "pi", "1 + 1/n"):
        assert sectional_derivative(r, project(c, UNIT)).equals(zero(UNIT)).holds


# ------------------------------------------------------- irregularity

@pytest.mark.parametrize("Q", [UNIT, pointwise([0.3, 1.1])])
def test_irregularity_demo(Q):
    rep = irregularity_demo(Q)
    assert rep.equivalence.holds
    assert rep.derivative.fails
    assert rep.pattern == (Verdict.HOLDS, Verdict.FAILS)


def test_irregularity_witness_matches_oracle():
    rep = irregularity_demo(UNIT)
    # the term-wise derivative is cos(2^n x), whose grid max on [0, 1] is 1
    expected = per_index_grid_sup(NUMPY_FIXTURES["cos(2^n*x)"], 0, 1, [rep.derivative.witness.index])[0]
    assert rep.derivative.witness.value == pytest.approx(expected, abs=1e-12)
    assert rep.derivative.witness.value == pytest.approx(1.0, abs=1e-3)


def test_irregularity_identical_inputs():
    assert irregularity_demo(UNIT, f="0", g="0").pattern == (Verdict.HOLDS, Verdict.HOLDS)


# ----------------------------------------------------------- smoothing

def test_smoothing_zero_class():
    s = SmoothingSection().apply(zero(UNIT))
    for i in (1, 4, 9):
        assert np.all(s.values(i, np.linspace(-i, i, 9)) == 0)


def test_smoothing_null_stays_null():
    F = project(DECAY, UNIT)
    s = SmoothingSection().apply(F)
    assert null_check(s, UNIT).holds
    xs = np.linspace(0, 1, 1001)
    for i in (3, 8, 12):
        # Bernstein operators do not increase the sup norm
        assert np.max(np.abs(s.values(i, xs))) <= 0.5 ** i * (1 + 1e-9)


@pytest.mark.parametrize("i", [2, 4, 6])
def test_smoothing_matches_exact_bernstein(i):
    F = embed("sin(x)", UNIT)
    err = smoothing_error(F, SmoothingSection(), i, (-1, 1), grid=41)
    oracle = bernstein_sup_error(NUMPY_FIXTURES["sin(x)"], -i, i, 2 ** i, -1, 1, grid=41)
    assert err == pytest.approx(oracle, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("i", [3, 8, 12, 14, 20])
def test_smoothing_square_closed_form(i):
    F = embed("x^2", UNIT)
    d = min(2 ** i, 2 ** 14)
    err = smoothing_error(F, SmoothingSection(), i, (-i, i), grid=2 * i * 50 + 1)
    assert err == pytest.approx(bernstein_square_error(-i, i, d), rel=1e-6)


def test_smoothing_saturates_under_capped_degree():
    # with the degree capped, the error on [-1, 1] grows again with i
    F = embed("sin(x)", UNIT)
    r = SmoothingSection()
    errs = [smoothing_error(F, r, i, (-1, 1)) for i in (8, 14, 64)]
    assert errs[1] < errs[0]
    assert errs[2] > errs[1]


@pytest.mark.xfail(strict=True, reason="Bernstein error on [-i, i] is about i^2/degree, "
                                       "0.097 at i = 8, so the 1e-3 bound is out of reach")
def test_smoothing_sin_error_below_1e_3_from_i_8():
    F = embed("sin(x)", UNIT)
    r = SmoothingSection()
    assert all(smoothing_error(F, r, i, (-1, 1)) < 1e-3 for i in (8, 10, 12))


def test_smoothing_build_custom_schedule():
    F = embed("sin(x)", UNIT)
    s = smoothing_section_build(F, lambda i: (-1, 1), lambda i: 4 * i)
    xs = np.linspace(-1, 1, 21)
    assert np.max(np.abs(s.values(50, xs) - np.sin(xs))) < 2e-3


# ------------------------------------------------------- conjugations

FIX = ["x", "sin(x)", "x^n", DECAY, "exp(-x)"]


def test_identity_conjugations():
    r = RepSection()
    for s in FIX:
        F = project(s, UNIT)
        assert same_terms(conjugate_mt(1, r).apply(F), r.apply(F))
        assert same_terms(conjugate_ad("0", r).apply(F), r.apply(F))


def test_mt_conjugate_two():
    r = conjugate_mt(2, RepSection())
    for s in FIX:
        F = project(s, UNIT)
        out = r.apply(hyper_scale(2, F))
        for i in (1, 3, 6):
            np.testing.assert_allclose(out.values(i, XS), 2 * F.rep.values(i, XS), rtol=1e-14, atol=1e-15)


def test_conjugation_errors():
    with pytest.raises(ZeroScalar):
        conjugate_mt(0, RepSection())
    with pytest.raises(ShapeError):
        conjugate_ad("n*x", RepSection())
    assert conjugate_mt(0.5, RepSection()).a == Fraction(1, 2)


@pytest.mark.parametrize("a,e", [(2, "0"), (-1 / 3, "x"), (5, "sin(x)")])
def test_conjugated_sections_obey_section_law(a, e):
    for s in FIX:
        F = project(s, UNIT)
        for r in (conjugate_mt(a, RepSection()), conjugate_ad(e, RepSection())):
            assert project(r.apply(F), UNIT).equals(F).holds


def test_mt_commutes_with_derivative():
    B = basis()
    F = B.combine([1, 2, -1])
    r = conjugate_mt(3, B)
    lhs = sectional_derivative(r, hyper_scale(3, F))
    rhs = hyper_scale(3, sectional_derivative(B, F))
    assert lhs.equals(rhs).holds


# ---------------------------------------------------------- constancy

def test_constancy_constants():
    F = embed("5", UNIT)
    pts = [(0, 1), (0.2, 0.7), (-3, 4)]
    assert constancy_check(F, SmoothingSection(), pts).holds
    assert constancy_check(project("5 + 1/n", UNIT), RepSection(), pts).holds


def test_constancy_smoothed_oscillation():
    # smoothing averages the oscillation away: derivative and differences vanish
    F = project(DECAY, UNIT)
    assert constancy_check(F, SmoothingSection(), [(0, 1), (0.25, 0.5)]).holds


def test_constancy_precondition_violation():
    with pytest.raises(PreconditionViolation) as exc:
        constancy_check(project(DECAY, UNIT), RepSection(), [(0, 1)])
    assert exc.value.report.fails
    with pytest.raises(PreconditionViolation):
        constancy_check(embed("x", UNIT), RepSection(), [(0, 1)])


# ------------------------------------------------------------- Leibniz

def test_leibniz_examples():
    rng = np.random.default_rng(0)
    assert check_leibniz("x", "sin(x)", rng).holds
    assert check_leibniz("x^2", "x^3", rng).holds
    assert isinstance(check_leibniz("abs(x)", "x", rng), NonDifferentiable)


# ---------------------------------------------------------- properties

COEFFS = st.lists(st.floats(-5, 5, allow_nan=False).map(lambda v: round(v, 3)), min_size=3, max_size=3)
B = basis()


@settings(max_examples=15, deadline=None)
@given(COEFFS, COEFFS)
def test_basis_section_linear_laws(a, b):
    F, G = B.combine(a), B.combine(b)
    assert project(B.apply(F), UNIT).equals(F).holds
    assert check_additivity(B, F, G).holds


@settings(max_examples=15, deadline=None)
@given(COEFFS, st.floats(-5, 5, allow_nan=False))
def test_basis_section_homogeneity(a, c):
    assert check_homogeneity(B, c, B.combine(a)).holds


@settings(max_examples=10, deadline=None)
@given(COEFFS)
def test_basis_extension_unique(a):
    B2 = BasisLinearSection(B.basis)
    F = B.combine(a)
    assert compare_sequences(B.apply(F), B2.apply(F), UNIT, range(1, 33)).holds


@pytest.mark.parametrize("s", ["x", "sin(x)", "x^2 - 1", DECAY, "x^n", "1 + 1/n", "cos(2^n*x)", "0", "x/n"])
def test_rep_section_law(s):
    F = project(s, UNIT)
    assert project(RepSection().apply(F), UNIT).equals(F).holds


@pytest.mark.parametrize("s", ["1", "2", "-1/2", "1 + 1/n", "2^(-n)", "3 - 1/n", "pi"])
def test_patched_section_law(s):
    F = hn(s)
    assert project(nonadditive_patched_section().apply(F), absolute()).equals(F).holds


@pytest.mark.parametrize("s", ["x", "sin(x)", DECAY, "x^n", "cos(2^n*x)", "abs(x)", "abs(x - 1/n)"])
def test_smoothing_derivative_always_defined(s):
    d = lift_partial_derivative(SmoothingSection().apply(project(s, UNIT)), 16)
    assert d.cutoff == 1


@pytest.mark.parametrize("s", ["x", "sin(x)", "x^2 - 1", "exp(-x)", "x/(1 + x^2)", "5"])
def test_stable_derivative_is_stable(s):
    assert is_stable_element(sectional_derivative(RepSection(), embed(s, UNIT))).holds


@pytest.mark.parametrize("s", ["0", "1", "-2", "1/3", "pi", "1 + 1/n", "2^(-n)", "7 - 3/n^2"])
def test_constant_classes_have_zero_derivative(s):
    assert null_check(sectional_derivative(RepSection(), project(s, UNIT)).rep, UNIT).holds


def test_patched_section_additivity_fails():
    r = nonadditive_patched_section()
    # 2 + 1/n is equivalent to 2, so the class-level derivative law survives;
    # the section itself is what fails additivity
    assert check_section_additivity(r, hn(1), hn(1)).fails
    assert compare_sequences(r.apply(hn(1)), r.apply(hn(1)), absolute()).holds


def test_patched_override_requires_match():
    r = PatchedSection(RepSection(), ((hn(2), "5"),))
    assert r.apply(hn(3)).values(1, np.array([0.0]))[0] == 3.0


@pytest.mark.parametrize("e", ["0", "x", "sin(x)", "3"])
def test_ad_commutes_with_derivative(e):
    # for the (additive) stored-representative section the shift contributes de
    r = conjugate_ad(e, RepSection())
    for s in FIX:
        F = project(s, UNIT)
        lhs = sectional_derivative(r, F + embed(e, UNIT))
        rhs = sectional_derivative(RepSection(), F) + sectional_derivative(RepSection(), embed(e, UNIT))
        assert lhs.equals(rhs).holds
