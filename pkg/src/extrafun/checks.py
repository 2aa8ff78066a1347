"""Built-in fixtures and the property suites behind ``extrafun check``.

Every suite returns a list of :class:`PropertyResult` rows, one per property,
counting how many sampled instances behaved as expected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bundle, hyperspace as hs, topology as tp
from .expr import Const, as_expr
from .seminorm import (absolute, compact_sup, pointwise, test_integral)

FIXTURES = (
    "x", "sin(x)", "x^2 - 1", "exp(-x)", "cos(3*x)/2",
    "x/(1 + x^2)", "(1/2)^n*sin(2^n*x)", "x^n", "1 + 1/n", "sin(x + 1/n)",
)
STABLE_FIXTURES = ("x", "sin(x)", "x^2 - 1", "exp(-x)", "cos(3*x)/2", "x/(1 + x^2)", "5", "x^3/10")
CONSTANT_FIXTURES = ("0", "1", "5", "-2", "1/3", "pi", "exp(1)", "1 + 1/n", "2^(-n)", "7 - 3/n^2")
NUMBER_FIXTURES = ("1", "2", "-1/2", "1 + 1/n", "2^(-n)", "3 - 1/n", "pi", "(-1)^n/n")
BUMPS = ("sin(x)", "x", "1", "cos(3*x)", "x^2/(1 + x^2)")

UNIT = compact_sup([(0.0, 1.0)], label="compact[0,1]")
POINTS = pointwise([0.3, 1.1], label="points{0.3,1.1}")


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    passed: int
    total: int
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def perturbed(f, h, c=1.0) -> hs.FunSeq:
    """``f + c h / n``, a representative of the same class as ``f``."""
    return hs.seq_add(hs.as_seq(f), hs.ExprSeq(as_expr(f"{c!r}*({h})/n")))


def _rel_close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _pick(rng, items, k=1):
    idx = rng.choice(len(items), size=k, replace=k > len(items))
    return [items[i] for i in idx]


# ------------------------------------------------------------------ suites

def seminorm_axioms(rng, trials=20) -> list:
    families = {
        "pointwise": (pointwise([0.0, 0.3, 1.1, -2.0]), STABLE_FIXTURES),
        "compact-sup": (compact_sup([(0, 1), (-2, 3)]), STABLE_FIXTURES),
        "test-integral": (test_integral(["1", "x^2", "sin(x)"], 0, 2), STABLE_FIXTURES),
        "absolute": (absolute(), ("1", "-2", "1/3", "pi", "exp(1)", "0", "7/2")),
    }
    rows = []
    for kind, (Q, pool) in families.items():
        counts = dict(nonneg=0, zero=0, triangle=0, homogeneity=0)
        for _ in range(trials):
            f, g = (as_expr(s) for s in _pick(rng, pool, 2))
            c = float(rng.normal(scale=3))
            counts["zero"] += all(p.value(Const(0), 1) == 0 for p in Q.probes)
            counts["nonneg"] += all(p.value(f, 1) >= 0 for p in Q.probes)
            counts["triangle"] += all(
                p.value(f + g, 1) <= p.value(f, 1) + p.value(g, 1) + 1e-12 for p in Q.probes)
            counts["homogeneity"] += all(
                _rel_close(p.value(Const(c) * f, 1), abs(c) * p.value(f, 1)) for p in Q.probes)
        rows += [PropertyResult("seminorm-axioms", f"{kind}: {k}", v, trials) for k, v in counts.items()]
    return rows


def vector_laws(rng, trials=5, Q=UNIT) -> list:
    """The six vector-space identities, each side built from representatives."""
    laws = {
        "F + G = G + F": lambda F, G, H, a, b: (F + G, G + F),
        "F + (G + H) = (F + G) + H": lambda F, G, H, a, b: (F + (G + H), (F + G) + H),
        "a(F + G) = aF + aG": lambda F, G, H, a, b: (a * (F + G), a * F + a * G),
        "(a + b)F = aF + bF": lambda F, G, H, a, b: ((a + b) * F, a * F + b * F),
        "a(bF) = (ab)F": lambda F, G, H, a, b: (a * (b * F), (a * b) * F),
        "1F = F": lambda F, G, H, a, b: (1 * F, F),
    }
    rows = []
    for name, law in laws.items():
        ok = 0
        for _ in range(trials):
            F, G, H = (hs.project(s, Q) for s in _pick(rng, FIXTURES, 3))
            a, b = (float(v) for v in rng.normal(scale=2, size=2))
            lhs, rhs = law(F, G, H, a, b)
            ok += lhs.equals(rhs).holds
        rows.append(PropertyResult("vector-laws", name, ok, trials))
    return rows


def topology_strength(rng, trials=20) -> list:
    rows = []
    Q = UNIT
    strength = mono = indep = 0
    wide = compact_sup([(0.0, 1.0), (-1.0, 0.5)])
    for _ in range(trials):
        f, h = _pick(rng, FIXTURES, 1)[0], _pick(rng, BUMPS, 1)[0]
        g = hs.seq_add(hs.as_seq(f), hs.ExprSeq(as_expr(f"{rng.uniform(0, 0.6)!r}*({h})")))
        r = float(rng.uniform(0.1, 1.0))
        k = r * float(rng.uniform(0.05, 0.5))
        uni = tp.in_uniform_nbhd_seq(g, f, tp.UniformRadius(r, k), Q)
        loc = tp.in_local_nbhd_seq(g, f, tp.LocalRadii.uniform(r, Q), [k], Q)
        strength += (not uni.holds) or (not loc.fails)
        big = tp.in_uniform_nbhd_seq(g, f, tp.UniformRadius(r, k), wide)
        mono += (not big.holds) or (not uni.fails)
        alt = perturbed(f, h, float(rng.normal()))
        moved = tp.in_uniform_nbhd_seq(g, alt, tp.UniformRadius(r, k), Q)
        indep += not ({uni.verdict, moved.verdict} == {hs.Verdict.HOLDS, hs.Verdict.FAILS})
    rows.append(PropertyResult("topology-strength", "uniform => local", strength, trials))
    rows.append(PropertyResult("topology-strength", "more probes => fewer members", mono, trials))
    rows.append(PropertyResult("topology-strength", "representative independence", indep, trials))
    # equivalent-but-distinct sequences cannot be told apart by neighbourhoods;
    # the cutoff n(t) is the window start, so start late enough for small radii
    f, g = hs.ExprSeq("(1/2)^n*sin(2^n*x)"), hs.ExprSeq("0")
    radii = (0.5, 0.1, 0.01, 1e-3)
    late = hs.Window(24, 80)
    mutual = sum(
        tp.in_uniform_nbhd_seq(g, f, tp.UniformRadius(r, r / 2), Q, late).holds
        and tp.in_uniform_nbhd_seq(f, g, tp.UniformRadius(r, r / 2), Q, late).holds
        for r in radii)
    rows.append(PropertyResult("topology-strength", "not T0 on sequences", mutual, len(radii)))
    pairs = hausdorff_pairs()
    sep = 0
    for F, G in pairs:
        wit = tp.separation_witness(F, G)
        cands = tp.sample_candidates(F, G, 20, rng)
        sep += not any(tp.in_both(wit, F, G, c) for c in cands)
    rows.append(PropertyResult("topology-strength", "Hausdorff witness disjoint", sep, len(pairs)))
    return rows


def hausdorff_pairs():
    return [
        (hs.zero(UNIT), hs.project("cos(2^n*x)", UNIT)),
        (hs.project("sin(x)", UNIT), hs.project("cos(x)", UNIT)),
        (hs.hn(1), hs.hn(2)),
        (hs.project("x^2", POINTS), hs.project("x", POINTS)),
        (hs.project("x", UNIT), hs.project("x + 1/2 + 1/n", UNIT)),
    ]


def example_basis(Q=UNIT):
    """A three-element basis-linear section over ``Q``."""
    H = [hs.project(s, Q) for s in ("sin(x)", "x^n", "(1/2)^n*sin(2^n*x) + x^2")]
    return bundle.BasisLinearSection(((H[0], "sin(x)"), (H[1], "x^n"), (H[2], "x^2 + (1/2)^n*sin(2^n*x)")))


def section_laws(rng, trials=10) -> list:
    rows = []
    B = example_basis()
    B2 = bundle.BasisLinearSection(B.basis)
    patched = bundle.nonadditive_patched_section()
    rep = bundle.RepSection()

    def coeffs():
        return [float(v) for v in np.round(rng.normal(scale=2, size=3), 3)]

    law = add = hom = uniq = 0
    for _ in range(trials):
        F, G = B.combine(coeffs()), B.combine(coeffs())
        law += hs.project(B.apply(F), UNIT).equals(F).holds
        add += bundle.check_additivity(B, F, G).holds
        hom += bundle.check_homogeneity(B, float(rng.normal(scale=3)), F).holds
        uniq += bundle.compare_sequences(B.apply(F), B2.apply(F), UNIT, range(1, 33)).holds
    rows += [
        PropertyResult("section-laws", "basis-linear: section law", law, trials),
        PropertyResult("section-laws", "basis-linear: additivity", add, trials),
        PropertyResult("section-laws", "basis-linear: homogeneity", hom, trials),
        PropertyResult("section-laws", "basis-linear: unique extension", uniq, trials),
    ]
    law = 0
    for s in FIXTURES:
        law += hs.project(rep.apply(hs.project(s, UNIT)), UNIT).equals(hs.project(s, UNIT)).holds
    rows.append(PropertyResult("section-laws", "rep: section law", law, len(FIXTURES)))
    nums = [hs.hn(s) for s in NUMBER_FIXTURES]
    law = sum(hs.project(patched.apply(F), F.family).equals(F).holds for F in nums)
    rows.append(PropertyResult("section-laws", "patched: section law", law, len(nums)))
    not_add = bundle.check_section_additivity(patched, hs.hn(1), hs.hn(1)).fails
    rows.append(PropertyResult("section-laws", "patched: r(1) + r(1) differs from r(2) (expected)",
                               int(not_add), 1))
    not_uni = bundle.compare_sequences(hs.seq_scale(2, patched.apply(hs.hn(1))), patched.apply(hs.hn(2)),
                                       absolute()).fails
    rows.append(PropertyResult("section-laws", "patched: 2r(1) differs from r(2) (expected)", int(not_uni), 1))
    conj = 0
    for a, e in ((2, "0"), (-1 / 3, "x"), (5, "sin(x)")):
        for s in FIXTURES[:5]:
            F = hs.project(s, UNIT)
            for r in (bundle.conjugate_mt(a, rep), bundle.conjugate_ad(e, rep)):
                conj += hs.project(r.apply(F), UNIT).equals(F).holds
    rows.append(PropertyResult("section-laws", "conjugated sections: section law", conj, 30))
    const = sum(
        hs.null_check(bundle.sectional_derivative(rep, hs.project(s, UNIT)).rep, UNIT).holds
        for s in CONSTANT_FIXTURES)
    rows.append(PropertyResult("section-laws", "constant classes: derivative 0", const, len(CONSTANT_FIXTURES)))
    stab = sum(
        hs.is_stable_element(bundle.sectional_derivative(rep, hs.embed(s, UNIT))).holds
        for s in STABLE_FIXTURES)
    rows.append(PropertyResult("section-laws", "stable classes: stable derivative", stab, len(STABLE_FIXTURES)))
    smooth = bundle.SmoothingSection()
    defined = 0
    for s in FIXTURES + ("abs(x)", "abs(x - 1/n)"):
        bundle.lift_partial_derivative(smooth.apply(hs.project(s, UNIT)), 16)
        defined += 1
    rows.append(PropertyResult("section-laws", "smoothing: derivative defined", defined, len(FIXTURES) + 2))
    leib = 0
    pairs = [("x", "sin(x)"), ("x^2", "x^3"), ("exp(x)", "cos(2*x)"), ("log(x)", "x^n"), ("1/(1 + x^2)", "sin(x)^2")]
    for f, g in pairs:
        leib += bundle.check_leibniz(f, g, rng, n=3).holds
    rows.append(PropertyResult("section-laws", "Leibniz rule on L", leib, len(pairs)))
    return rows


SUITES = {
    "seminorm-axioms": seminorm_axioms,
    "vector-laws": vector_laws,
    "topology-strength": topology_strength,
    "section-laws": section_laws,
}


def run_suite(name: str, rng) -> list:
    if name == "all":
        return [row for suite in SUITES.values() for row in suite(rng)]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    return SUITES[name](rng)

