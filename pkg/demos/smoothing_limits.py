"""Bernstein smoothing makes every term differentiable, at a price.

Term i is replaced by the degree min(2^i, 2^14) Bernstein polynomial on
[-i, i].  The error on a fixed interval first drops, then climbs once the
degree stops growing while the interval keeps widening: roughly i^2/degree.
"""
# %%
from extrafun import bundle, embed, project
from extrafun.seminorm import compact_sup

Q = compact_sup([(-1, 1)])
section = bundle.SmoothingSection()
for src in ("sin(x)", "x^2", "abs(x)"):
    F = embed(src, Q)
    errs = [bundle.smoothing_error(F, section, i, (-1, 1)) for i in (4, 8, 12, 14, 24, 64)]
    print(f"{src:7s}", "  ".join(f"{e:.2e}" for e in errs))

# %% [markdown]
# x^2 has the closed form (2i)^2 / (4 d): at i = 12 that is 576/4096.

# %%
F = embed("abs(x)", Q)
D = bundle.sectional_derivative(section, F, 16)
print("derivative of the smoothed |x| is defined:", D.rep)
smoothed = project(section.apply(F), Q)
print("smoothed |x| still in the class of |x|:", smoothed.equals(F))
