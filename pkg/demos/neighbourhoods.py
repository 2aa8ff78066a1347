"""Neighbourhoods on sequences and a Hausdorff separation witness."""
# %%
import numpy as np

from extrafun import topology as tp
from extrafun.hyperspace import ExprSeq, Window, project, zero
from extrafun.seminorm import compact_sup

unit = compact_sup([(0, 1)])
f, g = ExprSeq("(1/2)^n*sin(2^n*x)"), ExprSeq("0")

# %% [markdown]
# Equivalent sequences sit in each other's neighbourhoods, however small.
# The cutoff n(t) is the window start, so small radii need a later window.

# %%
late = Window(24, 80)
for r in (0.5, 1e-2, 1e-3):
    u = tp.UniformRadius(r, r / 2)
    a = tp.in_uniform_nbhd_seq(g, f, u, unit, late).verdict.value
    b = tp.in_uniform_nbhd_seq(f, g, u, unit, late).verdict.value
    print(f"radius {r:g}: g near f {a}, f near g {b}")

# %%
F, G = zero(unit), project("cos(2^n*x)", unit)
w = tp.separation_witness(F, G)
print(f"gap k = {w.gap:.4f}, radius k/4 = {w.radius:.4f}, {len(w.witness_indices)} witness indices")
rng = np.random.default_rng(0)
cands = tp.sample_candidates(F, G, 50, rng)
print("sampled sequences near both:", sum(tp.in_both(w, F, G, c) for c in cands))
