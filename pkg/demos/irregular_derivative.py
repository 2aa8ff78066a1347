"""Two representatives of the zero class with different derivatives.

Run with ``python3 demos/irregular_derivative.py``.
"""
# %%
import numpy as np

from extrafun import ExprSeq, compact_sup, equivalent, lift_partial_derivative, pointwise

f = ExprSeq("(1/2)^n*sin(2^n*x)")
g = ExprSeq("0")
unit = compact_sup([(0, 1)])

# %% [markdown]
# The sup of f_n on [0, 1] is 2^-n, so f and g are equivalent.

# %%
d = equivalent(f, g, unit)
print("f ~ g on [0,1]:", d)
trace = d.traces[0]
for i, v in list(zip(trace.indices, trace.values))[::8]:
    print(f"  n={i:2d}  sup|f_n - g_n| = {v:.3e}")

# %% [markdown]
# Differentiate term by term. f'_n = cos(2^n x) does not shrink at all.

# %%
df = lift_partial_derivative(f).seq
dg = lift_partial_derivative(g).seq
print("f'_n =", df)
dd = equivalent(df, dg, unit)
print("f' ~ g' on [0,1]:", dd)
print("witness:", dd.witness)

# %%
# same picture with two point evaluations
pts = pointwise([0.3, 1.1])
print("pointwise:", equivalent(f, g, pts).verdict.value, equivalent(df, dg, pts).verdict.value)

# %%
xs = np.linspace(0, 1, 5)
for n in (4, 16, 40):
    print(n, np.round(df.values(n, xs), 3))
