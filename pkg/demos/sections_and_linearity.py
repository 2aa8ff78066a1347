"""Sections: which representative gets differentiated.

A basis-linear section is additive, so its derivative is linear.  The patched
section below is a legitimate section (every class is hit) but not additive.
"""
# %%
from extrafun import bundle, hn
from extrafun.checks import UNIT, example_basis
from extrafun.hyperspace import hyper_add, hyper_scale

B = example_basis(UNIT)
for H, q in B.basis:
    print(f"basis class with representative {q}")

# %%
F = B.combine([1.0, -2.0, 0.5])
G = B.combine([0.0, 3.0, 1.0])
a, b = 2.5, -1.0
lhs = bundle.sectional_derivative(B, hyper_add(hyper_scale(a, F), hyper_scale(b, G)))
rhs = hyper_add(hyper_scale(a, bundle.sectional_derivative(B, F)),
                hyper_scale(b, bundle.sectional_derivative(B, G)))
print("d(aF + bG) ~ a dF + b dG:", lhs.equals(rhs))

# %% [markdown]
# The patched section keeps stored representatives but sends the hypernumber 2
# to (2 + 1/n).

# %%
r = bundle.nonadditive_patched_section()
one, two = hn(1), hn(2)
for i in range(1, 5):
    s = 2 * r.apply(one).values(i, [0.0])[0]
    t = r.apply(two).values(i, [0.0])[0]
    print(f"  i={i}: r(1)+r(1) = {s:.4f}   r(2) = {t:.4f}")
print("as sequences:", bundle.check_section_additivity(r, one, one))
print("as classes:", hn("2 + 1/n").equals(two))
