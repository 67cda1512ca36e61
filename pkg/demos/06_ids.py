"""Integrated density of states, its Lipschitz bound and self-averaging."""
import numpy as np

from wegnerlab import (AndersonConfig, CoefficientField, DensityBV, SingleSiteProfile,
                       estimate_ids, lipschitz_check, self_averaging_check, wegner_constant,
                       wiener_inverse)

model = AndersonConfig(d=1, l=10, alpha=CoefficientField({0: 1.0, 1: -0.5}),
                       v=SingleSiteProfile.indicator(), f=DensityBV.uniform(0, 1))
c_w = wegner_constant(model, wiener_inverse(model.alpha))
curve = estimate_ids(model, np.linspace(-3.0, 3.5, 14), 500, seed=3)
for E, m, s in zip(curve.energies, curve.mean, curve.std_error):
    print(f"  N({E:5.2f}) = {m:.3f} +- {s:.3f}  " + "#" * int(40 * m))
slopes = lipschitz_check(curve, c_w)
print(f"largest slope {max(v.slope for v in slopes):.3f}, Lipschitz bound C_W = {c_w}")

table = self_averaging_check(model, [10, 20, 40], E=0.5, M=200, seed=4)
for row in table.rows:
    print(f"  l = {row.l:3d}: mean {row.mean:.4f}, variance {row.variance:.2e}")
print("variance non-increasing:", table.non_increasing)
