"""Monte Carlo check of the Wegner estimate.

E{N(E2) - N(E1)} <= C_W |Q_l| |E2 - E1| with C_W = ||f||_BV ||B||_1 / kappa.
The first model has a single site and an exact answer; the second has a
sign-changing single-site potential.
"""
from wegnerlab import (AndersonConfig, CoefficientField, DensityBV, SingleSiteProfile,
                       estimate_wegner)

one_site = AndersonConfig(d=1, l=0, alpha=CoefficientField({0: 1.0}),
                          v=SingleSiteProfile.indicator(), f=DensityBV.uniform(0, 1))
rep = estimate_wegner(one_site, 0.2, 0.5, 10_000, seed=1)
print(f"one site: E N(I) = {rep.mean_count:.4f} +- {rep.std_error:.4f} (exact 0.3), "
      f"bound {rep.c_w * 0.3:.2f}")

model = AndersonConfig(d=1, l=10, alpha=CoefficientField({0: 1.0, 1: -0.5}),
                       v=SingleSiteProfile.indicator(), f=DensityBV.uniform(0, 1))
print(f"sign-changing, |Q_l| = {model.volume}")
for e1, e2 in [(-1.05, -0.95), (0.2, 0.3), (1.45, 1.55), (0.245, 0.255)]:
    rep = estimate_wegner(model, e1, e2, 2000, seed=2)
    print(f"  I = ({e1}, {e2}]: ratio {rep.ratio:.3f} +- {rep.ratio_error:.3f} "
          f"vs C_W = {rep.c_w:.1f}  {'pass' if rep.passed else 'FAIL'}")
