"""Is the coefficient field invertible, and how large is its inverse?

The Wegner constant carries the factor ||B||_1 where B is the inverse of the
Laurent operator (alpha_{j-k}).  It exists exactly when the symbol
alpha_hat(theta) = sum_k alpha_k exp(-i k theta) has no zero on the torus.
"""
import numpy as np

from wegnerlab import CoefficientField, certify_nonvanishing, wiener_inverse
from wegnerlab.errors import SymbolVanishes

for values in ({0: 2.0, 1: -1.0}, {0: 1.0, 1: -0.5}, {0: 1.0, 1: -0.9}, {0: 1.0, 1: -1.0}):
    alpha = CoefficientField(values)
    cert = certify_nonvanishing(alpha, 512)
    print(f"alpha = {dict(alpha.items())}")
    print(f"  min |symbol| on grid {cert.min_modulus_on_grid:.4f}, "
          f"certified lower bound {cert.certified_lower_bound:.4f}")
    try:
        w = wiener_inverse(alpha)
    except SymbolVanishes as exc:
        print(f"  no inverse: {exc}")
        continue
    print(f"  ||B||_1 = {w.column_sum_norm:.6f} (tail {w.tail_bound:.1e}, "
          f"grid {w.grid_points_per_axis})")
    print("  beta_0..beta_5 =", np.round([w[n] for n in range(6)], 6).tolist())

# alpha = 2 chi_0 - chi_1 inverts to the geometric series 2^-(n+1)
w = wiener_inverse(CoefficientField({0: 2.0, 1: -1.0}))
print("max |beta_n - 2^-(n+1)| for n <= 20:",
      max(abs(w[n] - 2.0 ** -(n + 1)) for n in range(21)))

# A two-dimensional field: the symbol factorizes, so ||B||_1 = 2 * 2
alpha2 = CoefficientField({(0, 0): 1.0, (1, 0): -0.5, (0, 1): -0.5, (1, 1): 0.25})
print("d = 2 product field, ||B||_1 =", round(wiener_inverse(alpha2).column_sum_norm, 10))
