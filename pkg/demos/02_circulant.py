"""The finite-volume inverse: circulant A on the torus Q_{l+R}.

On the box Q_{l+R} the Laurent operator is replaced by the circulant matrix
with the same coefficients.  Its inverse is the fold of B onto the torus, and
the rows belonging to Q_{l+r} still see the true coefficients alpha_{j-k}.
"""
import numpy as np

from wegnerlab import (CoefficientField, build_circulant, column_sum_norm, fold_laurent_inverse,
                       invert_circulant, verify_rectangle_condition, wiener_inverse)

alpha = CoefficientField({0: 1.0, 1: -0.5})
l, r = 6, 0
R = r + alpha.D
A = build_circulant(alpha, l, R)
B = invert_circulant(A)
print(f"torus Q_{l + R}: {A.size} points")
print("first row of A:", A.matrix()[0].round(3).tolist())
print("max |AB - I| =", np.abs(A.matrix() @ B.matrix() - np.eye(A.size)).max())
print("rectangle condition:", verify_rectangle_condition(A, alpha, l, r, R))

w = wiener_inverse(alpha)
F = fold_laurent_inverse(w, l, R)
print("max |fold(B) - inv(A)| =", np.abs(F.coefficients - B.coefficients).max(),
      " tail bound", w.tail_bound)
# the fold of a sign-definite beta keeps its l1 norm
print(f"||B_torus||_1 = {column_sum_norm(B):.12f}, ||B||_1 = {w.column_sum_norm:.12f}")
