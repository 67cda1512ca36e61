"""Averaging a projector matrix element over a monotone coupling.

For H(t) = H0 + t chi_j the eigenvalues move monotonically in t, and the
g-average of <phi, chi_j P_t(I) chi_j phi> is at most |I| sup g.
"""
import numpy as np

from wegnerlab import DensityBV, lattice_hamiltonian, spectral_averaging_check

H0 = lattice_hamiltonian(np.zeros(11)).toarray()
g = DensityBV.uniform(0.0, 4.0)
j = 5
w = np.zeros(11)
w[j] = 1.0
phi = np.zeros(11)
phi[j] = 1.0

for I in [(0.9, 1.1), (1.5, 2.5), (3.0, 3.2), (10.0, 11.0)]:
    res = spectral_averaging_check(H0, w, g, I, j, phi)
    print(f"I = {I}: average {res.lhs:.5f} <= bound {res.bound:.3f} "
          f"({len(res.crossings)} eigenvalue crossings, error {res.error:.1e})")

# On (0.9, 1.1) the average is 0: the eigenvector for eigenvalue 1 vanishes at
# the centre, and the eigenvalues that do move with t stay below 1 by interlacing.
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(50):
    phi = rng.normal(size=11)
    phi /= np.linalg.norm(phi)
    res = spectral_averaging_check(H0, w, g, (3.0, 3.2), j, phi)
    worst = max(worst, res.lhs / res.bound)
print(f"50 random phi: largest average / bound = {worst:.3f}")
