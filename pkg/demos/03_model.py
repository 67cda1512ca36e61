"""From couplings to Hamiltonian, and why eta = A omega is useful.

The potential sum_k omega_k u(x - k) has sign-changing u.  Rewritten with
eta = A omega it becomes sum_m eta_m v(x - m) with non-negative v, the form
needed for spectral averaging.
"""
from pathlib import Path

import numpy as np

from wegnerlab import (assemble_hamiltonian, build_circulant, eta_from_omega, load_config,
                       random_potential, sample_omega, wegner_constant, wiener_inverse)

config, seed = load_config(Path(__file__).with_name("sign_changing.cfg"))
print(f"d = {config.d}, l = {config.l}, r = {config.r}, D = {config.D}, R = {config.R}")
print("u =", dict(config.u.values.items()))

omega = sample_omega(config.f, config.coupling_box, seed, stream=0)
V = random_potential(config, omega)
print("V on Q_l:", V.round(3).tolist())

A = build_circulant(config.alpha, config.l, config.R)
eta = eta_from_omega(A, omega)
# with v = chi_0 the potential is eta itself on Q_l
inner = eta[config.R - config.r: config.R - config.r + V.size]
print("max |V - eta| on Q_l:", np.abs(V - inner).max())

H = assemble_hamiltonian(config, omega)
print("H is", H.shape, "with", H.nnz, "non-zeros; spectrum in",
      np.linalg.eigvalsh(H.toarray())[[0, -1]].round(3).tolist())
print("C_W =", wegner_constant(config, wiener_inverse(config.alpha)))
