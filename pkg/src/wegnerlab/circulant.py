"""Finite-volume circulant matrices built from a coefficient field.

For a box ``Lambda_l`` and radius ``R`` the matrix ``A_Lambda`` lives on the
index cube ``Q_{l+R}`` with entries ``alpha_{pi(j-k)}``, where ``pi`` reduces
modulo ``(2(l+R)+1) Z^d``.  Being circulant it is diagonalized by the DFT,
and its inverse ``B_Lambda`` is again circulant.  The same inverse arises by
folding the Laurent inverse ``beta`` over cosets of the period lattice, which
gives ``||B_Lambda||_1 <= ||B||_1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidGeometry, SingularCirculant
from .geometry import BoxSpec, TorusProjection, enumerate_box, project
from .lattice import LatticeFunction
from .symbols import WienerInverse

__all__ = [
    "CirculantOperator",
    "build_circulant",
    "circulant_from_coefficients",
    "verify_rectangle_condition",
    "invert_circulant",
    "fold_laurent_inverse",
    "eta_from_omega",
    "column_sum_norm",
    "write_dense",
    "read_dense",
]


@dataclass(frozen=True, eq=False)
class CirculantOperator:
    """Circulant matrix on ``Q_s``: entry ``(j, k)`` is ``c[project(j - k)]``.

    ``coefficients`` is the centered array of ``c_m`` (index ``m + s``);
    ``eigenvalues`` are the DFT of ``c`` in FFT order, i.e. the symbol of
    ``c`` at the discrete frequencies ``2 pi n / (2s+1)``.
    """

    d: int
    s: int
    coefficients: np.ndarray
    eigenvalues: np.ndarray

    @property
    def period(self) -> int:
        return 2 * self.s + 1

    @property
    def box(self) -> BoxSpec:
        return BoxSpec(self.d, self.s)

    @property
    def size(self) -> int:
        return self.period ** self.d

    def matrix(self) -> np.ndarray:
        """Dense matrix in the lexicographic enumeration of ``Q_s``."""
        pts = enumerate_box(self.box)
        diff = project(TorusProjection(self.d, self.s), pts[:, None, :] - pts[None, :, :])
        return self.coefficients[tuple(np.moveaxis(diff + self.s, -1, 0))]

    def matvec(self, x) -> np.ndarray:
        """Exact product as a cyclic convolution over the nonzero coefficients."""
        x = np.asarray(x, dtype=float)
        grid = x.reshape((self.period,) * self.d)
        out = np.zeros_like(grid)
        for idx in np.argwhere(self.coefficients != 0):
            m = tuple(idx - self.s)
            out += self.coefficients[tuple(idx)] * np.roll(grid, m, axis=tuple(range(self.d)))
        return out.reshape(x.shape)


def circulant_from_coefficients(coefficients, s: int | None = None) -> CirculantOperator:
    """Circulant with the given centered generating array."""
    c = np.asarray(coefficients, dtype=float)
    if s is None:
        s = (c.shape[0] - 1) // 2
    if any(n != 2 * s + 1 for n in c.shape):
        raise InvalidGeometry(f"generating array must have shape {(2 * s + 1,) * c.ndim}")
    eig = np.fft.fftn(np.fft.ifftshift(c))
    return CirculantOperator(d=c.ndim, s=s, coefficients=c, eigenvalues=eig)


def build_circulant(alpha: LatticeFunction, l: int, R: int) -> CirculantOperator:
    """``A_Lambda`` on ``Q_{l+R}`` with entries ``alpha_{pi(j-k)}``.

    Requires ``l > R >= D`` where ``D`` is the support radius of ``alpha``.
    """
    D = alpha.radius
    if l <= R:
        raise InvalidGeometry(f"need l > R, got l={l}, R={R}")
    if R < D:
        raise InvalidGeometry(f"need R >= D, got R={R}, D={D}")
    return circulant_from_coefficients(alpha.dense(l + R), l + R)


def verify_rectangle_condition(A: CirculantOperator, alpha: LatticeFunction,
                               l: int, r: int, R: int) -> bool:
    """Brute-force check of ``A(j, k) == alpha_{j-k}`` for ``j in Q_{l+r}``, ``k in Q_{l+R}``."""
    if R != r + alpha.radius:
        raise InvalidGeometry(f"expected R = r + D = {r + alpha.radius}, got {R}")
    if A.s != l + R:
        raise InvalidGeometry(f"operator lives on Q_{A.s}, expected Q_{l + R}")
    M = A.matrix()
    rows = A.box.index_of(enumerate_box(BoxSpec(A.d, l + r)))
    cols = enumerate_box(A.box)
    j = enumerate_box(BoxSpec(A.d, l + r))
    diff = j[:, None, :] - cols[None, :, :]
    reach = int(np.abs(diff).max())
    laurent = alpha.dense(max(reach, alpha.radius))[tuple(np.moveaxis(diff + max(reach, alpha.radius), -1, 0))]
    return bool(np.array_equal(M[rows], laurent))


def invert_circulant(A: CirculantOperator, floor: float | None = None) -> CirculantOperator:
    """``B_Lambda = A^{-1}`` through the DFT eigenvalues.

    ``floor`` defaults to ``1e-12 * max|eigenvalue|``.
    """
    lam = A.eigenvalues
    modulus = np.abs(lam)
    if floor is None:
        floor = 1e-12 * modulus.max()
    if modulus.min() < floor:
        n = np.unravel_index(np.argmin(modulus), lam.shape)
        raise SingularCirculant(
            f"eigenvalue {lam[n]:.3e} at discrete frequency {n} is below the floor {floor:.3e}"
        )
    inv = 1.0 / lam
    c = np.fft.fftshift(np.fft.ifftn(inv).real)
    return CirculantOperator(d=A.d, s=A.s, coefficients=c, eigenvalues=inv)


def fold_laurent_inverse(beta: WienerInverse, l: int, R: int) -> CirculantOperator:
    """``B_Lambda(j, k) = sum_{p in j + P Z^d} beta_{p-k}``, ``P = 2(l+R)+1``."""
    s = l + R
    pts = np.argwhere(np.ones(beta.coefficients.shape, dtype=bool)) - beta.truncation_radius
    folded = project(TorusProjection(beta.d, s), pts) + s
    c = np.zeros((2 * s + 1,) * beta.d)
    np.add.at(c, tuple(folded.T), beta.coefficients.ravel())
    return circulant_from_coefficients(c, s)


def eta_from_omega(A: CirculantOperator, omega) -> np.ndarray:
    """Transformed couplings ``eta = A omega`` on ``Q_{l+R}``.

    ``omega`` is a flat vector in the lexicographic order of the cube (or an
    array of the cube's shape); the result has the same layout.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.size != A.size:
        raise InvalidGeometry(f"omega has {omega.size} entries, cube has {A.size}")
    return A.matvec(omega)


def column_sum_norm(M: CirculantOperator) -> float:
    """``sup_k sum_j |M(j, k)|``; every column of a circulant has the same sum."""
    return float(np.abs(M.coefficients).sum())


def write_dense(matrix, path) -> None:
    """Row-major text dump, one row per line, full double precision."""
    np.savetxt(path, np.atleast_2d(np.asarray(matrix)), fmt="%.17g")


def read_dense(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, ndmin=2))
