"""Eigenvalue counting and spectral averaging.

``count_below`` uses Sylvester's law of inertia: the number of eigenvalues
of ``H`` that are ``<= E`` equals the number of non-positive eigenvalues of
the block-diagonal factor ``D`` in ``H - E = L D L^T`` (Bunch-Kaufman).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg
import scipy.sparse as sp
from scipy.linalg import lapack

from .errors import InvalidInterval, QuadratureFailure
from .model import DensityBV

__all__ = [
    "count_below",
    "count_below_dense",
    "count_in_interval",
    "inertia",
    "projector_element",
    "local_projector_weights",
    "AveragingResult",
    "spectral_averaging_check",
    "PIVOT_TOLERANCE",
]

PIVOT_TOLERANCE = 1e-10


def _dense(H) -> np.ndarray:
    if sp.issparse(H):
        return H.toarray()
    return np.asarray(H, dtype=float)


def _scale(H: np.ndarray) -> float:
    s = float(np.abs(H).sum(axis=1).max()) if H.size else 0.0
    return s if s > 0 else 1.0


def inertia(S) -> tuple[int, int, float]:
    """``(n_negative, n_positive, min |pivot eigenvalue|)`` of a symmetric matrix."""
    S = _dense(S)
    n = S.shape[0]
    if n == 0:
        return 0, 0, math.inf
    lu, ipiv, info = lapack.dsytrf(S, lower=1)
    if info < 0:
        raise ValueError(f"dsytrf: illegal argument {-info}")
    neg = pos = 0
    smallest = math.inf
    k = 0
    while k < n:
        if ipiv[k] > 0:
            pivots = (lu[k, k],)
            k += 1
        else:
            a, b, c = lu[k, k], lu[k + 1, k], lu[k + 1, k + 1]
            half_tr = 0.5 * (a + c)
            rad = math.hypot(0.5 * (a - c), b)
            pivots = (half_tr - rad, half_tr + rad)
            k += 2
        for p in pivots:
            smallest = min(smallest, abs(p))
            if p < 0:
                neg += 1
            elif p > 0:
                pos += 1
    return neg, pos, smallest


def count_below_dense(H, E: float, tol: float = 0.0) -> int:
    """Number of eigenvalues ``<= E + tol`` from a full eigendecomposition."""
    w = scipy.linalg.eigvalsh(_dense(H))
    return int(np.count_nonzero(w <= E + tol))


def count_below(H, E: float, pivot_tolerance: float = PIVOT_TOLERANCE) -> int:
    """Exact count of eigenvalues ``<= E``.

    If a pivot of the factorization is within ``pivot_tolerance * ||H||_inf``
    of zero, an eigenvalue sits (numerically) at ``E``; the count then comes
    from ``eigvalsh`` and eigenvalues within that tolerance of ``E`` count as
    ``<= E``.
    """
    H = _dense(H)
    n = H.shape[0]
    if n == 0:
        return 0
    tol = pivot_tolerance * _scale(H)
    neg, _, smallest = inertia(H - E * np.eye(n))
    if smallest <= tol:
        return count_below_dense(H, E, tol)
    return neg


def count_in_interval(H, E1: float, E2: float) -> int:
    """Eigenvalues in the half-open interval ``(E1, E2]``."""
    if E1 > E2:
        raise InvalidInterval(f"E1={E1} > E2={E2}")
    if E1 == E2:
        return 0
    H = _dense(H)
    return count_below(H, E2) - count_below(H, E1)


def local_projector_weights(H, interval) -> np.ndarray:
    """Diagonal ``<e_j, P(I) e_j>`` of the spectral projector for ``I = (E1, E2]``."""
    E1, E2 = interval
    w, psi = scipy.linalg.eigh(_dense(H))
    mask = (w > E1) & (w <= E2)
    return (psi[:, mask] ** 2).sum(axis=1)


def projector_element(H, interval, j: int, phi) -> float:
    """``<phi, chi_j P(I) chi_j phi>`` for ``I = (E1, E2]``.

    ``chi_j`` projects onto site ``j`` (a row index of ``H``), so this is
    ``|phi_j|^2 <e_j, P(I) e_j>``.
    """
    phi = np.asarray(phi)
    return float(abs(phi[j]) ** 2 * local_projector_weights(H, interval)[j])


@dataclass(frozen=True)
class AveragingResult:
    lhs: float
    bound: float
    error: float
    passed: bool
    crossings: tuple[float, ...] = ()


def _crossings(count, lo, hi, n_lo, n_hi, xtol, out):
    # count(t) is non-increasing in t, so equal counts at both ends rule out a crossing
    if n_lo == n_hi:
        return
    if hi - lo <= xtol:
        out.extend([0.5 * (lo + hi)] * (n_lo - n_hi))
        return
    mid = 0.5 * (lo + hi)
    n_mid = count(mid)
    _crossings(count, lo, mid, n_lo, n_mid, xtol, out)
    _crossings(count, mid, hi, n_mid, n_hi, xtol, out)


def spectral_averaging_check(H0, w, g: DensityBV, interval, j: int, phi,
                             quadrature_points: int = 16, tolerance: float = 1e-8,
                             ) -> AveragingResult:
    """Integrate ``t -> <phi, chi_j P_t(I) chi_j phi>`` against ``g``, ``H_t = H0 + t diag(w)``.

    With ``w >= 0`` every eigenvalue of ``H_t`` is non-decreasing in ``t``, so
    the integrand only jumps where an eigenvalue crosses an endpoint of ``I``.
    These crossings are bracketed by bisection on the eigenvalue count; in
    between, the integrand is analytic and handled by adaptive Gauss-Kronrod.
    The bound is ``|I| sup g``.

    Raises
    ------
    QuadratureFailure
        If the accumulated error estimate exceeds ``tolerance``.
    """
    E1, E2 = interval
    if E1 > E2:
        raise InvalidInterval(f"E1={E1} > E2={E2}")
    H0 = _dense(H0)
    w = np.asarray(w, dtype=float)
    if np.any(w < 0) or w[j] < 1:
        raise ValueError("need w >= 0 and w[j] >= 1")
    phi = np.asarray(phi)
    if not np.isclose(np.linalg.norm(phi), 1.0):
        raise ValueError("phi must be a unit vector")
    weight = abs(phi[j]) ** 2

    def H(t):
        return H0 + np.diag(t * w)

    def integrand(t):
        return weight * local_projector_weights(H(t), (E1, E2))[j]

    lhs = err = 0.0
    all_crossings = []
    pieces = [(a, b, gv) for a, b, gv in zip(g.breakpoints[:-1], g.breakpoints[1:], g.piece_values) if gv > 0]
    budget = tolerance / (4 * max(len(pieces), 1))
    for a, b, gv in pieces:
        xtol = 1e-13 * max(1.0, b - a)
        cuts = []
        for E in (E1, E2):
            def count(t, E=E):
                return count_below(H(t), E)
            nodes = np.linspace(a, b, quadrature_points + 1)
            counts = [count(t) for t in nodes]
            for k in range(quadrature_points):
                _crossings(count, nodes[k], nodes[k + 1], counts[k], counts[k + 1], xtol, cuts)
        all_crossings += cuts
        # a mislocated jump (height <= weight) costs at most xtol each
        err += gv * weight * xtol * len(cuts)
        edges = np.unique(np.concatenate([[a, b], np.clip(cuts, a, b)]))
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi - lo <= 0:
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
                val, e = scipy.integrate.quad(integrand, lo, hi, epsabs=budget * 1e-2,
                                              epsrel=0.0, limit=200)
            lhs += gv * val
            err += gv * e
    if err > tolerance:
        raise QuadratureFailure(f"error estimate {err:.3e} exceeds tolerance {tolerance:.3e}")
    bound = (E2 - E1) * g.sup
    return AveragingResult(lhs=float(lhs), bound=float(bound), error=float(err),
                           passed=bool(lhs <= bound + err),
                           crossings=tuple(float(c) for c in sorted(all_crossings)))
