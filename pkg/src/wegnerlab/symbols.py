"""Coefficient sequences, their trigonometric symbols, and Wiener inversion.

The symbol of a finitely supported sequence ``alpha`` is the trigonometric
polynomial ``sum_k alpha_k exp(-i k.theta)``.  When it has no zero on the
torus, ``1/symbol`` has an absolutely summable Fourier series ``beta``; the
Laurent matrix ``(beta_{j-k})`` inverts ``(alpha_{j-k})`` and its column sum
norm ``sum_n |beta_n|`` enters the Wegner constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, NoConvergence, SymbolVanishes
from .lattice import LatticeFunction

__all__ = [
    "CoefficientField",
    "SymbolCertificate",
    "WienerInverse",
    "evaluate_symbol",
    "symbol_on_grid",
    "check_diagonal_dominance",
    "certify_nonvanishing",
    "wiener_inverse",
    "read_coefficients",
    "write_coefficients",
    "parse_coefficients",
    "format_coefficients",
    "VANISHING_FLOOR",
]

# relative to max |symbol|; below this inversion is meaningless in double precision
VANISHING_FLOOR = 1e-12


class CoefficientField(LatticeFunction):
    """Finitely supported, not identically zero coefficients ``alpha``.

    ``D`` is the support radius: the smallest cube ``Q_D`` containing every
    nonzero coefficient.
    """

    __slots__ = ()

    def __init__(self, values, d=None):
        super().__init__(values, d)
        if len(self) == 0:
            raise ValueError("coefficient field must have at least one nonzero value")

    @property
    def D(self) -> int:
        return self.radius


def evaluate_symbol(alpha: LatticeFunction, theta) -> complex | np.ndarray:
    """Exact finite sum ``sum_k alpha_k exp(-i k.theta)``.

    ``theta`` is a point of the torus (shape ``(d,)``, or a scalar if ``d == 1``)
    or a stack of points with coordinates on the last axis.
    """
    theta = np.asarray(theta, dtype=float)
    if alpha.d == 1 and (theta.ndim == 0 or theta.shape[-1] != 1):
        theta = theta[..., None]
    phase = theta @ alpha.points.T.astype(float)
    out = np.exp(-1j * phase) @ alpha.coefficients
    return complex(out) if out.ndim == 0 else out


def symbol_on_grid(alpha: LatticeFunction, n: int) -> np.ndarray:
    """Symbol at ``theta = 2 pi m / n`` for ``m in {0..n-1}^d`` (FFT order).

    Folding the coefficients modulo ``n`` first is exact, since
    ``exp(-2 pi i k m / n)`` only depends on ``k mod n``.
    """
    folded = np.zeros((n,) * alpha.d)
    np.add.at(folded, tuple(np.mod(alpha.points, n).T), alpha.coefficients)
    return np.fft.fftn(folded)


def check_diagonal_dominance(alpha: LatticeFunction) -> bool:
    """True iff one coefficient strictly exceeds the sum of the moduli of all others.

    This is a sufficient condition for the symbol to vanish nowhere.
    """
    a = np.abs(alpha.coefficients)
    if a.size == 0:
        return False
    return bool(np.any(a > a.sum() - a))


@dataclass(frozen=True)
class SymbolCertificate:
    grid_points_per_axis: int
    min_modulus_on_grid: float
    lipschitz_bound: float
    certified_lower_bound: float
    nonvanishing: bool

    @property
    def vanishes_on_grid(self) -> bool:
        """An exact zero was sampled, so the symbol definitely vanishes."""
        return self.min_modulus_on_grid == 0.0


def certify_nonvanishing(alpha: LatticeFunction, grid_points_per_axis: int = 256) -> SymbolCertificate:
    """Rigorous lower bound for ``|symbol|`` on the whole torus.

    Every torus point lies within Euclidean distance ``(pi/n) sqrt(d)`` of a
    grid point, and the symbol is Lipschitz with constant ``sum_k |k|_2 |alpha_k|``.
    A ``nonvanishing=False`` certificate is inconclusive unless
    ``vanishes_on_grid`` holds.
    """
    n = int(grid_points_per_axis)
    if n < 2:
        raise ValueError("need at least 2 grid points per axis")
    modulus = np.abs(symbol_on_grid(alpha, n))
    min_mod = float(modulus.min())
    lipschitz = float(np.sum(np.linalg.norm(alpha.points, axis=1) * np.abs(alpha.coefficients)))
    lower = min_mod - lipschitz * (math.pi / n) * math.sqrt(alpha.d)
    return SymbolCertificate(
        grid_points_per_axis=n,
        min_modulus_on_grid=min_mod,
        lipschitz_bound=lipschitz,
        certified_lower_bound=lower,
        nonvanishing=lower > 0,
    )


@dataclass(frozen=True)
class WienerInverse:
    """Fourier coefficients of ``1/symbol`` on the centered cube ``Q_truncation_radius``.

    ``coefficients[n + truncation_radius]`` holds ``beta_n``.  ``tail_bound``
    is the l1 distance between the last two refinement levels; it bounds the
    mass of ``beta`` missed by the previous level and is a conservative error
    estimate for the stored one.
    """

    d: int
    coefficients: np.ndarray
    truncation_radius: int
    tail_bound: float
    column_sum_norm: float
    grid_points_per_axis: int

    def __getitem__(self, n) -> float:
        key = np.atleast_1d(np.asarray(n, dtype=np.int64))
        if np.any(np.abs(key) > self.truncation_radius):
            return 0.0
        return float(self.coefficients[tuple(key + self.truncation_radius)])

    def as_field(self, threshold: float = 0.0) -> LatticeFunction:
        c = np.where(np.abs(self.coefficients) > threshold, self.coefficients, 0.0)
        return LatticeFunction.from_dense(c)

    def deconvolution_residual(self, alpha: LatticeFunction) -> float:
        """``max_n |sum_k alpha_k beta_{n-k} - delta_{n,0}|`` over the stored window."""
        s = self.truncation_radius
        acc = np.zeros_like(self.coefficients)
        for k, a in alpha.items():
            acc += a * _shift(self.coefficients, k)
        acc[(s,) * self.d] -= 1.0
        return float(np.abs(acc).max())


def _shift(array, k):
    """``out[n] = array[n - k]`` with zero fill."""
    out = np.zeros_like(array)
    src, dst = [], []
    for kk, size in zip(k, array.shape):
        if abs(kk) >= size:
            return out
        if kk >= 0:
            src.append(slice(0, size - kk))
            dst.append(slice(kk, size))
        else:
            src.append(slice(-kk, size))
            dst.append(slice(0, size + kk))
    out[tuple(dst)] = array[tuple(src)]
    return out


def _periodized_inverse(alpha, n):
    sym = symbol_on_grid(alpha, n)
    modulus = np.abs(sym)
    if modulus.min() < VANISHING_FLOOR * modulus.max():
        raise SymbolVanishes(
            f"|symbol| drops to {modulus.min():.3e} on a {n}-point grid "
            f"(max {modulus.max():.3e}); the inverse Laurent operator is unbounded"
        )
    beta = np.fft.ifftn(1.0 / sym).real
    return np.fft.fftshift(beta)


def _embed(small, big_shape):
    out = np.zeros(big_shape)
    offset = tuple((b - s) // 2 for b, s in zip(big_shape, small.shape))
    out[tuple(slice(o, o + s) for o, s in zip(offset, small.shape))] = small
    return out


def wiener_inverse(alpha: LatticeFunction, tolerance: float = 1e-12,
                   max_grid_points: int = 2 ** 23) -> WienerInverse:
    """Fourier coefficients of ``1/symbol`` by sampling on refined grids.

    Sampling ``1/symbol`` on ``n^d`` points and inverting the DFT gives the
    ``n``-periodization of ``beta``.  Grids grow by a factor of three (odd
    sizes keep the centered cube exact) until successive coefficient arrays
    differ by less than ``tolerance`` in l1.

    Raises
    ------
    SymbolVanishes
        If a grid sample falls below ``VANISHING_FLOOR`` relative to the
        largest sample.
    NoConvergence
        If the grid would exceed ``max_grid_points`` before converging.
    """
    d = alpha.d
    n = 9
    while n < 4 * alpha.radius + 1:
        n *= 3
    prev = _periodized_inverse(alpha, n)
    while True:
        n_next = 3 * n
        if n_next ** d > max_grid_points:
            raise NoConvergence(
                f"no convergence to {tolerance:g} within {max_grid_points} grid points "
                f"(last grid {n}^{d})"
            )
        cur = _periodized_inverse(alpha, n_next)
        diff = float(np.abs(cur - _embed(prev, cur.shape)).sum())
        n, prev = n_next, cur
        if diff <= tolerance:
            break
    return WienerInverse(
        d=d,
        coefficients=cur,
        truncation_radius=(n - 1) // 2,
        tail_bound=diff,
        column_sum_norm=float(np.abs(cur).sum()),
        grid_points_per_axis=n,
    )


# -- text format: one "k_1 ... k_d value" line per entry, '#' starts a comment


def parse_coefficients(text: str, d: int | None = None) -> CoefficientField:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ConfigError(f"line {lineno}: expected 'k_1 ... k_d value', got {raw!r}")
        if d is None:
            d = len(parts) - 1
        elif len(parts) - 1 != d:
            raise ConfigError(f"line {lineno}: expected {d} indices, got {len(parts) - 1}")
        try:
            key = tuple(int(p) for p in parts[:-1])
            value = float(parts[-1])
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate index {key}")
        entries[key] = value
    if not entries:
        raise ConfigError("no coefficients found")
    try:
        return CoefficientField(entries, d=d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def format_coefficients(alpha: LatticeFunction) -> str:
    lines = [f"# d = {alpha.d}"]
    lines += [" ".join(map(str, k)) + f" {v!r}" for k, v in alpha.items()]
    return "\n".join(lines) + "\n"


def read_coefficients(path, d: int | None = None) -> CoefficientField:
    return parse_coefficients(Path(path).read_text(), d=d)


def write_coefficients(alpha: LatticeFunction, path) -> None:
    Path(path).write_text(format_coefficients(alpha))
