"""Monte Carlo checks of the Wegner bound and of the integrated density of states.

Realization ``i`` draws its couplings from the Philox stream ``(seed, i)``,
so a run is reproducible and parallel runs give the same per-realization
counts as serial ones.  All statistical verdicts use a 3 standard error
margin.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np

from .errors import InvalidInterval
from .model import (AndersonConfig, assemble_hamiltonian, lattice_hamiltonian, sample_omega,
                    total_potential, wegner_constant)
from .spectral import count_below, count_in_interval
from .symbols import WienerInverse, wiener_inverse

__all__ = [
    "WegnerReport",
    "IdsCurve",
    "SlopeVerdict",
    "SelfAveragingRow",
    "SelfAveragingTable",
    "realization_hamiltonian",
    "estimate_wegner",
    "estimate_ids",
    "lipschitz_check",
    "self_averaging_check",
    "SIGMAS",
]

SIGMAS = 3.0


def _finite_or_none(x):
    return float(x) if math.isfinite(x) else None


@dataclass(frozen=True)
class WegnerReport:
    config_digest: str
    e1: float
    e2: float
    realizations: int
    seed: int
    mean_count: float
    std_error: float
    volume: int
    ratio: float
    c_w: float
    slack_sigmas: float
    passed: bool
    counts: np.ndarray = field(repr=False, compare=False)

    @property
    def ratio_error(self) -> float:
        return self.std_error / (self.volume * (self.e2 - self.e1))

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("counts")
        d["pass"] = d.pop("passed")
        d["slack_sigmas"] = _finite_or_none(self.slack_sigmas)
        return d


@dataclass(frozen=True)
class IdsCurve:
    """Normalized counting function ``(2l+1)^{-d} N^l(E)`` averaged over realizations.

    ``samples[i, e]`` is the normalized count of realization ``i`` at energy ``e``.
    """

    energies: np.ndarray
    mean: np.ndarray
    std_error: np.ndarray
    box_sizes: tuple[int, ...]
    samples: np.ndarray = field(repr=False)
    config_digest: str = ""
    seed: int = 0

    @property
    def realizations(self) -> int:
        return self.samples.shape[0]

    def in_unit_interval(self) -> bool:
        return bool(np.all((self.mean >= 0) & (self.mean <= 1)))

    def monotone(self, sigmas: float = SIGMAS) -> bool:
        """Non-decreasing within ``sigmas`` standard errors of each difference."""
        diff = np.diff(self.samples, axis=1)
        se = diff.std(axis=0, ddof=1) / math.sqrt(self.realizations)
        return bool(np.all(diff.mean(axis=0) >= -sigmas * se))

    def to_dict(self) -> dict:
        return {
            "config_digest": self.config_digest,
            "seed": self.seed,
            "realizations": self.realizations,
            "box_sizes": list(self.box_sizes),
            "energies": self.energies.tolist(),
            "mean": self.mean.tolist(),
            "std_error": self.std_error.tolist(),
        }


def realization_hamiltonian(config: AndersonConfig, seed: int, index: int):
    """Sparse Hamiltonian of realization ``index``."""
    omega = sample_omega(config.f, config.coupling_box, seed, stream=index)
    return assemble_hamiltonian(config, omega)


class _Realizer:
    """Dense realizations with the hopping part assembled once."""

    def __init__(self, config, seed):
        self.config = config
        self.seed = seed
        self.hopping = lattice_hamiltonian(np.zeros(config.box.shape), config.boundary).toarray()

    def __call__(self, index):
        omega = sample_omega(self.config.f, self.config.coupling_box, self.seed, stream=index)
        H = self.hopping.copy()
        H[np.diag_indices_from(H)] += total_potential(self.config, omega)
        return H


def _interval_count(index, realize, e1, e2):
    return count_in_interval(realize(index), e1, e2)


def _normalized_counts(index, realize, energies):
    H = realize(index)
    return [count_below(H, E) / H.shape[0] for E in energies]


def _map(fn, n, workers):
    if workers is None or workers <= 1:
        return [fn(i) for i in range(n)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n), chunksize=max(1, n // (4 * workers))))


def estimate_wegner(config: AndersonConfig, e1: float, e2: float, M: int, seed: int,
                    wiener: WienerInverse | None = None, tolerance: float = 1e-12,
                    workers: int | None = None) -> WegnerReport:
    """Monte Carlo estimate of ``E{N(E2) - N(E1)}`` against ``C_W (2l+1)^d |E2 - E1|``.

    Raises ``SymbolVanishes`` when the symbol of ``alpha`` has a zero, i.e.
    no finite Wegner constant is available.
    """
    if not e1 < e2:
        raise InvalidInterval(f"need E1 < E2, got ({e1}, {e2})")
    if M < 2:
        raise ValueError("need at least 2 realizations")
    if wiener is None:
        wiener = wiener_inverse(config.alpha, tolerance)
    c_w = wegner_constant(config, wiener)
    counts = np.array(_map(partial(_interval_count, realize=_Realizer(config, seed), e1=e1, e2=e2),
                           M, workers), dtype=float)
    mean = float(np.sum(counts) / M)
    std_error = float(counts.std(ddof=1) / math.sqrt(M))
    scale = config.volume * (e2 - e1)
    ratio = mean / scale
    sigma = std_error / scale
    if sigma > 0:
        slack = (c_w - ratio) / sigma
    else:
        slack = math.inf if ratio <= c_w else -math.inf
    return WegnerReport(
        config_digest=config.digest(),
        e1=float(e1),
        e2=float(e2),
        realizations=M,
        seed=seed,
        mean_count=mean,
        std_error=std_error,
        volume=config.volume,
        ratio=ratio,
        c_w=c_w,
        slack_sigmas=slack,
        passed=bool(ratio <= c_w + SIGMAS * sigma),
        counts=counts,
    )


def estimate_ids(config: AndersonConfig, energies, M: int, seed: int,
                 workers: int | None = None) -> IdsCurve:
    energies = np.asarray(energies, dtype=float)
    if M < 2:
        raise ValueError("need at least 2 realizations")
    if np.any(np.diff(energies) < 0):
        raise ValueError("energy grid must be sorted")
    samples = np.array(_map(partial(_normalized_counts, realize=_Realizer(config, seed),
                                    energies=energies.tolist()), M, workers), dtype=float)
    samples = samples.reshape(M, energies.size)
    return IdsCurve(
        energies=energies,
        mean=samples.sum(axis=0) / M,
        std_error=samples.std(axis=0, ddof=1) / math.sqrt(M),
        box_sizes=(config.l,),
        samples=samples,
        config_digest=config.digest(),
        seed=seed,
    )


@dataclass(frozen=True)
class SlopeVerdict:
    e1: float
    e2: float
    slope: float
    sigma: float
    threshold: float
    passed: bool


def lipschitz_check(curve: IdsCurve, c_w: float, sigmas: float = SIGMAS) -> list[SlopeVerdict]:
    """Difference quotients of the curve against ``c_w`` on adjacent grid pairs.

    The standard error of each quotient comes from the per-realization
    differences, which keeps the correlation between neighbouring energies.
    """
    out = []
    E = curve.energies
    M = curve.realizations
    for k in range(E.size - 1):
        dE = E[k + 1] - E[k]
        if dE <= 0:
            continue
        diff = curve.samples[:, k + 1] - curve.samples[:, k]
        slope = float(diff.mean() / dE)
        sigma = float(diff.std(ddof=1) / math.sqrt(M) / dE)
        threshold = c_w + sigmas * sigma
        out.append(SlopeVerdict(float(E[k]), float(E[k + 1]), slope, sigma, threshold,
                                slope <= threshold))
    return out


@dataclass(frozen=True)
class SelfAveragingRow:
    l: int
    volume: int
    mean: float
    variance: float


@dataclass(frozen=True)
class SelfAveragingTable:
    energy: float
    rows: tuple[SelfAveragingRow, ...]
    non_increasing: bool


def self_averaging_check(config: AndersonConfig, sizes, E: float, M: int, seed: int,
                         slack: float = 2.0, workers: int | None = None) -> SelfAveragingTable:
    """Sample variance of ``(2l+1)^{-d} N^l(E)`` for each box size ``l``.

    ``non_increasing`` holds when each variance is at most ``slack`` times
    the previous one.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("box sizes must be increasing")
    rows = []
    for l in sizes:
        cfg = config.with_l(l)
        x = np.array(_map(partial(_normalized_counts, realize=_Realizer(cfg, seed), energies=[E]),
                          M, workers), dtype=float).ravel()
        rows.append(SelfAveragingRow(l=l, volume=cfg.volume, mean=float(x.sum() / M),
                                     variance=float(x.var(ddof=1))))
    ok = all(b.variance <= slack * a.variance + 1e-15 for a, b in zip(rows, rows[1:]))
    return SelfAveragingTable(energy=float(E), rows=tuple(rows), non_increasing=ok)
