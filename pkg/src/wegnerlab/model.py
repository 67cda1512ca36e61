"""Discrete Anderson model with a generalised step function single site potential.

The random potential on ``Z^d`` is ``V_omega(x) = sum_k omega_k u(x - k)``
with ``u = sum_k alpha_k v(. - k)`` and i.i.d. couplings ``omega_k`` drawn
from a piecewise-constant density.  Restricted to the box ``Q_l`` only the
couplings on ``Q_{l+R}`` matter, ``R = r + D``.
"""
from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, InvalidGeometry
from .geometry import BoxSpec, enumerate_box
from .lattice import LatticeFunction
from .symbols import CoefficientField, WienerInverse

__all__ = [
    "SingleSiteProfile",
    "GeneralizedStepPotential",
    "DensityBV",
    "PeriodicPotential",
    "AndersonConfig",
    "build_u",
    "bv_norm",
    "rescale_kappa",
    "coupling_uniforms",
    "sample_omega",
    "lattice_hamiltonian",
    "random_potential",
    "total_potential",
    "assemble_hamiltonian",
    "wegner_constant",
    "potential_bound",
    "load_config",
    "dump_config",
    "BOUNDARIES",
]

BOUNDARIES = ("truncated", "periodic")


class SingleSiteProfile:
    """Non-negative ``v`` with ``v(0) >= kappa``."""

    def __init__(self, values, kappa: float | None = None, d: int | None = None):
        self.values = values if isinstance(values, LatticeFunction) else LatticeFunction(values, d)
        origin = self.values[(0,) * self.values.d]
        self.kappa = float(origin if kappa is None else kappa)
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if origin < self.kappa:
            raise ValueError(f"v(0) = {origin} is smaller than kappa = {self.kappa}")
        if np.any(self.values.coefficients < 0):
            raise ValueError("single site profile must be non-negative")

    @classmethod
    def indicator(cls, d: int = 1, kappa: float = 1.0):
        """``kappa`` times the indicator of the origin."""
        return cls({(0,) * d: kappa}, kappa=kappa)

    @property
    def d(self) -> int:
        return self.values.d

    @property
    def r(self) -> int:
        return self.values.radius

    def __eq__(self, other):
        if not isinstance(other, SingleSiteProfile):
            return NotImplemented
        return self.values == other.values and self.kappa == other.kappa

    def __repr__(self):
        return f"SingleSiteProfile({self.values!r}, kappa={self.kappa:g})"


@dataclass(frozen=True, eq=False)
class GeneralizedStepPotential:
    """``u = sum_k alpha_k v(. - k)``; ``R = r + D`` bounds its support radius."""

    values: LatticeFunction
    R: int

    def __getitem__(self, x) -> float:
        return self.values[x]


def build_u(alpha: LatticeFunction, v: SingleSiteProfile) -> GeneralizedStepPotential:
    if alpha.d != v.d:
        raise ValueError("alpha and v must have the same dimension")
    return GeneralizedStepPotential(alpha.convolve(v.values), R=v.r + alpha.radius)


class DensityBV:
    """Piecewise-constant probability density on ``[breakpoints[0], breakpoints[-1]]``.

    ``piece_values[i]`` is the density on ``[breakpoints[i], breakpoints[i+1])``.
    """

    def __init__(self, breakpoints, piece_values):
        b = np.asarray(breakpoints, dtype=float)
        p = np.asarray(piece_values, dtype=float)
        if b.ndim != 1 or p.ndim != 1 or b.size != p.size + 1 or p.size == 0:
            raise ValueError("need n+1 breakpoints for n pieces")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(p < 0):
            raise ValueError("density must be non-negative")
        mass = p * np.diff(b)
        total = mass.sum()
        if not np.isclose(total, 1.0, rtol=1e-9, atol=0):
            raise ValueError(f"density integrates to {total}, not 1")
        self.breakpoints = b
        self.piece_values = p
        self._cum = np.concatenate([[0.0], np.cumsum(mass)])

    @classmethod
    def uniform(cls, lo: float, hi: float):
        return cls([lo, hi], [1.0 / (hi - lo)])

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def sup(self) -> float:
        return float(self.piece_values.max())

    @property
    def bv_norm(self) -> float:
        """Total variation of the density as a function on the whole line."""
        padded = np.concatenate([[0.0], self.piece_values, [0.0]])
        return float(np.abs(np.diff(padded)).sum())

    @property
    def mean(self) -> float:
        b = self.breakpoints
        return float(np.sum(self.piece_values * (b[1:] ** 2 - b[:-1] ** 2)) / 2)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        i = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (i >= 0) & (i < self.piece_values.size)
        return np.where(inside, self.piece_values[np.clip(i, 0, self.piece_values.size - 1)], 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        b, p = self.breakpoints, self.piece_values
        i = np.clip(np.searchsorted(b, x, side="right") - 1, 0, p.size - 1)
        val = self._cum[i] + p[i] * (x - b[i])
        return np.clip(np.where(x < b[0], 0.0, np.where(x >= b[-1], 1.0, val)), 0.0, 1.0)

    def ppf(self, u):
        """Inverse CDF; zero-mass pieces are never selected."""
        u = np.asarray(u, dtype=float)
        b, p = self.breakpoints, self.piece_values
        last = int(np.flatnonzero(p > 0)[-1])
        i = np.clip(np.searchsorted(self._cum, u, side="right") - 1, 0, last)
        return b[i] + (u - self._cum[i]) / p[i]

    def rescaled(self, kappa: float) -> "DensityBV":
        """Density of ``kappa * omega``: ``x -> f(x / kappa) / kappa``."""
        return DensityBV(kappa * self.breakpoints, self.piece_values / kappa)

    def __eq__(self, other):
        if not isinstance(other, DensityBV):
            return NotImplemented
        return (np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.piece_values, other.piece_values))

    def __repr__(self):
        return f"DensityBV({self.breakpoints.tolist()}, {self.piece_values.tolist()})"


def bv_norm(f: DensityBV) -> float:
    return f.bv_norm


def rescale_kappa(v: SingleSiteProfile, f: DensityBV) -> tuple[SingleSiteProfile, DensityBV]:
    """Move ``kappa`` from the profile into the coupling distribution.

    ``sum_k (kappa omega_k)(u/kappa)(x-k)`` is the same potential, ``v/kappa >= chi``
    and the new density has BV norm ``||f||_BV / kappa``.
    """
    if v.kappa == 1.0:
        return v, f
    k = v.kappa
    return SingleSiteProfile(v.values.scaled(1.0 / k), kappa=1.0), f.rescaled(k)


@dataclass(frozen=True, eq=False)
class PeriodicPotential:
    """``V_per`` on ``Z^d``, invariant under ``n Z^d``; ``values`` has shape ``(n,) * d``."""

    values: np.ndarray

    @classmethod
    def zero(cls, d: int = 1):
        return cls(np.zeros((1,) * d))

    @property
    def period(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.ndim

    def __call__(self, points) -> np.ndarray:
        pts = np.mod(np.asarray(points, dtype=np.int64), self.period)
        return self.values[tuple(np.moveaxis(pts, -1, 0))]

    def __eq__(self, other):
        return isinstance(other, PeriodicPotential) and np.array_equal(self.values, other.values)


@dataclass(frozen=True, eq=False)
class AndersonConfig:
    d: int
    l: int
    alpha: CoefficientField
    v: SingleSiteProfile
    f: DensityBV
    boundary: str = "truncated"
    v_per: PeriodicPotential | None = None

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.l < 0:
            raise InvalidGeometry("l must be non-negative")
        if self.alpha.d != self.d or self.v.d != self.d:
            raise InvalidGeometry("alpha and v must have the model's dimension")
        if self.v_per is None:
            object.__setattr__(self, "v_per", PeriodicPotential.zero(self.d))
        elif self.v_per.d != self.d:
            raise InvalidGeometry("periodic potential has the wrong dimension")

    @property
    def kappa(self) -> float:
        return self.v.kappa

    @property
    def r(self) -> int:
        return self.v.r

    @property
    def D(self) -> int:
        return self.alpha.radius

    @property
    def R(self) -> int:
        return self.r + self.D

    @cached_property
    def u(self) -> GeneralizedStepPotential:
        return build_u(self.alpha, self.v)

    @property
    def box(self) -> BoxSpec:
        return BoxSpec(self.d, self.l)

    @property
    def coupling_box(self) -> BoxSpec:
        """``Q_{l+R}``: all couplings that reach the box."""
        return BoxSpec(self.d, self.l + self.R)

    @property
    def volume(self) -> int:
        return self.box.size

    def with_l(self, l: int) -> "AndersonConfig":
        return replace(self, l=l)

    def to_dict(self) -> dict:
        return {
            "dimension": self.d,
            "l": self.l,
            "boundary": self.boundary,
            "kappa": self.kappa,
            "alpha": [[*k, v] for k, v in self.alpha.items()],
            "v": [[*k, v] for k, v in self.v.values.items()],
            "density": {"breakpoints": self.f.breakpoints.tolist(),
                        "values": self.f.piece_values.tolist()},
            "v_per": {"period": self.v_per.period, "values": self.v_per.values.ravel().tolist()},
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def coupling_uniforms(box: BoxSpec, seed: int, stream: int = 0) -> np.ndarray:
    """Uniform variates for realization ``stream``.

    Philox streams keyed by ``(seed, stream)`` make every realization
    reproducible on its own, independent of execution order.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(ss)).random(box.size)


def sample_omega(f: DensityBV, box: BoxSpec, seed: int, stream: int = 0) -> np.ndarray:
    """I.i.d. couplings on ``box`` (lexicographic order) by inverse-CDF sampling."""
    return f.ppf(coupling_uniforms(box, seed, stream))


def lattice_hamiltonian(potential, boundary: str = "truncated") -> sp.csr_array:
    """``-Delta + diag(potential)`` on a rectangular grid of sites.

    ``potential`` has one axis per lattice direction.  Hopping is ``-1``
    between nearest neighbours; with ``boundary="periodic"`` each axis wraps.
    There is no ``2d`` on the diagonal.
    """
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    V = np.asarray(potential, dtype=float)
    shape = V.shape
    n = V.size
    index = np.arange(n).reshape(shape)
    rows, cols = [np.arange(n)], [np.arange(n)]
    data = [V.ravel()]
    for axis, size in enumerate(shape):
        if boundary == "periodic":
            src = index
            dst = np.roll(index, -1, axis=axis)
        else:
            if size < 2:
                continue
            src = np.take(index, np.arange(size - 1), axis=axis)
            dst = np.take(index, np.arange(1, size), axis=axis)
        src, dst = src.ravel(), dst.ravel()
        rows += [src, dst]
        cols += [dst, src]
        data += [-np.ones(src.size), -np.ones(src.size)]
    H = sp.coo_array((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                     shape=(n, n))
    return H.tocsr()


def random_potential(config: AndersonConfig, omega) -> np.ndarray:
    """``V_omega`` on ``Q_l`` (array of shape ``(2l+1,) * d``)."""
    omega = np.asarray(omega, dtype=float)
    cbox = config.coupling_box
    if omega.size != cbox.size:
        raise InvalidGeometry(f"omega has {omega.size} entries, expected {cbox.size} on Q_{cbox.s}")
    W = omega.reshape(cbox.shape)
    l, R = config.l, config.R
    side = 2 * l + 1
    V = np.zeros((side,) * config.d)
    for q, uq in config.u.values.items():
        # x - q + (l+R) for x in Q_l
        start = [R - qi for qi in q]
        V += uq * W[tuple(slice(s, s + side) for s in start)]
    return V


def total_potential(config: AndersonConfig, omega) -> np.ndarray:
    """``V_per + V_omega`` on ``Q_l``, flattened in lexicographic order."""
    V = random_potential(config, omega).ravel()
    return V + config.v_per(enumerate_box(config.box))


def assemble_hamiltonian(config: AndersonConfig, omega) -> sp.csr_array:
    """``H = -Delta + V_per + V_omega`` restricted to ``Q_l``."""
    V = total_potential(config, omega).reshape(config.box.shape)
    return lattice_hamiltonian(V, config.boundary)


def wegner_constant(config: AndersonConfig, wiener: WienerInverse) -> float:
    """``||f||_BV ||B||_1 / kappa`` (energy independent for the lattice model)."""
    return config.f.bv_norm * wiener.column_sum_norm / config.kappa


def potential_bound(config: AndersonConfig) -> float:
    """Upper bound on ``sup |V_per + V_omega|`` over all realizations."""
    omega_max = max(abs(x) for x in config.f.support)
    return float(np.abs(config.v_per.values).max() + omega_max * config.u.values.l1_norm)


# -- config files --------------------------------------------------------------
#
# [model]                    [alpha]          [density]
# dimension = 1              0 = 1.0          breakpoints = 0 1
# l = 10                     1 = -0.5         values = 1
# boundary = truncated
# kappa = 1                  [v]              [v_per]
# seed = 7                   0 = 1.0          period = 1
#                                             0 = 0.0
#
# Lattice entries are "k_1 ... k_d = value"; [v_per] entries index the period cell.


def _entries(section, d, skip=()):
    out = {}
    for key, raw in section.items():
        if key in skip:
            continue
        try:
            k = tuple(int(x) for x in key.split())
            val = float(raw)
        except ValueError:
            raise ConfigError(f"[{section.name}] bad entry {key!r} = {raw!r}") from None
        if len(k) != d:
            raise ConfigError(f"[{section.name}] index {key!r} should have {d} components")
        out[k] = val
    return out


def _floats(section, key):
    try:
        return [float(x) for x in section[key].split()]
    except KeyError:
        raise ConfigError(f"[{section.name}] missing {key!r}") from None
    except ValueError:
        raise ConfigError(f"[{section.name}] {key!r} must be a list of numbers") from None


def load_config(path) -> tuple[AndersonConfig, int | None]:
    """Read an INI-style model file; returns the config and the optional seed."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), delimiters=("=",))
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    for name in ("model", "alpha", "v", "density"):
        if not cp.has_section(name):
            raise ConfigError(f"config {path} has no [{name}] section")
    m = cp["model"]
    try:
        d = m.getint("dimension")
        l = m.getint("l")
        kappa = m.getfloat("kappa", fallback=None)
        seed = m.getint("seed", fallback=None)
        boundary = m.get("boundary", fallback="truncated")
    except ValueError as exc:
        raise ConfigError(f"[model] {exc}") from None
    if d is None or l is None:
        raise ConfigError("[model] needs 'dimension' and 'l'")
    try:
        alpha = CoefficientField(_entries(cp["alpha"], d), d=d)
        v = SingleSiteProfile(_entries(cp["v"], d), kappa=kappa, d=d)
        f = DensityBV(_floats(cp["density"], "breakpoints"), _floats(cp["density"], "values"))
        v_per = None
        if cp.has_section("v_per"):
            sec = cp["v_per"]
            n = sec.getint("period", fallback=1)
            cell = np.zeros((n,) * d)
            for k, val in _entries(sec, d, skip=("period",)).items():
                if any(not 0 <= c < n for c in k):
                    raise ConfigError(f"[v_per] index {k} outside the period cell")
                cell[k] = val
            v_per = PeriodicPotential(cell)
        config = AndersonConfig(d=d, l=l, alpha=alpha, v=v, f=f, boundary=boundary, v_per=v_per)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return config, seed


def dump_config(config: AndersonConfig, path, seed: int | None = None) -> None:
    def key(k):
        return " ".join(map(str, k))

    lines = ["[model]", f"dimension = {config.d}", f"l = {config.l}",
             f"boundary = {config.boundary}", f"kappa = {config.kappa!r}"]
    if seed is not None:
        lines.append(f"seed = {seed}")
    lines += ["", "[alpha]"] + [f"{key(k)} = {v!r}" for k, v in config.alpha.items()]
    lines += ["", "[v]"] + [f"{key(k)} = {v!r}" for k, v in config.v.values.items()]
    lines += ["", "[density]",
              "breakpoints = " + " ".join(repr(x) for x in config.f.breakpoints.tolist()),
              "values = " + " ".join(repr(x) for x in config.f.piece_values.tolist())]
    cell = config.v_per.values
    lines += ["", "[v_per]", f"period = {config.v_per.period}"]
    lines += [f"{key(k)} = {float(cell[k])!r}" for k in np.ndindex(cell.shape) if cell[k] != 0]
    Path(path).write_text("\n".join(lines) + "\n")
