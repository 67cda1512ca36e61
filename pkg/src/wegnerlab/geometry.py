"""Lattice cubes ``Q_s = {-s, ..., s}^d`` and the periodizing projection.

Points are stored as integer arrays of shape ``(n, d)``.  The enumeration of
a cube is lexicographic in the coordinates, so it coincides with C-order
flattening of an array of shape ``(2s+1,) * d`` indexed by ``x + s``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BoxSpec",
    "TorusProjection",
    "enumerate_box",
    "project",
    "offsets_in_sublattice",
]


@dataclass(frozen=True)
class BoxSpec:
    """The cube ``Q_s`` in ``Z^d``."""

    d: int
    s: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be positive, got {self.d}")
        if self.s < 0:
            raise ValueError(f"half-side must be non-negative, got {self.s}")

    @property
    def side(self) -> int:
        return 2 * self.s + 1

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.side,) * self.d

    @property
    def size(self) -> int:
        return self.side ** self.d

    def contains(self, m) -> bool:
        m = np.asarray(m)
        return bool(np.all(np.abs(m) <= self.s))

    def index_of(self, points) -> np.ndarray | int:
        """Ordinal(s) of lattice point(s) in the enumeration of the cube."""
        pts = np.asarray(points, dtype=np.int64)
        scalar = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.d:
            raise ValueError(f"expected points of dimension {self.d}")
        if np.any(np.abs(pts) > self.s):
            raise IndexError("point outside the cube")
        idx = np.ravel_multi_index(tuple((pts + self.s).T), self.shape)
        return int(idx[0]) if scalar else idx

    def point_at(self, index) -> np.ndarray:
        """Inverse of :meth:`index_of`."""
        coords = np.unravel_index(np.asarray(index), self.shape)
        return np.stack(coords, axis=-1).astype(np.int64) - self.s


def enumerate_box(box: BoxSpec) -> np.ndarray:
    """All points of ``Q_s`` in lexicographic order, shape ``(size, d)``."""
    axis = range(-box.s, box.s + 1)
    return np.array(list(itertools.product(axis, repeat=box.d)), dtype=np.int64)


@dataclass(frozen=True)
class TorusProjection:
    """Reduction modulo the sub-lattice ``(2s+1) Z^d`` into the centered cube ``Q_s``."""

    d: int
    s: int

    @property
    def period(self) -> int:
        return 2 * self.s + 1

    @property
    def box(self) -> BoxSpec:
        return BoxSpec(self.d, self.s)


def project(pi: TorusProjection, m) -> np.ndarray:
    """Representative of ``m`` modulo ``P Z^d`` inside ``Q_s`` (``P = 2s+1``).

    Works on a single point or on an array of points (last axis = coordinates).
    """
    m = np.asarray(m, dtype=np.int64)
    return np.mod(m + pi.s, pi.period) - pi.s


def offsets_in_sublattice(pi: TorusProjection, m, radius: int) -> np.ndarray:
    """Points of ``m + P Z^d`` with max-norm at most ``radius``, lexicographic."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    m = np.atleast_1d(np.asarray(m, dtype=np.int64))
    if m.shape != (pi.d,):
        raise ValueError(f"expected a point of dimension {pi.d}")
    P = pi.period
    per_axis = []
    for mi in m:
        lo = -((radius + mi) // P)  # smallest z with mi + zP >= -radius
        hi = (radius - mi) // P
        per_axis.append([mi + z * P for z in range(lo, hi + 1)])
    if any(len(c) == 0 for c in per_axis):
        return np.empty((0, pi.d), dtype=np.int64)
    return np.array(list(itertools.product(*per_axis)), dtype=np.int64)
