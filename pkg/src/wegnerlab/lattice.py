"""Finitely supported real functions on ``Z^d``."""
from __future__ import annotations

from typing import Mapping

import numpy as np

__all__ = ["LatticeFunction"]


def _as_key(k, d):
    if np.ndim(k) == 0:
        k = (int(k),)
    key = tuple(int(c) for c in k)
    if d is not None and len(key) != d:
        raise ValueError(f"key {k!r} has dimension {len(key)}, expected {d}")
    return key


class LatticeFunction:
    """A real function on ``Z^d`` with finite support.

    Keys may be given as tuples or, in one dimension, as plain integers.
    Exact zeros are dropped, so ``support`` and ``radius`` refer to the true
    support.

    >>> f = LatticeFunction({0: 2.0, 1: -1.0})
    >>> f.radius, f[(1,)], f[5]
    (1, -1.0, 0.0)
    """

    __slots__ = ("d", "_data")

    def __init__(self, values: Mapping, d: int | None = None):
        data = {}
        for k, v in dict(values).items():
            key = _as_key(k, d)
            if d is None:
                d = len(key)
            v = float(v)
            if v != 0.0:
                data[key] = data.get(key, 0.0) + v
        if d is None:
            raise ValueError("dimension cannot be inferred from an empty mapping")
        self.d = d
        self._data = dict(sorted(data.items()))

    @classmethod
    def from_dense(cls, array, radius: int | None = None):
        """Build from a centered array of shape ``(2s+1,) * d``."""
        array = np.asarray(array, dtype=float)
        s = (array.shape[0] - 1) // 2 if radius is None else radius
        idx = np.argwhere(array != 0)
        return cls({tuple(i - s): array[tuple(i)] for i in idx}, d=array.ndim)

    def __getitem__(self, k) -> float:
        return self._data.get(_as_key(k, self.d), 0.0)

    def __len__(self):
        return len(self._data)

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if not isinstance(other, LatticeFunction):
            return NotImplemented
        return self.d == other.d and self._data == other._data

    def __repr__(self):
        body = ", ".join(f"{k if self.d > 1 else k[0]}: {v:g}" for k, v in self._data.items())
        return f"{type(self).__name__}({{{body}}}, d={self.d})"

    def items(self):
        return self._data.items()

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return dict(self._data)

    @property
    def points(self) -> np.ndarray:
        if not self._data:
            return np.empty((0, self.d), dtype=np.int64)
        return np.array(list(self._data), dtype=np.int64)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array(list(self._data.values()), dtype=float)

    @property
    def radius(self) -> int:
        """Smallest ``s`` with support in ``Q_s``."""
        if not self._data:
            return 0
        return int(np.abs(self.points).max())

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.coefficients).sum())

    def scaled(self, c: float):
        return type(self)({k: c * v for k, v in self._data.items()}, d=self.d)

    def dense(self, radius: int | None = None) -> np.ndarray:
        """Values on ``Q_radius`` as a centered array (index ``x + radius``)."""
        s = self.radius if radius is None else radius
        if s < self.radius:
            raise ValueError(f"radius {s} does not cover the support (radius {self.radius})")
        out = np.zeros((2 * s + 1,) * self.d)
        if self._data:
            out[tuple((self.points + s).T)] = self.coefficients
        return out

    def convolve(self, other: "LatticeFunction") -> "LatticeFunction":
        """``(self * other)(x) = sum_k self(k) other(x - k)``."""
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        out: dict[tuple[int, ...], float] = {}
        for k, a in self._data.items():
            for j, b in other._data.items():
                key = tuple(x + y for x, y in zip(k, j))
                out[key] = out.get(key, 0.0) + a * b
        return LatticeFunction(out, d=self.d)
