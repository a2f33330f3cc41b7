"""Time grids and sampled paths shared by all operators and the solver."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class DegenerateInputError(ValueError):
    """Raised when an input is structurally valid but makes the quantity undefined."""


class AccuracyError(RuntimeError):
    """Raised when an internal accuracy target cannot be met."""


def order_value(order) -> float:
    """Accept a plain float or an Order wrapper."""
    return float(getattr(order, "alpha", order))


@dataclass(frozen=True)
class Order:
    """Fractional order. Range checks are done by each operator (derivatives
    need 0 < alpha < 1, integrals accept 0 < alpha <= 2)."""

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError(f"fractional order out of range (0, 2]: {self.alpha}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition of [0, T] with n nodes t_i = i*h, h = T/(n-1)."""

    horizon: float
    n: int

    def __post_init__(self):
        if not (self.horizon > 0.0 and math.isfinite(self.horizon)):
            raise ValueError(f"horizon must be positive and finite: {self.horizon}")
        if self.n < 2:
            raise ValueError(f"need at least 2 nodes: {self.n}")

    @property
    def h(self) -> float:
        return self.horizon / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        t = np.linspace(0.0, self.horizon, self.n)
        t.setflags(write=False)
        return t


def make_uniform_grid(T: float, n: int) -> TimeGrid:
    return TimeGrid(horizon=float(T), n=int(n))


@dataclass(frozen=True)
class ScalarPath:
    """Real-valued function of time sampled on a uniform grid."""

    grid: TimeGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"values shape {v.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite sample in path values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class ModalPath:
    """Trajectory of m modal coefficients; row i holds the coefficients at t_i."""

    grid: TimeGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != self.grid.n or v.shape[1] < 1:
            raise ValueError(f"values shape {v.shape} inconsistent with grid n={self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite entry in modal values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def modes(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> ScalarPath:
        return ScalarPath(self.grid, self.values[:, j])


def sample(fn: Callable[[float], float], grid: TimeGrid) -> ScalarPath:
    vals = np.array([fn(t) for t in grid.nodes], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("function produced non-finite sample on the grid")
    return ScalarPath(grid, vals)


def pointwise_inner(a: ModalPath, b: ModalPath) -> ScalarPath:
    """Node-wise Euclidean inner product of modal coefficients (Parseval form
    of the L2(Omega) inner product in an orthonormal eigenbasis)."""
    if a.grid != b.grid or a.modes != b.modes:
        raise ValueError("modal paths must share grid and mode count")
    return ScalarPath(a.grid, np.sum(a.values * b.values, axis=1))
