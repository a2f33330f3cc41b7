"""Discrete fractional integral and derivatives on uniformly sampled paths.

All three operators use product quadrature: the path is replaced by its
piecewise-linear interpolant and the weakly singular kernel is integrated in
closed form on every subinterval, so the singularity at s = t contributes
exactly.
"""
from __future__ import annotations

from enum import Enum

import numpy as np
from scipy.special import gamma

from .core import ModalPath, ScalarPath, order_value


class QuadratureKind(Enum):
    PRODUCT_LINEAR = "product-linear"


def _product_linear_weights(n: int, beta: float, h: float):
    """Per-offset weights for int_{t_{k-1}}^{t_k} (t_i - s)^{beta-1} f(s) ds
    with f piecewise linear. Offset d = i - k. Returns (w_left, w_right):
    the segment integral is w_left[d]*f[k-1] + w_right[d]*f[k], without the
    1/Gamma(beta) factor. Valid for beta > 0, and for beta < 0 on offsets
    d >= 1 (segment away from the singularity)."""
    d = np.arange(n, dtype=float)
    A = h**beta * ((d + 1) ** beta - d**beta) / beta
    B = h**beta * (
        (d + 1) * ((d + 1) ** beta - d**beta) / beta
        - ((d + 1) ** (beta + 1) - d ** (beta + 1)) / (beta + 1)
    )
    return A - B, B


def rl_integral(f: ScalarPath, beta) -> ScalarPath:
    """Riemann-Liouville integral J^beta f by product-linear quadrature."""
    b = order_value(beta)
    if not (0.0 < b <= 2.0):
        raise ValueError(f"integral order must lie in (0, 2]: {b}")
    v = f.values
    n = f.grid.n
    h = f.grid.h
    wl, wr = _product_linear_weights(n, b, h)
    # J[i] = sum_{d<i} wl[d]*v[i-1-d] + wr[d]*v[i-d]; both sums are convolutions.
    c1 = np.convolve(v, wl)[: n - 1]
    c2 = np.convolve(v, wr)[:n]
    J = np.zeros(n)
    J[1:] = (c1 + c2[1:] - wr[1:] * v[0]) / gamma(b)
    return ScalarPath(f.grid, J)


def rl_derivative(f: ScalarPath, alpha) -> ScalarPath:
    """Riemann-Liouville derivative: backward difference of J^{1-alpha} f.

    The value at t_0 is copied from t_1 (D^alpha f may blow up like t^{-alpha}
    there); meta["t0_extrapolated"] records this.
    """
    a = order_value(alpha)
    if not (0.0 < a < 1.0):
        raise ValueError(f"derivative order must lie in (0, 1): {a}")
    J = rl_integral(f, 1.0 - a).values
    D = np.empty(f.grid.n)
    D[1:] = np.diff(J) / f.grid.h
    D[0] = D[1]
    return ScalarPath(f.grid, D, meta={"t0_extrapolated": True})


def caputo_derivative(f: ScalarPath, alpha) -> ScalarPath:
    """Caputo derivative by the L1 scheme (piecewise-constant f' convolved
    exactly with the kernel). Value at t_0 is 0."""
    a = order_value(alpha)
    if not (0.0 < a < 1.0):
        raise ValueError(f"derivative order must lie in (0, 1): {a}")
    n = f.grid.n
    h = f.grid.h
    d = np.arange(n, dtype=float)
    b = (d + 1) ** (1.0 - a) - d ** (1.0 - a)
    df = np.diff(f.values)
    out = np.zeros(n)
    out[1:] = np.convolve(df, b)[: n - 1] * h ** (-a) / gamma(2.0 - a)
    return ScalarPath(f.grid, out)


def caputo_vs_rl_shift(f: ScalarPath, alpha) -> ScalarPath:
    """Cross-validation route: cD^alpha f = D^alpha (f - f(0))."""
    shifted = ScalarPath(f.grid, f.values - f.values[0])
    return rl_derivative(shifted, alpha)


def modal_map(op, u: ModalPath, order) -> ModalPath:
    """Apply a scalar fractional operator column by column."""
    cols = [op(u.column(j), order).values for j in range(u.modes)]
    return ModalPath(u.grid, np.column_stack(cols))
