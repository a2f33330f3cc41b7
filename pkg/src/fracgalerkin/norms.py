"""Discrete norms, the Slobodeckij seminorm, and operator-bound reports.

The empirical constants below (GLY bracket, K_SUP, K_LIFT, K_CRITICAL) are
regression values: they were calibrated once on the frozen corpus at n = 4096
on [0, 1] and are not sharp. Only the p-to-p bound carries an explicit
analytic constant, T^alpha / Gamma(alpha + 1).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .core import DegenerateInputError, ModalPath, ScalarPath, order_value
from .fracops import rl_integral

# Calibration (frozen regression values, n = 4096, T = 1):
#   GLY ratio ||f||_L2 / ||J^g f||_{W^{g,2}} over {sin(k pi t)}_{k=1..10}, gamma = 0.4.
GLY_BRACKET_04 = (0.404895, 0.662809)
#   Empirical operator constants over the 20-function corpus (see tests), x1.15 headroom.
K_SUP = 1.30       # sup-norm regime, calibrated at alpha=0.75, p=2 (observed 1.126)
K_LIFT = 1.14      # L^p -> L^{p/(1-p*alpha)} regime, alpha=0.25, p=2 (observed 0.987)
K_CRITICAL = 1.00  # J^{1/p}: L^p -> L^q regime, p=2, q=4 (observed 0.864)

_DEFAULT_REPORT_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    constant_used: float
    satisfied: bool
    slack: float
    report_tol: float
    regime: str = ""

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant_used": self.constant_used,
            "satisfied": self.satisfied,
            "slack": self.slack,
            "report_tol": self.report_tol,
            "regime": self.regime,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def _make_report(lhs, rhs, constant, tol, regime=""):
    slack = rhs - lhs
    return BoundReport(
        lhs=float(lhs), rhs=float(rhs), constant_used=float(constant),
        satisfied=bool(slack >= -tol), slack=float(slack),
        report_tol=float(tol), regime=regime,
    )


def lp_time_norm(f: ScalarPath, p) -> float:
    """Composite-trapezoid L^p(0,T) norm; max over nodes for p = inf."""
    if p == math.inf:
        return float(np.abs(f.values).max())
    p = float(p)
    if p < 1.0:
        raise ValueError(f"p must be >= 1 or inf: {p}")
    return float(np.trapezoid(np.abs(f.values) ** p, dx=f.grid.h) ** (1.0 / p))


def l2_omega_norm(u_row) -> float:
    """L2(Omega) norm of a field given by modal coefficients (Parseval)."""
    row = np.asarray(u_row, dtype=float)
    if not np.all(np.isfinite(row)):
        raise ValueError("non-finite modal coefficient")
    return float(np.linalg.norm(row))


def h10_norm(u_row, basis) -> float:
    """H^1_0(Omega) norm via eigenvalues: sqrt(sum_j lambda_j g_j^2)."""
    row = np.asarray(u_row, dtype=float)
    lam = np.asarray(basis.eigenvalues, dtype=float)
    if row.shape != lam.shape:
        raise ValueError(f"coefficient/eigenvalue shape mismatch: {row.shape} vs {lam.shape}")
    return float(math.sqrt(np.sum(lam * row * row)))


def _as_matrix(f) -> tuple[np.ndarray, float, int]:
    if isinstance(f, ScalarPath):
        return f.values[:, None], f.grid.h, f.grid.n
    if isinstance(f, ModalPath):
        return f.values, f.grid.h, f.grid.n
    raise TypeError("expected ScalarPath or ModalPath")


def slobodeckij_seminorm(f, gm: float) -> float:
    """Gagliardo seminorm [f]_{W^{gm,2}(0,T)} by double trapezoid quadrature.

    Cells with |t - s| < h are excluded from the sum and replaced by the
    local linear model f(t) - f(s) ~ f'(t)(t - s), integrated in closed
    form; this band is the dominant error source for gm near 1.
    """
    gm = float(gm)
    if not (0.0 < gm < 1.0):
        raise ValueError(f"gamma must lie in (0, 1): {gm}")
    F, h, n = _as_matrix(f)
    Fp = np.gradient(F, h, axis=0, edge_order=2)
    fp2 = np.sum(Fp * Fp, axis=1)
    wt = np.full(n, h)
    wt[0] = wt[-1] = h / 2.0
    dist = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :]) * h
    band_coef = h ** (2.0 - 2.0 * gm) / (2.0 - 2.0 * gm)
    total = 0.0
    for i in range(n):
        diff2 = np.sum((F - F[i]) ** 2, axis=1)
        g = np.zeros(n)
        mask = dist[i] > 0
        g[mask] = diff2[mask] / dist[i][mask] ** (2.0 * gm + 1.0)
        inner = 0.0
        if i > 1:  # trapezoid over s in [0, t_i - h]
            w = np.full(i, h)
            w[0] = w[-1] = h / 2.0
            inner += g[:i] @ w
        if i < n - 2:  # trapezoid over s in [t_i + h, T]
            w = np.full(n - 1 - i, h)
            w[0] = w[-1] = h / 2.0
            inner += g[i + 1:] @ w
        sides = 2.0 if 0 < i < n - 1 else 1.0
        inner += sides * fp2[i] * band_coef
        total += wt[i] * inner
    return float(math.sqrt(total))


def sobolev_slobodeckij_norm(f, gm: float) -> float:
    """Full W^{gm,2} norm: sqrt(L2^2 + seminorm^2)."""
    F, h, _ = _as_matrix(f)
    l2sq = float(np.trapezoid(np.sum(F * F, axis=1), dx=h))
    return float(math.sqrt(l2sq + slobodeckij_seminorm(f, gm) ** 2))


def gly_equivalence_report(f: ScalarPath, gm: float, bracket=None,
                           report_tol: float = _DEFAULT_REPORT_TOL) -> BoundReport:
    """Ratio ||f||_{L2} / ||J^gm f||_{W^{gm,2}} against a configured bracket.

    The default bracket is the frozen gamma = 0.4 calibration; pass one
    explicitly for other gamma.
    """
    gm = float(gm)
    if not (0.0 < gm < 1.0):
        raise ValueError(f"gamma must lie in (0, 1): {gm}")
    if bracket is None:
        if abs(gm - 0.4) > 1e-12:
            raise ValueError("no default bracket calibrated for this gamma; pass one")
        bracket = GLY_BRACKET_04
    num = lp_time_norm(f, 2.0)
    den = sobolev_slobodeckij_norm(rl_integral(f, gm), gm)
    if den == 0.0:
        raise DegenerateInputError("J^gamma f vanishes identically; ratio undefined")
    ratio = num / den
    lo, hi = bracket
    inside = (lo - report_tol) <= ratio <= (hi + report_tol)
    slack = min(ratio - lo, hi - ratio)
    return BoundReport(
        lhs=ratio, rhs=hi, constant_used=lo, satisfied=bool(inside),
        slack=float(slack), report_tol=report_tol, regime="gly",
    )


def jalpha_bound_report(f: ScalarPath, alpha, p: float, regime: str | None = None,
                        q: float | None = None,
                        report_tol: float | None = None) -> BoundReport:
    """Boundedness report for J^alpha on L^p(0,T).

    Regimes: "p-to-p" (explicit constant T^alpha/Gamma(alpha+1), always
    applicable), "sup" (alpha > 1/p), "lift" (alpha < 1/p, target exponent
    p/(1 - p*alpha)), "critical" (alpha = 1/p, target L^q). When regime is
    None it is inferred; p = 1 or p = inf admit only p-to-p.
    """
    a = order_value(alpha)
    if not (0.0 < a < 1.0):
        raise ValueError(f"alpha must lie in (0, 1): {a}")
    if p != math.inf and float(p) < 1.0:
        raise ValueError(f"p must be >= 1 or inf: {p}")
    T = f.grid.horizon
    if regime is None:
        if p == math.inf or float(p) == 1.0:
            regime = "p-to-p"
        elif a > 1.0 / float(p):
            regime = "sup"
        elif a < 1.0 / float(p):
            regime = "lift"
        else:
            regime = "critical"
    J = rl_integral(f, a)
    fnorm = lp_time_norm(f, p)
    if regime == "p-to-p":
        tol = 10.0 * f.grid.h if report_tol is None else report_tol
        const = T**a / gamma(a + 1.0)
        return _make_report(lp_time_norm(J, p), const * fnorm, const, tol, regime)
    if p == math.inf or float(p) <= 1.0:
        raise ValueError(f"regime {regime!r} needs 1 < p < inf")
    p = float(p)
    tol = _DEFAULT_REPORT_TOL if report_tol is None else report_tol
    if regime == "sup":
        if not a > 1.0 / p:
            raise ValueError(f"sup regime needs alpha > 1/p (got alpha={a}, p={p})")
        return _make_report(lp_time_norm(J, math.inf), K_SUP * fnorm, K_SUP, tol, regime)
    if regime == "lift":
        if not a < 1.0 / p:
            raise ValueError(f"lift regime needs alpha < 1/p (got alpha={a}, p={p})")
        q_lift = p / (1.0 - p * a)
        return _make_report(lp_time_norm(J, q_lift), K_LIFT * fnorm, K_LIFT, tol, regime)
    if regime == "critical":
        if abs(a - 1.0 / p) > 1e-12:
            raise ValueError(f"critical regime needs alpha = 1/p (got alpha={a}, p={p})")
        q = 2.0 * p if q is None else float(q)
        return _make_report(lp_time_norm(J, q), K_CRITICAL * fnorm, K_CRITICAL, tol, regime)
    raise ValueError(f"unknown regime: {regime!r}")
