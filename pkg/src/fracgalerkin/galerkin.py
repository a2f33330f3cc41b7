"""Spectral Faedo-Galerkin solver for the time-fractional heat equation

    cD^alpha u - u_xx = f   on (0, L) x (0, T],   u(0, t) = u(L, t) = 0,

with 1/2 < alpha < 1. Projecting onto the sine eigenbasis of -d^2/dx^2
decouples the problem into scalar fractional relaxation equations

    cD^alpha g_k + lambda_k g_k = F_k,   lambda_k = (k pi / L)^2,

which are stepped by an implicit product-trapezoidal rule on the equivalent
Volterra form g = g0 + J^alpha (F - lambda g). On smooth data the scheme is
observed at order ~2 - alpha at fixed t = T and, unlike plain L1 stepping,
keeps the first-step error below 1e-4 at moderate n.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .core import ModalPath, ScalarPath, TimeGrid, make_uniform_grid, order_value
from .fracops import _product_linear_weights, caputo_derivative, modal_map
from .inequality import GapPath, caputo_energy_gap, forcing_regularity, rl_energy_gap

PROJECTION_POINTS_FACTOR = 8  # default quadrature size 8m + 1

ENERGY_REL_TOL = 0.05   # scheme slack for the constant-free estimate
ENERGY_ABS_TOL = 1e-12


@dataclass(frozen=True)
class SpectralBasis:
    """Sine eigenbasis of -Laplace on (0, L) with Dirichlet conditions."""

    length: float
    m: int

    def __post_init__(self):
        if not (self.length > 0.0 and math.isfinite(self.length)):
            raise ValueError(f"domain length must be positive: {self.length}")
        if self.m < 1:
            raise ValueError(f"need at least one mode: {self.m}")

    @property
    def eigenvalues(self) -> np.ndarray:
        k = np.arange(1, self.m + 1)
        lam = (k * np.pi / self.length) ** 2
        lam.setflags(write=False)
        return lam

    def eigenfunction(self, k: int, x) -> np.ndarray:
        """w_k(x) = sqrt(2/L) sin(k pi x / L), L2-normalized."""
        if not (1 <= k <= self.m):
            raise ValueError(f"mode index out of range 1..{self.m}: {k}")
        x = np.asarray(x, dtype=float)
        return np.sqrt(2.0 / self.length) * np.sin(k * np.pi * x / self.length)


@dataclass(frozen=True)
class HeatProblem:
    basis: SpectralBasis
    grid: TimeGrid
    alpha: float
    u0_coeffs: np.ndarray
    forcing: ModalPath

    def __post_init__(self):
        a = order_value(self.alpha)
        if not (0.5 < a < 1.0):
            raise ValueError(f"alpha must lie in (1/2, 1): {a}")
        object.__setattr__(self, "alpha", a)
        c = np.asarray(self.u0_coeffs, dtype=float)
        if c.shape != (self.basis.m,):
            raise ValueError(f"u0_coeffs shape {c.shape} != (m,)=({self.basis.m},)")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite initial coefficient")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "u0_coeffs", c)
        if self.forcing.grid != self.grid or self.forcing.modes != self.basis.m:
            raise ValueError("forcing must be sampled on the problem grid with m columns")


@dataclass(frozen=True)
class EnergyReport:
    l2H1_sq: float
    linfL2_sq: float
    caputo_l2_sq: float
    rhs_l2H1: float
    rhs_linfL2: float
    rhs_caputo: float
    gap_min: float
    all_satisfied: bool

    def as_dict(self) -> dict:
        return {
            "l2H1_sq": self.l2H1_sq,
            "linfL2_sq": self.linfL2_sq,
            "caputo_l2_sq": self.caputo_l2_sq,
            "rhs_l2H1": self.rhs_l2H1,
            "rhs_linfL2": self.rhs_linfL2,
            "rhs_caputo": self.rhs_caputo,
            "gap_min": self.gap_min,
            "all_satisfied": self.all_satisfied,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class Solution:
    problem: HeatProblem
    path: ModalPath
    energy: EnergyReport

    def to_csv(self) -> str:
        header = "t," + ",".join(f"g{j + 1}" for j in range(self.path.modes))
        lines = [header]
        for t, row in zip(self.path.grid.nodes, self.path.values):
            lines.append(",".join([repr(float(t))] + [repr(float(v)) for v in row]))
        return "\n".join(lines) + "\n"


def _gauss_nodes(length: float, npts: int):
    x, w = np.polynomial.legendre.leggauss(npts)
    return 0.5 * length * (x + 1.0), 0.5 * length * w


def project_initial(u0, basis: SpectralBasis, npts: int | None = None) -> np.ndarray:
    """Coefficients (u0, w_k) by Gauss-Legendre quadrature on (0, L)."""
    if npts is None:
        npts = PROJECTION_POINTS_FACTOR * basis.m + 1
    x, w = _gauss_nodes(basis.length, npts)
    vals = np.asarray([u0(xi) for xi in x], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("initial datum produced non-finite sample")
    return np.array([np.sum(w * vals * basis.eigenfunction(k, x))
                     for k in range(1, basis.m + 1)])


def project_forcing(f, basis: SpectralBasis, grid: TimeGrid,
                    npts: int | None = None) -> ModalPath:
    """ModalPath of (f(., t_i), w_k); f is a callable (x, t) -> real."""
    if npts is None:
        npts = PROJECTION_POINTS_FACTOR * basis.m + 1
    x, w = _gauss_nodes(basis.length, npts)
    W = np.column_stack([basis.eigenfunction(k, x) for k in range(1, basis.m + 1)])
    rows = np.empty((grid.n, basis.m))
    for i, t in enumerate(grid.nodes):
        vals = np.asarray([f(xi, t) for xi in x], dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"forcing produced non-finite sample at t={t}")
        rows[i] = (w * vals) @ W
    return ModalPath(grid, rows)


def solve_modal(lam: float, Fj: ScalarPath, alpha, g0: float) -> ScalarPath:
    """Implicit product-trapezoidal step for cD^alpha g + lam g = F, g(0) = g0.

    The Volterra form g(t) = g0 + J^alpha (F - lam g)(t) is discretized with
    the same exact-kernel piecewise-linear quadrature as rl_integral; the
    diagonal weight makes each step a scalar solve, unconditionally for
    lam >= 0.
    """
    a = order_value(alpha)
    if not (0.0 < a < 1.0):
        raise ValueError(f"alpha must lie in (0, 1): {a}")
    if lam < 0.0:
        raise ValueError(f"lam must be nonnegative: {lam}")
    F = Fj.values
    n, h = Fj.grid.n, Fj.grid.h
    ga = gamma(a)
    wl, wr = _product_linear_weights(n, a, h)
    y = np.zeros(n)              # y = F - lam g
    g = np.zeros(n)
    g[0] = g0
    y[0] = F[0] - lam * g0
    c = wr[0] / ga               # weight of the implicit y[i] term
    for i in range(1, n):
        hist = y[:i][::-1] @ wl[:i]
        if i > 1:
            hist += y[1:i][::-1] @ wr[1:i]
        hist /= ga
        gi = (g0 + hist + c * F[i]) / (1.0 + lam * c)
        g[i] = gi
        y[i] = F[i] - lam * gi
    return ScalarPath(Fj.grid, g)


def _worker_count(modes: int) -> int:
    env = os.environ.get("FRACGALERKIN_THREADS", "")
    try:
        cap = int(env) if env else 1
    except ValueError:
        cap = 1
    return max(1, min(cap, modes))


def solve(problem: HeatProblem) -> Solution:
    """Solve every (decoupled) mode and assemble the energy report."""
    lam = problem.basis.eigenvalues
    a = problem.alpha

    def one(j: int) -> np.ndarray:
        return solve_modal(lam[j], problem.forcing.column(j), a,
                           problem.u0_coeffs[j]).values

    workers = _worker_count(problem.basis.m)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            cols = list(ex.map(one, range(problem.basis.m)))
    else:
        cols = [one(j) for j in range(problem.basis.m)]
    path = ModalPath(problem.grid, np.column_stack(cols))
    sol = Solution(problem, path, None)  # type: ignore[arg-type]
    report = energy_report(sol, problem)
    return Solution(problem, path, report)


def evaluate_field(sol: Solution, basis: SpectralBasis, x: float, i: int) -> float:
    """u_m(x, t_i) = sum_k g_k(t_i) w_k(x)."""
    if not (0.0 <= x <= basis.length):
        raise ValueError(f"x outside [0, {basis.length}]: {x}")
    row = sol.path.values[i]
    return float(sum(row[k - 1] * basis.eigenfunction(k, x) for k in range(1, basis.m + 1)))


def energy_report(sol: Solution, problem: HeatProblem,
                  rel_tol: float = ENERGY_REL_TOL) -> EnergyReport:
    """Discrete versions of the a-priori energy estimates.

    With the Young split c1 = 1, c2 = 1/lambda_1 the bounds take the form
      (a)  int_0^T ||u_m||_{H^1_0}^2 dt <= C1 (||u0||^2 + ||f||_{L2L2}^2),
           C1 = max(c2, T^{1-a}/Gamma(2-a)),
      (c)  sup_t ||u_m(t)||^2 <= C3 (||u0||^2 + sup_t int_0^t (t-s)^{a-1}||f||^2 ds),
           C3 = max(1, c2/Gamma(a)),
      (ii) ||cD^a u_m||_{L2L2}^2 <= ||f||_{L2L2}^2 + T^{1-a}/Gamma(2-a) * sum lam_j u0_j^2.
    (ii) is constant-free when u0 = 0; the additive term is the initial-energy
    allowance lost by the zero-extension argument for u0 != 0.
    """
    a = problem.alpha
    T = problem.grid.horizon
    h = problem.grid.h
    lam = problem.basis.eigenvalues
    G = sol.path.values
    F = problem.forcing.values

    u0_sq = float(np.sum(problem.u0_coeffs**2))
    f_l2l2_sq = float(np.trapezoid(np.sum(F * F, axis=1), dx=h))
    kconst = T ** (1.0 - a) / gamma(2.0 - a)

    l2H1_sq = float(np.trapezoid(np.sum(lam * G * G, axis=1), dx=h))
    linfL2_sq = float(np.sum(G * G, axis=1).max())
    cd = modal_map(caputo_derivative, sol.path, a)
    caputo_l2_sq = float(np.trapezoid(np.sum(cd.values**2, axis=1), dx=h))

    c2 = 1.0 / float(lam[0])
    C1 = max(c2, kconst)
    C3 = max(1.0, c2 / gamma(a))
    freg = forcing_regularity(problem.forcing, a)

    rhs_l2H1 = float(C1 * (u0_sq + f_l2l2_sq))
    rhs_linfL2 = float(C3 * (u0_sq + freg))
    rhs_caputo = float(f_l2l2_sq + kconst * np.sum(lam * problem.u0_coeffs**2))

    gap = caputo_energy_gap(sol.path, a)
    ok = all(
        lhs <= rhs * (1.0 + rel_tol) + ENERGY_ABS_TOL
        for lhs, rhs in ((l2H1_sq, rhs_l2H1), (linfL2_sq, rhs_linfL2),
                         (caputo_l2_sq, rhs_caputo))
    )
    return EnergyReport(
        l2H1_sq=l2H1_sq, linfL2_sq=linfL2_sq, caputo_l2_sq=caputo_l2_sq,
        rhs_l2H1=rhs_l2H1, rhs_linfL2=rhs_linfL2, rhs_caputo=rhs_caputo,
        gap_min=gap.min_gap, all_satisfied=bool(ok),
    )


def convergence_study(alpha, lam: float, g0: float, T: float, ns,
                      oracle=None) -> list[dict]:
    """Error at t = T of the unforced modal solver against the closed-form
    solution, per refinement level; order = log2(e(2h)/e(h))."""
    from .mlf import exact_modal_solution

    a = order_value(alpha)
    if len(ns) < 2:
        raise ValueError("need at least two refinement levels")
    if oracle is None:
        oracle = lambda t: exact_modal_solution(a, lam, g0, 0.0, t)
    rows = []
    prev_err = None
    for n in ns:
        grid = make_uniform_grid(T, int(n))
        g = solve_modal(lam, ScalarPath(grid, np.zeros(grid.n)), a, g0)
        err = abs(g.values[-1] - oracle(T))
        if prev_err is None:
            order, exact = math.nan, False
        elif err == 0.0 and prev_err == 0.0:
            order, exact = math.inf, True
        elif err == 0.0 or prev_err == 0.0:
            order, exact = math.inf, False
        else:
            order, exact = math.log2(prev_err / err), False
        rows.append({"n": int(n), "h": grid.h, "error": float(err),
                     "order": order, "exact": exact})
        prev_err = err
    return rows


def max_error_vs_oracle(alpha, lam: float, g0: float, grid: TimeGrid) -> float:
    """Max-over-nodes error of the unforced solver against the closed form."""
    from .mlf import exact_modal_solution

    a = order_value(alpha)
    g = solve_modal(lam, ScalarPath(grid, np.zeros(grid.n)), a, g0)
    exact = np.array([exact_modal_solution(a, lam, g0, 0.0, t) for t in grid.nodes])
    return float(np.abs(g.values - exact).max())


def uniqueness_gap(sol_a: Solution, sol_b: Solution, alpha=None) -> GapPath:
    """Energy check on the difference of two solutions of the same problem
    (up to initial data): D^alpha ||sigma||^2 <= 2 (D^alpha sigma, sigma) and
    extras["sup_ratio"] = sup_t ||sigma(t)||^2 / ||sigma(0)||^2."""
    pa, pb = sol_a.problem, sol_b.problem
    if pa.grid != pb.grid or pa.basis != pb.basis or pa.alpha != pb.alpha:
        raise ValueError("solutions come from different problem configurations")
    if not np.array_equal(pa.forcing.values, pb.forcing.values):
        raise ValueError("solutions have different forcings; uniqueness check undefined")
    a = pa.alpha if alpha is None else order_value(alpha)
    sigma = ModalPath(pa.grid, sol_a.path.values - sol_b.path.values)
    gap = rl_energy_gap(sigma, a)
    sq = np.sum(sigma.values**2, axis=1)
    if sq[0] > 0.0:
        sup_ratio = float(sq.max() / sq[0])
        anomaly = False
    else:
        sup_ratio = math.nan
        anomaly = bool(sq.max() > 0.0)
    return GapPath(gap.grid, gap.gap, gap.check_tol, skip=gap.skip,
                   extras={"sup_ratio": sup_ratio, "sigma0_zero_anomaly": anomaly})


# --- problem configuration (JSON presets) ---------------------------------

def _u0_from_spec(spec: dict, basis: SpectralBasis) -> np.ndarray:
    kind = spec.get("kind", "zero")
    if kind == "zero":
        return np.zeros(basis.m)
    if kind == "sine_mode":
        k = int(spec.get("k", 1))
        amp = float(spec.get("amplitude", 1.0))
        if not (1 <= k <= basis.m):
            raise ValueError(f"sine_mode index out of range 1..{basis.m}: {k}")
        c = np.zeros(basis.m)
        c[k - 1] = amp
        return c
    if kind == "coefficients":
        return np.asarray(spec["values"], dtype=float)
    if kind == "parabola":
        amp = float(spec.get("amplitude", 1.0))
        L = basis.length
        return project_initial(lambda x: amp * x * (L - x), basis)
    raise ValueError(f"unknown u0 preset: {kind!r}")


def _forcing_from_spec(spec: dict, basis: SpectralBasis, grid: TimeGrid) -> ModalPath:
    kind = spec.get("kind", "zero")
    t = grid.nodes
    if kind == "zero":
        return ModalPath(grid, np.zeros((grid.n, basis.m)))
    if kind == "sine_mode":
        k = int(spec.get("k", 1))
        amp = float(spec.get("amplitude", 1.0))
        profile = spec.get("profile", "constant")
        if not (1 <= k <= basis.m):
            raise ValueError(f"sine_mode index out of range 1..{basis.m}: {k}")
        if profile == "constant":
            g = np.full(grid.n, amp)
        elif profile == "exp_decay":
            g = amp * np.exp(-t)
        elif profile == "sin":
            omega = float(spec.get("omega", 2.0 * np.pi))
            g = amp * np.sin(omega * t)
        else:
            raise ValueError(f"unknown time profile: {profile!r}")
        vals = np.zeros((grid.n, basis.m))
        vals[:, k - 1] = g
        return ModalPath(grid, vals)
    if kind == "modal_constant":
        coeffs = np.asarray(spec["values"], dtype=float)
        return ModalPath(grid, np.tile(coeffs, (grid.n, 1)))
    raise ValueError(f"unknown forcing preset: {kind!r}")


def problem_from_config(cfg: dict) -> HeatProblem:
    """Build a HeatProblem from a JSON-style configuration document.

    Fields: L, m, alpha, T, n, u0 (preset spec), forcing (preset spec).
    """
    basis = SpectralBasis(length=float(cfg["L"]), m=int(cfg["m"]))
    grid = make_uniform_grid(float(cfg["T"]), int(cfg["n"]))
    u0 = _u0_from_spec(cfg.get("u0", {"kind": "zero"}), basis)
    forcing = _forcing_from_spec(cfg.get("forcing", {"kind": "zero"}), basis, grid)
    return HeatProblem(basis=basis, grid=grid, alpha=float(cfg["alpha"]),
                       u0_coeffs=u0, forcing=forcing)
