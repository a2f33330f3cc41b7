"""Acceptance suite: one test per criterion, each asserting the stated
tolerance against an independent oracle (closed form, special-function
identity, or high-resolution reference) where the criterion is quantitative.
"""
import math

import numpy as np
import pytest
from scipy.special import gamma

from fracgalerkin import (
    ModalPath,
    ScalarPath,
    caputo_energy_gap,
    caputo_derivative,
    convergence_study,
    gly_equivalence_report,
    jalpha_bound_report,
    lemma32_residual,
    lp_time_norm,
    make_uniform_grid,
    mittag_leffler,
    MLParams,
    modal_map,
    product_rule_residual,
    rl_derivative,
    rl_energy_gap,
    rl_integral,
    sample,
    solve,
    solve_modal,
    uniqueness_gap,
)
from fracgalerkin.galerkin import HeatProblem, SpectralBasis, max_error_vs_oracle
from fracgalerkin.inequality import CAPUTO_GAP_C, RL_AGREEMENT_C, default_gap_tol
from fracgalerkin.norms import GLY_BRACKET_04

SEED = 20250527


def _corpus_20(grid):
    """The frozen 20-function calibration corpus on [0, 1]."""
    t = grid.nodes
    fns = [np.ones(grid.n), t.copy(), t**2, np.sqrt(t), np.sin(2 * np.pi * t),
           np.cos(2 * np.pi * t), np.sin(5 * np.pi * t), np.exp(-t), np.exp(t),
           np.abs(t - 0.5)]
    fns += [np.sin(k * np.pi * t) for k in range(1, 11)]
    return [ScalarPath(grid, v) for v in fns]


def _trig_modal_corpus(rng, grid, cases, zero_start=False):
    t = grid.nodes / grid.horizon
    out = []
    for _ in range(cases):
        m = int(rng.integers(1, 5))
        u = np.zeros((grid.n, m))
        for j in range(m):
            c0 = rng.normal()
            cs = rng.normal(size=5)
            cc = rng.normal(size=5)
            u[:, j] = c0 + sum(cs[k] * np.sin((k + 1) * np.pi * t)
                               + cc[k] * np.cos((k + 1) * np.pi * t) for k in range(5))
        if zero_start:
            u = u - u[0]
        out.append(ModalPath(grid, u))
    return out


def test_criterion_01_operator_inversion():
    # max interior |D^a(J^a f) - f| <= 0.02 at n = 4097; halving h gains >= 1.7x
    for a in (0.3, 0.5, 0.7):
        errs = {}
        for n in (2049, 4097):
            grid = make_uniform_grid(1.0, n)
            f = sample(lambda t: math.sin(2.0 * math.pi * t), grid)
            D = rl_derivative(rl_integral(f, a), a)
            errs[n] = np.abs(D.values[2:] - f.values[2:]).max()
        assert errs[4097] <= 0.02, f"alpha={a}: err={errs[4097]:.3g}"
        assert errs[2049] / errs[4097] >= 1.7, f"alpha={a}: ratio={errs[2049]/errs[4097]:.2f}"


def test_criterion_02_semigroup():
    grid = make_uniform_grid(1.0, 4097)
    f = sample(lambda t: math.sin(2.0 * math.pi * t), grid)
    lhs = rl_integral(rl_integral(f, 0.4), 0.3).values
    rhs = rl_integral(f, 0.7).values
    assert np.abs(lhs - rhs).max() <= 5e-4


def test_criterion_03_explicit_constant_bound():
    grid = make_uniform_grid(1.0, 4097)
    corpus = _corpus_20(grid)
    for a in (0.3, 0.5, 0.7):
        for f in corpus:
            rep = jalpha_bound_report(f, a, 1.0)
            assert rep.slack >= -10.0 * grid.h, f"alpha={a}: slack={rep.slack:.3g}"


def test_criterion_04_lemma32_identity():
    grid = make_uniform_grid(1.0, 2049)
    t = grid.nodes
    for name, vals in (("t", t.copy()), ("sin t", np.sin(t))):
        for a in (0.4, 0.6):
            gp = lemma32_residual(ModalPath(grid, vals[:, None]), a)
            rhs = gp.extras["rhs"]
            rel = abs(gp.gap[-1]) / rhs[-1]
            assert rel <= 0.03, f"f={name}, alpha={a}: rel residual={rel:.3%}"
            assert rhs.min() >= 0.0  # exactly, integrand is a square


def test_criterion_05_caputo_energy_inequality():
    grid = make_uniform_grid(1.0, 2049)
    for a in (0.3, 0.5, 0.7):
        rng = np.random.default_rng(SEED)
        tol = default_gap_tol(a, grid.h, CAPUTO_GAP_C)
        for u in _trig_modal_corpus(rng, grid, 100):
            gp = caputo_energy_gap(u, a, check_tol=tol)
            assert gp.min_gap >= -tol, f"alpha={a}: min gap {gp.min_gap:.3g}"
            assert not gp.violation_nodes


def test_criterion_06_rl_energy_inequality():
    grid = make_uniform_grid(1.0, 2049)
    for a in (0.3, 0.5, 0.7):
        rng = np.random.default_rng(SEED)
        for u in _trig_modal_corpus(rng, grid, 100, zero_start=True):
            scale = (np.sum(u.values**2, axis=1).max() ** 0.5
                     * np.abs(np.gradient(u.values, grid.h, axis=0)).max())
            tol = RL_AGREEMENT_C * grid.h ** (1.0 - a) * scale
            gr = rl_energy_gap(u, a, check_tol=tol)
            gc = caputo_energy_gap(u, a, check_tol=tol)
            assert gr.min_gap >= -tol, f"alpha={a}: min gap {gr.min_gap:.3g}"
            agree = np.abs(gr.gap[2:] - gc.gap[2:]).max()
            assert agree <= 2.0 * tol, f"alpha={a}: agreement {agree:.3g} > {2*tol:.3g}"


def test_criterion_07_product_rule():
    grid = make_uniform_grid(1.0, 4097)
    t = grid.nodes
    f1 = ModalPath(grid, np.sin(t)[:, None])
    f2 = ModalPath(grid, np.cos(t)[:, None])
    gp = product_rule_residual(f1, f2, 0.5)
    idx = [round(k / 10 * (grid.n - 1)) for k in range(1, 10)]
    worst = np.abs(gp.gap[idx]).max()
    assert worst <= 5e-3, f"checkpoint residual {worst:.3g}"


def test_criterion_08_mittag_leffler_oracle():
    p1 = MLParams(1.0)
    for z in np.linspace(-5.0, 5.0, 101):
        assert abs(mittag_leffler(p1, z) - math.exp(z)) <= 1e-10
    # independent closed form: E_{1/2,1}(-1) = e * erfc(1)
    val = mittag_leffler(MLParams(0.5), -1.0)
    assert abs(val - 0.427584) <= 1e-6
    assert abs(val - math.exp(1.0) * math.erfc(1.0)) <= 1e-10


def test_criterion_09_solver_vs_oracle():
    # unforced u0 = w1 on (0, pi): lambda_1 = 1
    err = max_error_vs_oracle(0.5, 1.0, 1.0, make_uniform_grid(1.0, 2049))
    assert err <= 1e-3, f"max error {err:.3g}"
    rows = convergence_study(0.5, 1.0, 1.0, 1.0, [257, 513, 1025, 2049])
    for r in rows[1:]:
        assert 1.25 <= r["order"] <= 1.75, f"order {r['order']:.3f} at n={r['n']}"


def test_criterion_10_constant_free_estimate():
    # ||cD^a u_m||^2_{L2L2} <= ||f||^2_{L2L2} * 1.05 on a seeded corpus (u0 = 0)
    rng = np.random.default_rng(SEED)
    grid = make_uniform_grid(1.0, 2049)
    t = grid.nodes
    basis_cache = {}
    for _ in range(10):
        a = float(rng.uniform(0.55, 0.95))
        m = int(rng.integers(1, 4))
        basis = basis_cache.setdefault(m, SpectralBasis(length=math.pi, m=m))
        F = np.zeros((grid.n, m))
        for j in range(m):
            cs = rng.normal(size=3)
            F[:, j] = sum(cs[k] * np.cos((k + 1) * np.pi * t) for k in range(3))
        problem = HeatProblem(basis=basis, grid=grid, alpha=a,
                              u0_coeffs=np.zeros(m), forcing=ModalPath(grid, F))
        sol = solve(problem)
        cd = modal_map(caputo_derivative, sol.path, a)
        lhs = np.trapezoid(np.sum(cd.values**2, axis=1), dx=grid.h)
        rhs = np.trapezoid(np.sum(F * F, axis=1), dx=grid.h)
        assert lhs <= rhs * 1.05, f"alpha={a:.3f}, m={m}: ratio {lhs/rhs:.4f}"


def test_criterion_11_uniqueness_surrogate():
    grid = make_uniform_grid(1.0, 1025)
    basis = SpectralBasis(length=math.pi, m=2)
    forcing = ModalPath(grid, np.column_stack([np.sin(grid.nodes), np.cos(grid.nodes)]))
    u0 = np.array([0.7, -0.2])

    def run(u0_coeffs):
        return solve(HeatProblem(basis=basis, grid=grid, alpha=0.6,
                                 u0_coeffs=u0_coeffs, forcing=forcing))

    a = run(u0)
    b = run(u0 + np.array([1e-3, 0.0]))
    gp = uniqueness_gap(a, b)
    sup_ratio = math.sqrt(gp.extras["sup_ratio"])  # extras carry the squared ratio
    assert sup_ratio <= 1.0 + 1e-6, f"sup ratio {sup_ratio}"
    c = run(u0)
    assert np.array_equal(a.path.values, c.path.values)  # bit-identical


def test_criterion_12_unforced_monotone_decay():
    rng = np.random.default_rng(SEED)
    grid = make_uniform_grid(1.0, 513)
    for a in (0.55, 0.75, 0.95):
        for _ in range(10):
            m = int(rng.integers(1, 5))
            basis = SpectralBasis(length=math.pi, m=m)
            u0 = rng.normal(size=m)
            sol = solve(HeatProblem(basis=basis, grid=grid, alpha=a, u0_coeffs=u0,
                                    forcing=ModalPath(grid, np.zeros((grid.n, m)))))
            amp = np.abs(sol.path.values)
            worst = np.diff(amp, axis=0).max()
            assert worst <= 1e-12, f"alpha={a}: amplitude increased by {worst:.3g}"


def test_criterion_13_gly_regression():
    grid = make_uniform_grid(1.0, 4096)
    ratios = []
    for k in range(1, 11):
        f = sample(lambda t, k=k: math.sin(k * math.pi * t), grid)
        rep = gly_equivalence_report(f, 0.4)
        ratios.append(rep.lhs)
    lo, hi = min(ratios), max(ratios)
    assert lo == pytest.approx(GLY_BRACKET_04[0], rel=0.01), f"lower endpoint {lo:.6f}"
    assert hi == pytest.approx(GLY_BRACKET_04[1], rel=0.01), f"upper endpoint {hi:.6f}"
