import json
import math

import numpy as np
import pytest
from scipy.special import gamma

from fracgalerkin import (
    ModalPath,
    caputo_energy_gap,
    forcing_regularity,
    lemma32_residual,
    make_uniform_grid,
    product_rule_residual,
    rl_energy_gap,
)

GRID = make_uniform_grid(1.0, 513)
T = GRID.nodes


def _single_mode(values):
    return ModalPath(GRID, np.asarray(values, dtype=float)[:, None])


def test_caputo_gap_zero_for_constants():
    u = ModalPath(GRID, np.full((GRID.n, 3), 1.7))
    gp = caputo_energy_gap(u, 0.5)
    assert np.all(gp.gap == 0.0)
    assert gp.satisfied


def test_caputo_gap_linear_closed_form():
    # u = t, a = 0.5: gap(t) = 2 t^{3/2} (1/Gamma(3/2) - 1/Gamma(5/2));
    # L1 is exact on t, and on t^2 accurate to O(h^{2-a})
    gp = caputo_energy_gap(_single_mode(T), 0.5)
    exact = 2.0 * T**1.5 * (1.0 / gamma(1.5) - 1.0 / gamma(2.5))
    assert np.abs(gp.gap - exact).max() < 5e-4
    assert gp.min_gap >= 0.0


def test_rl_gap_zero_path():
    gp = rl_energy_gap(ModalPath(GRID, np.zeros((GRID.n, 2))), 0.6)
    assert np.all(gp.gap == 0.0)


def test_rl_matches_caputo_when_u0_zero():
    u = _single_mode(np.sin(2.0 * np.pi * T))
    a = 0.5
    gc = caputo_energy_gap(u, a)
    gr = rl_energy_gap(u, a)
    scale = np.abs(u.values).max() * np.abs(np.gradient(u.values[:, 0], GRID.h)).max()
    tol = 0.25 * GRID.h ** (1.0 - a) * scale
    assert np.abs(gc.gap[2:] - gr.gap[2:]).max() <= 2.0 * tol


def test_lemma32_constant_and_nonnegativity():
    const = ModalPath(GRID, np.full((GRID.n, 2), -0.3))
    gp = lemma32_residual(const, 0.5)
    assert np.all(gp.gap == 0.0)
    assert np.all(gp.extras["rhs"] == 0.0)
    rng = np.random.default_rng(7)
    vals = sum(rng.normal() * np.sin((k + 1) * np.pi * T) for k in range(3))
    gp = lemma32_residual(_single_mode(vals), 0.4)
    assert gp.extras["rhs_min"] >= 0.0  # integrand is a square


def test_lemma32_linear_small_relative_residual():
    grid = make_uniform_grid(1.0, 1025)
    t = grid.nodes
    gp = lemma32_residual(ModalPath(grid, t[:, None]), 0.5)
    rel = abs(gp.gap[-1]) / gp.extras["rhs"][-1]
    assert rel < 0.02


def test_product_rule_constant_orthogonal_modes():
    f1 = ModalPath(GRID, np.tile([1.0, 0.0], (GRID.n, 1)))
    f2 = ModalPath(GRID, np.tile([0.0, 1.0], (GRID.n, 1)))
    gp = product_rule_residual(f1, f2, 0.5)
    assert np.abs(gp.gap).max() < 1e-12


def test_product_rule_with_constant_second_factor():
    f1 = _single_mode(np.sin(T))
    f2 = _single_mode(np.ones(GRID.n))
    gp = product_rule_residual(f1, f2, 0.5)
    interior = np.abs(gp.gap[GRID.n // 20:])
    assert interior.max() < 5e-3


def test_product_rule_refinement_improves():
    errs = []
    for n in (257, 513):
        grid = make_uniform_grid(1.0, n)
        t = grid.nodes
        f1 = ModalPath(grid, np.sin(t)[:, None])
        f2 = ModalPath(grid, np.cos(t)[:, None])
        gp = product_rule_residual(f1, f2, 0.5)
        errs.append(np.abs(gp.gap[n // 10:]).max())
    assert errs[1] < errs[0]
    assert math.log2(errs[0] / errs[1]) >= 0.5


def test_product_rule_grid_mismatch():
    f1 = _single_mode(np.sin(T))
    other = make_uniform_grid(1.0, 129)
    f2 = ModalPath(other, np.cos(other.nodes)[:, None])
    with pytest.raises(ValueError):
        product_rule_residual(f1, f2, 0.5)


def test_forcing_regularity_closed_form():
    # ||f(s)||^2 = 1, a = 0.5: int_0^t (t-s)^{-1/2} ds = 2 sqrt(t), max = 2 sqrt(T)
    f = ModalPath(GRID, np.ones((GRID.n, 1)))
    assert forcing_regularity(f, 0.5) == pytest.approx(2.0, rel=1e-12)
    zero = ModalPath(GRID, np.zeros((GRID.n, 1)))
    assert forcing_regularity(zero, 0.5) == 0.0


def test_forcing_regularity_singular_but_integrable():
    # f(s) ~ s^{-0.3} is not bounded but the functional stays finite
    t = GRID.nodes.copy()
    t[0] = t[1]  # avoid the sample at 0
    f = ModalPath(GRID, (t**-0.3)[:, None])
    val = forcing_regularity(f, 0.5)
    assert math.isfinite(val) and val > 0.0


def test_gap_path_serialization():
    gp = caputo_energy_gap(_single_mode(T), 0.5)
    csv = gp.to_csv()
    assert csv.startswith("t,gap\n") and csv.endswith("\n")
    assert len(csv.splitlines()) == GRID.n + 1
    doc = json.loads(gp.to_json())
    assert doc["satisfied"] is True and doc["violation_nodes"] == []
