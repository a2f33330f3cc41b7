"""Fractional-calculus toolkit and spectral Galerkin solver for the
time-fractional heat equation."""

from .core import (
    AccuracyError,
    DegenerateInputError,
    ModalPath,
    Order,
    ScalarPath,
    TimeGrid,
    make_uniform_grid,
    pointwise_inner,
    sample,
)
from .fracops import (
    QuadratureKind,
    caputo_derivative,
    caputo_vs_rl_shift,
    modal_map,
    rl_derivative,
    rl_integral,
)
from .galerkin import (
    EnergyReport,
    HeatProblem,
    Solution,
    SpectralBasis,
    convergence_study,
    energy_report,
    evaluate_field,
    problem_from_config,
    project_forcing,
    project_initial,
    solve,
    solve_modal,
    uniqueness_gap,
)
from .inequality import (
    GapPath,
    caputo_energy_gap,
    forcing_regularity,
    lemma32_residual,
    product_rule_residual,
    rl_energy_gap,
)
from .mlf import MLParams, exact_modal_solution, mittag_leffler
from .norms import (
    BoundReport,
    gly_equivalence_report,
    h10_norm,
    jalpha_bound_report,
    l2_omega_norm,
    lp_time_norm,
    slobodeckij_seminorm,
    sobolev_slobodeckij_norm,
)

__all__ = [
    "AccuracyError",
    "BoundReport",
    "DegenerateInputError",
    "EnergyReport",
    "GapPath",
    "HeatProblem",
    "MLParams",
    "ModalPath",
    "Order",
    "QuadratureKind",
    "ScalarPath",
    "Solution",
    "SpectralBasis",
    "TimeGrid",
    "caputo_derivative",
    "caputo_energy_gap",
    "caputo_vs_rl_shift",
    "convergence_study",
    "energy_report",
    "evaluate_field",
    "exact_modal_solution",
    "forcing_regularity",
    "gly_equivalence_report",
    "h10_norm",
    "jalpha_bound_report",
    "l2_omega_norm",
    "lemma32_residual",
    "lp_time_norm",
    "make_uniform_grid",
    "mittag_leffler",
    "modal_map",
    "pointwise_inner",
    "problem_from_config",
    "product_rule_residual",
    "project_forcing",
    "project_initial",
    "rl_derivative",
    "rl_energy_gap",
    "rl_integral",
    "sample",
    "slobodeckij_seminorm",
    "sobolev_slobodeckij_norm",
    "solve",
    "solve_modal",
    "uniqueness_gap",
]

__version__ = "0.1.0"
