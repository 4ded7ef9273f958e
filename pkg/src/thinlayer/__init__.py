"""Closed-form and asymptotic solvers for a thin-layer transmission problem.

A disk-shaped composite with a thin annular layer around an interior
interface circle is driven by a separable polynomial source.  The package
solves the exact per-mode transmission problem, the first-order asymptotic
expansion that replaces the layer by interface corrections, and the reduced
model with order-two interface conditions; a finite-difference oracle and
an error/convergence harness verify the advertised accuracy of each.
"""

from __future__ import annotations

from .analytic import (
    ForcingSpec,
    ForcingTerm,
    layer_profile_order0,
    layer_profile_order1,
    solve_full_mode,
    solve_u0_mode,
    solve_u1_mode,
)
from .config import ConfigError, ExperimentConfig
from .convergence import (
    ConvergenceReport,
    ErrorRecord,
    ModeError,
    Scenario,
    default_scenario,
    dual_route_gap,
    expansion_study,
    fit_slope,
    oracle_study,
    theorem2_errors,
    theorem2_study,
    theorem4_errors,
    theorem4_study,
)
from .geometry import (
    CircleGeometry,
    FourierMode,
    LayerSplit,
    layer_radius,
    mid_diffusion_split,
    stretched_coordinate,
    surface_laplacian_symbol,
)
from .materials import MaterialParams
from .reduced import (
    ResonantModeError,
    boundary_symbol,
    reconstruct_layer_ap,
    solve_reduced_mode,
    solve_w_recurrence,
)

__all__ = [
    "CircleGeometry",
    "ConfigError",
    "ConvergenceReport",
    "ErrorRecord",
    "ExperimentConfig",
    "ForcingSpec",
    "ForcingTerm",
    "FourierMode",
    "LayerSplit",
    "MaterialParams",
    "ModeError",
    "ResonantModeError",
    "Scenario",
    "boundary_symbol",
    "default_scenario",
    "dual_route_gap",
    "expansion_study",
    "fit_slope",
    "layer_profile_order0",
    "layer_profile_order1",
    "layer_radius",
    "mid_diffusion_split",
    "oracle_study",
    "reconstruct_layer_ap",
    "solve_full_mode",
    "solve_reduced_mode",
    "solve_u0_mode",
    "solve_u1_mode",
    "solve_w_recurrence",
    "stretched_coordinate",
    "surface_laplacian_symbol",
    "theorem2_errors",
    "theorem2_study",
    "theorem4_errors",
    "theorem4_study",
]