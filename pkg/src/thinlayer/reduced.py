"""Reduced model: the layer replaced by order-two interface conditions.

Instead of resolving the thin layer, the composite is modelled as two
materials meeting at the interface circle, with the layer's influence
condensed into a flux jump proportional to the tangential Laplacian of
the trace:

    u_i = u_e,
    alpha_i du_i/dn - alpha_e du_e/dn = delta * kappa * Lap_t u_i        on the circle,

where kappa is the material contrast coefficient.  This closure is exact
to second order in the thickness when the interface circle splits the
layer at the mid-diffusion fractions; for any other split a first-order
trace jump survives, and that variant is only available behind an
explicit opt-in because its stability degrades with the sign of the
surviving term.

Two independent solution routes are implemented and kept separate on
purpose.  The direct route eliminates the three radial coefficients per
mode.  The boundary-equation route lifts the source away with a
gradient-continuous particular solution, reduces the remainder to a
scalar equation ``lambda_n omega_n = g_n`` built from the two
Dirichlet-to-Neumann symbols of the homogeneous subproblems, and
reconstructs.  Their agreement to round-off is one of the package's
acceptance checks, so nothing here may share a solve between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import (
    ForcingSpec,
    LayerProfile,
    RadialPiece,
    TwoRegionModeSolution,
    _evaluate_piecewise,
    _relative_residual,
    flux_jump_coefficient,
    solve_two_region_mode,
    solve_u0_mode,
    trace_jump_coefficient,
)
from .geometry import CircleGeometry, FourierMode, LayerSplit, surface_laplacian_symbol
from .materials import MaterialParams

# A mode is declared resonant when the full symbol is this small relative
# to its delta-independent elliptic part.
RESONANCE_RTOL = 1e-10

# Largest first-order trace-jump coefficient still treated as balanced.
_BALANCED_TOL = 1e-12


class ResonantModeError(Exception):
    """The per-mode boundary symbol vanished; the reduced model is singular.

    Carries the offending :class:`BoundarySymbol` as ``symbol``.
    """

    def __init__(self, symbol: BoundarySymbol) -> None:
        super().__init__(
            f"reduced model resonant at mode n = {symbol.n}, delta = {symbol.delta}: "
            f"symbol {symbol.value:.6e} below {RESONANCE_RTOL} of its elliptic part "
            f"{symbol.elliptic_part:.6e}"
        )
        self.symbol = symbol


@dataclass(frozen=True)
class BoundarySymbol:
    """Per-mode symbol of the reduced interface operator."""

    n: int
    delta: float
    value: float
    elliptic_part: float

    @property
    def resonant(self) -> bool:
        return abs(self.value) < RESONANCE_RTOL * self.elliptic_part


def dtn_interior(n: int, geometry: CircleGeometry) -> float:
    """Dirichlet-to-Neumann symbol of the harmonic disk, outward normal."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n: expected a nonnegative integer, got {n!r}")
    return float(n) / geometry.interface_radius


def dtn_exterior(n: int, geometry: CircleGeometry) -> float:
    """Dirichlet-to-Neumann symbol of the harmonic annulus, normal toward the disk.

    The annulus carries a homogeneous Dirichlet condition at the outer
    boundary, which is what makes the n = 0 symbol positive instead of zero.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n: expected a nonnegative integer, got {n!r}")
    interface, rim = geometry.interface_radius, geometry.outer_radius
    if n == 0:
        return 1.0 / (interface * math.log(rim / interface))
    q = (interface / rim) ** (2 * n)
    return (n / interface) * (1.0 + q) / (1.0 - q)


def boundary_symbol(
    n: int, delta: float, geometry: CircleGeometry, params: MaterialParams
) -> BoundarySymbol:
    """Scalar symbol lambda_n of the reduced boundary equation.

    ``lambda_n = alpha_i s_i(n) + alpha_e s_e(n) + delta kappa n^2 / R^2``.
    The elliptic part is positive; the contrast term can cancel it for
    large n or thick layers, and the result then reports itself resonant
    rather than letting a division blow up downstream.
    """
    if delta <= 0.0 or not math.isfinite(delta):
        raise ValueError(f"delta: thickness must be positive, got {delta!r}")
    elliptic = params.alpha_inner * dtn_interior(n, geometry) + params.alpha_outer * dtn_exterior(
        n, geometry
    )
    value = elliptic - delta * params.contrast * surface_laplacian_symbol(n, geometry)
    return BoundarySymbol(n, delta, value, elliptic)


@dataclass(frozen=True)
class LiftResult:
    """Gradient-continuous particular solution and its boundary charge."""

    solution: TwoRegionModeSolution
    g: float


def lift_mode(
    mode: FourierMode,
    delta: float,
    geometry: CircleGeometry,
    params: MaterialParams,
    forcing: ForcingSpec,
) -> LiftResult:
    """Remove the source from the reduced problem by a smooth lift.

    The lift solves the same per-region equations but joins them with
    plain continuity of value and radial derivative, so its normal
    derivative on the interface circle is single-valued.  The remainder
    then satisfies the homogeneous equations with boundary charge

        g = (alpha_e - alpha_i) dG/dn + delta kappa Lap_t G      on the circle.
    """
    solution = solve_two_region_mode(
        mode,
        geometry,
        params.alpha_inner,
        params.alpha_outer,
        forcing.radial_terms(mode),
        weight_in=1.0,
        weight_out=1.0,
    )
    interface = geometry.interface_radius
    gradient = solution.inner.derivative(interface)
    g = (params.alpha_outer - params.alpha_inner) * gradient + (
        delta
        * params.contrast
        * surface_laplacian_symbol(mode.n, geometry)
        * solution.inner.value(interface)
    )
    return LiftResult(solution, g)


@dataclass(frozen=True)
class ReducedModeSolution:
    """Per-mode solution of the reduced problem, from either route."""

    mode: FourierMode
    delta: float
    geometry: CircleGeometry
    params: MaterialParams
    inner: RadialPiece
    outer: RadialPiece
    omega: float
    symbol: BoundarySymbol
    method: str
    residual: float

    @property
    def trace(self) -> float:
        return self.inner.value(self.geometry.interface_radius)

    @property
    def breakpoints(self) -> tuple[float, float, float]:
        return (0.0, self.geometry.interface_radius, self.geometry.outer_radius)

    def evaluate(self, r: float | np.ndarray, derivative_order: int = 0) -> float | np.ndarray:
        return _evaluate_piecewise((self.inner, self.outer), self.breakpoints, r, derivative_order)


def _exterior_harmonic(omega: float, n: int, geometry: CircleGeometry) -> RadialPiece:
    """Harmonic annulus extension with trace omega inside, zero at the rim."""
    interface, rim = geometry.interface_radius, geometry.outer_radius
    if n == 0:
        return RadialPiece(0, 0.0, omega / math.log(interface / rim), (), rim, rim)
    t = (interface / rim) ** n
    q = t * t
    return RadialPiece(n, -omega * t / (1.0 - q), omega / (1.0 - q), (), rim, interface)


def _reduced_residual(
    inner: RadialPiece,
    outer: RadialPiece,
    geometry: CircleGeometry,
    params: MaterialParams,
    coupling: float,
) -> float:
    interface, rim = geometry.interface_radius, geometry.outer_radius
    return _relative_residual(
        [
            (inner.value(interface), outer.value(interface)),
            (
                params.alpha_inner * inner.derivative(interface)
                - coupling * inner.value(interface),
                params.alpha_outer * outer.derivative(interface),
            ),
            (outer.value(rim), 0.0),
        ]
    )


def solve_reduced_mode(
    mode: FourierMode,
    delta: float,
    geometry: CircleGeometry,
    params: MaterialParams,
    forcing: ForcingSpec,
    *,
    method: str = "boundary",
) -> ReducedModeSolution:
    """Solve one mode of the reduced problem.

    ``method="boundary"`` goes through the scalar boundary equation for
    the trace of the lifted remainder; ``method="direct"`` eliminates the
    radial coefficients in one 3x3 solve.  Both raise
    :class:`ResonantModeError` when the boundary symbol degenerates.
    """
    symbol = boundary_symbol(mode.n, delta, geometry, params)
    if symbol.resonant:
        raise ResonantModeError(symbol)
    coupling = delta * params.contrast * surface_laplacian_symbol(mode.n, geometry)
    lift = lift_mode(mode, delta, geometry, params, forcing)
    interface = geometry.interface_radius

    if method == "boundary":
        omega = lift.g / symbol.value
        inner = lift.solution.inner.plus(
            RadialPiece(mode.n, omega, 0.0, (), interface, interface)
        )
        outer = lift.solution.outer.plus(_exterior_harmonic(omega, mode.n, geometry))
    elif method == "direct":
        solution = solve_two_region_mode(
            mode,
            geometry,
            params.alpha_inner,
            params.alpha_outer,
            forcing.radial_terms(mode),
            flux_coupling=coupling,
        )
        inner, outer = solution.inner, solution.outer
        omega = inner.value(interface) - lift.solution.inner.value(interface)
    else:
        raise ValueError(f"method: expected 'boundary' or 'direct', got {method!r}")

    residual = _reduced_residual(inner, outer, geometry, params, coupling)
    return ReducedModeSolution(
        mode, delta, geometry, params, inner, outer, omega, symbol, method, residual
    )


def solve_general_reduced_mode(
    mode: FourierMode,
    delta: float,
    geometry: CircleGeometry,
    params: MaterialParams,
    split: LayerSplit,
    forcing: ForcingSpec,
    *,
    unsafe_model: bool = False,
) -> TwoRegionModeSolution:
    """Reduced model for an arbitrary layer split.

    Away from the mid-diffusion split the conditions keep a first-order
    trace jump proportional to the interface gradient,

        u_i - u_e = delta * A * du_i/dn,
        alpha_i du_i/dn - alpha_e du_e/dn = delta * B * Lap_t u_i,

    whose well-posedness depends on the sign of A.  Refuses to run unless
    ``unsafe_model=True`` whenever A fails to vanish.
    """
    a_coef = trace_jump_coefficient(params, split)
    b_coef = flux_jump_coefficient(params, split)
    if abs(a_coef) > _BALANCED_TOL and not unsafe_model:
        raise ValueError(
            "solve_general_reduced_mode: split leaves a first-order trace jump "
            f"(coefficient {a_coef:.3e}); pass unsafe_model=True to solve anyway"
        )
    return solve_two_region_mode(
        mode,
        geometry,
        params.alpha_inner,
        params.alpha_outer,
        forcing.radial_terms(mode),
        trace_coupling=delta * a_coef,
        flux_coupling=delta * b_coef * surface_laplacian_symbol(mode.n, geometry),
    )


def reconstruct_layer_ap(
    side: int, reduced: ReducedModeSolution, split: LayerSplit
) -> LayerProfile:
    """In-layer values implied by the reduced solution, per stretched half.

    Side 1 (s in [-1, 0]):
        u(R) + delta p1 ((s + 1) alpha_i/alpha_d - 1) du_i/dn(R)
    Side 2 (s in [0, 1]):
        u(R) + delta p2 ((s - 1) alpha_e/alpha_d + 1) du_e/dn(R)

    These are physical values (the thickness is folded in), suitable for
    comparing against the resolved layer directly.
    """
    params = reduced.params
    interface = reduced.geometry.interface_radius
    trace = reduced.inner.value(interface)
    if side == 1:
        gradient = reduced.inner.derivative(interface)
        ratio = params.alpha_inner / params.alpha_layer
        return LayerProfile(
            1,
            trace + reduced.delta * split.p1 * (ratio - 1.0) * gradient,
            reduced.delta * split.p1 * ratio * gradient,
        )
    if side == 2:
        gradient = reduced.outer.derivative(interface)
        ratio = params.alpha_outer / params.alpha_layer
        return LayerProfile(
            2,
            trace + reduced.delta * split.p2 * (1.0 - ratio) * gradient,
            reduced.delta * split.p2 * ratio * gradient,
        )
    raise ValueError(f"side: expected 1 or 2, got {side!r}")


def solve_w_recurrence(
    j: int,
    mode: FourierMode,
    geometry: CircleGeometry,
    params: MaterialParams,
    forcing: ForcingSpec,
    previous: TwoRegionModeSolution | None = None,
) -> TwoRegionModeSolution:
    """Terms of the thickness expansion of the reduced solution.

    ``w_0`` is the classical two-material solution; each later term is
    source-free and driven by the tangential Laplacian of its predecessor
    through the flux jump

        alpha_i dw_j/dn - alpha_e dw_j/dn = kappa * Lap_t w_{j-1}.

    Only the first few terms are meaningful at the implemented order.
    """
    if j not in (0, 1, 2):
        raise ValueError(f"j: expansion implemented for j in 0..2, got {j!r}")
    if j == 0:
        return solve_u0_mode(mode, geometry, params, forcing)
    if previous is None:
        raise ValueError(f"previous: term j = {j} needs term j = {j - 1}")
    flux = (
        params.contrast
        * surface_laplacian_symbol(mode.n, geometry)
        * previous.inner.value(geometry.interface_radius)
    )
    return solve_two_region_mode(
        mode,
        geometry,
        params.alpha_inner,
        params.alpha_outer,
        (),
        flux_jump=flux,
    )


def w_partial_sum(
    terms: tuple[TwoRegionModeSolution, ...], delta: float
) -> tuple[RadialPiece, RadialPiece]:
    """Inner and outer pieces of ``sum_j delta^j w_j``."""
    if not terms:
        raise ValueError("terms: need at least one expansion term")
    inner = terms[0].inner
    outer = terms[0].outer
    for j, term in enumerate(terms[1:], start=1):
        inner = inner.plus(term.inner.scaled(delta**j))
        outer = outer.plus(term.outer.scaled(delta**j))
    return inner, outer
