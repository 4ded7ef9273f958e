"""Empirical convergence studies for the expansion and the reduced model.

Errors are measured in weighted H1 norms on the delta-dependent regions:
the shrunken disk, the two stretched layer halves, and the outer annulus.
The layer contribution enters with a sqrt(delta) weight, grouped either as
one term over the whole layer or as one term per half; both groupings are
supported because the two convergence statements use different ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .analytic import (
    ForcingSpec,
    ForcingTerm,
    LayerProfile,
    RadialPiece,
    layer_profile_order1,
    solve_full_mode,
    solve_two_region_mode,
    solve_u0_mode,
    solve_u1_mode,
)
from .geometry import CircleGeometry, FourierMode, LayerSplit, mid_diffusion_split
from .materials import MaterialParams
from .oracle import fd_oracle_solve, four_region_problem, two_region_problem
from .quadrature import QuadratureRule, h1_norm_mode
from .reduced import (
    reconstruct_layer_ap,
    solve_reduced_mode,
    solve_w_recurrence,
    w_partial_sum,
)

DEFAULT_DELTA_LADDER = (0.1, 0.05, 0.025, 0.0125, 0.00625)

# Layer-term groupings for the composite error.
WHOLE_LAYER = "whole-layer"
PER_SIDE = "per-side"
_GROUPINGS = (WHOLE_LAYER, PER_SIDE)

_Curve = tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]


def _check_grouping(grouping: str) -> None:
    if grouping not in _GROUPINGS:
        raise ValueError(
            f"grouping: expected one of {_GROUPINGS}, got {grouping!r}"
        )


@dataclass(frozen=True)
class Scenario:
    """One experiment: geometry, materials, split, forcing, and quadrature."""

    geometry: CircleGeometry
    params: MaterialParams
    split: LayerSplit
    forcing: ForcingSpec
    modes: tuple[FourierMode, ...]
    rule: QuadratureRule
    panels: int = 4

    def __post_init__(self) -> None:
        if not self.modes:
            raise ValueError("modes: need at least one Fourier mode")
        seen = set()
        for mode in self.modes:
            key = (mode.n, mode.parity)
            if key in seen:
                raise ValueError(f"modes: duplicate entry n={mode.n}")
            seen.add(key)
        if self.panels < 1:
            raise ValueError("panels: need a positive panel count")


def default_scenario(points: int = 32) -> Scenario:
    """R=1, rim at 2, conductivities (1, 2, 4), f = 4 + r cos(2 theta)."""
    params = MaterialParams(1.0, 2.0, 4.0)
    forcing = ForcingSpec(
        (
            ForcingTerm(4.0, 0, FourierMode(0)),
            ForcingTerm(1.0, 1, FourierMode(2)),
        )
    )
    return Scenario(
        CircleGeometry(1.0, 2.0),
        params,
        mid_diffusion_split(params),
        forcing,
        (FourierMode(0), FourierMode(2)),
        QuadratureRule.gauss_legendre(points),
    )


@dataclass(frozen=True)
class ModeError:
    """H1 errors of one Fourier mode by region; layer halves unweighted."""

    delta: float
    mode: FourierMode
    inner: float
    layer_in: float
    layer_out: float
    outer: float

    def __post_init__(self) -> None:
        for name in ("inner", "layer_in", "layer_out", "outer"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name}: error must be finite and nonnegative")

    @property
    def layer(self) -> float:
        return math.hypot(self.layer_in, self.layer_out)

    def weighted_layer(self, grouping: str) -> float:
        _check_grouping(grouping)
        root = math.sqrt(self.delta)
        if grouping == WHOLE_LAYER:
            return root * self.layer
        return root * (self.layer_in + self.layer_out)

    def composite(self, grouping: str) -> float:
        return self.inner + self.weighted_layer(grouping) + self.outer


def _rss(values: Iterable[float]) -> float:
    return math.sqrt(math.fsum(v * v for v in values))


@dataclass(frozen=True)
class ErrorRecord:
    """Mode-summed errors at one thickness, composited under one grouping."""

    delta: float
    grouping: str
    inner: float
    layer_weighted: float
    outer: float
    composite: float
    per_mode: tuple[ModeError, ...]

    @classmethod
    def from_modes(cls, per_mode: Sequence[ModeError], grouping: str) -> ErrorRecord:
        _check_grouping(grouping)
        per_mode = tuple(per_mode)
        if not per_mode:
            raise ValueError("per_mode: need at least one mode error")
        delta = per_mode[0].delta
        if any(entry.delta != delta for entry in per_mode):
            raise ValueError("per_mode: mixed layer thicknesses")
        inner = _rss(entry.inner for entry in per_mode)
        outer = _rss(entry.outer for entry in per_mode)
        root = math.sqrt(delta)
        if grouping == WHOLE_LAYER:
            layer_weighted = root * _rss(entry.layer for entry in per_mode)
        else:
            layer_weighted = root * (
                _rss(entry.layer_in for entry in per_mode)
                + _rss(entry.layer_out for entry in per_mode)
            )
        composite = inner + layer_weighted + outer
        return cls(delta, grouping, inner, layer_weighted, outer, composite, per_mode)


def fit_slope(pairs: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope of ln(error) vs ln(scale), plus the RMS residual."""
    pairs = tuple(pairs)
    if len(pairs) < 3:
        raise ValueError("pairs: need at least 3 ladder points to fit a slope")
    for scale, error in pairs:
        if scale <= 0.0:
            raise ValueError("pairs: ladder scales must be positive")
        if not math.isfinite(error) or error <= 0.0:
            raise ValueError(
                "degenerate ladder: error is not positive at scale "
                f"{scale!r}; the comparison is exact there and has no rate"
            )
    x = np.log([p[0] for p in pairs])
    y = np.log([p[1] for p in pairs])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


@dataclass(frozen=True)
class ConvergenceReport:
    """Error records over a decreasing thickness ladder with a fitted rate."""

    records: tuple[ErrorRecord, ...]
    slope: float
    residual: float

    @classmethod
    def from_records(cls, records: Sequence[ErrorRecord]) -> ConvergenceReport:
        records = tuple(records)
        deltas = [record.delta for record in records]
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("records: thickness ladder must strictly decrease")
        slope, residual = fit_slope(
            [(record.delta, record.composite) for record in records]
        )
        return cls(records, slope, residual)

    def component_slope(self, field_name: str) -> float:
        slope, _ = fit_slope(
            [(record.delta, getattr(record, field_name)) for record in self.records]
        )
        return slope


def _curve(piece: RadialPiece) -> _Curve:
    return piece.value, piece.derivative


def _curve_sum(base: RadialPiece, extra: RadialPiece, weight: float) -> _Curve:
    def value(r: np.ndarray) -> np.ndarray:
        return base.value(r) + weight * extra.value(r)

    def derivative(r: np.ndarray) -> np.ndarray:
        return base.derivative(r) + weight * extra.derivative(r)

    return value, derivative


def _layer_curve(
    offset: float,
    profile: LayerProfile,
    profile_scale: float,
    delta: float,
    split: LayerSplit,
    geometry: CircleGeometry,
) -> _Curve:
    """Physical radial curve offset + profile_scale * profile(s(r)) on one half."""
    fraction = split.p1 if profile.side == 1 else split.p2
    interface = geometry.interface_radius
    width = delta * fraction
    gradient = profile_scale * profile.slope / width

    def value(r: np.ndarray) -> np.ndarray:
        s = (np.asarray(r, dtype=float) - interface) / width
        return offset + profile_scale * profile.value(s)

    def derivative(r: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(r, dtype=float), gradient)

    return value, derivative


def _h1_gap(
    left: _Curve, right: _Curve, lo: float, hi: float, mode: FourierMode, scenario: Scenario
) -> float:
    def value(r: np.ndarray) -> np.ndarray:
        return left[0](r) - right[0](r)

    def derivative(r: np.ndarray) -> np.ndarray:
        return left[1](r) - right[1](r)

    return h1_norm_mode(
        value,
        derivative,
        lo,
        hi,
        mode.n,
        mode.angular_factor,
        scenario.rule,
        scenario.panels,
    )


def theorem2_errors(order: int, delta: float, scenario: Scenario) -> ErrorRecord:
    """Resolved layer vs the order-0 or order-1 expansion, whole-layer grouping."""
    if order not in (0, 1):
        raise ValueError(f"order: expected 0 or 1, got {order!r}")
    geometry, params, split = scenario.geometry, scenario.params, scenario.split
    r_in, r_out = geometry.layer_bounds(delta, split)
    interface = geometry.interface_radius
    per_mode = []
    for mode in scenario.modes:
        full = solve_full_mode(mode, delta, geometry, split, params, scenario.forcing)
        u0 = solve_u0_mode(mode, geometry, params, scenario.forcing)
        trace0 = u0.inner.value(interface)
        if order == 0:
            inner_cmp = _curve(u0.inner)
            outer_cmp = _curve(u0.outer)
            flat = LayerProfile(1, 0.0, 0.0)
            layer1_cmp = _layer_curve(trace0, flat, 0.0, delta, split, geometry)
            layer2_cmp = _layer_curve(
                trace0, LayerProfile(2, 0.0, 0.0), 0.0, delta, split, geometry
            )
        else:
            u1 = solve_u1_mode(mode, geometry, params, split, u0)
            inner_cmp = _curve_sum(u0.inner, u1.inner, delta)
            outer_cmp = _curve_sum(u0.outer, u1.outer, delta)
            layer1_cmp = _layer_curve(
                trace0,
                layer_profile_order1(1, params, split, u0, u1),
                delta,
                delta,
                split,
                geometry,
            )
            layer2_cmp = _layer_curve(
                trace0,
                layer_profile_order1(2, params, split, u0, u1),
                delta,
                delta,
                split,
                geometry,
            )
        per_mode.append(
            ModeError(
                delta,
                mode,
                inner=_h1_gap(_curve(full.inner), inner_cmp, 0.0, r_in, mode, scenario),
                layer_in=_h1_gap(
                    _curve(full.layer_in), layer1_cmp, r_in, interface, mode, scenario
                ),
                layer_out=_h1_gap(
                    _curve(full.layer_out), layer2_cmp, interface, r_out, mode, scenario
                ),
                outer=_h1_gap(
                    _curve(full.outer),
                    outer_cmp,
                    r_out,
                    geometry.outer_radius,
                    mode,
                    scenario,
                ),
            )
        )
    return ErrorRecord.from_modes(per_mode, WHOLE_LAYER)


def theorem4_errors(
    delta: float, scenario: Scenario, method: str = "boundary"
) -> ErrorRecord:
    """Resolved layer vs the order-two model, per-side layer grouping."""
    geometry, params, split = scenario.geometry, scenario.params, scenario.split
    r_in, r_out = geometry.layer_bounds(delta, split)
    interface = geometry.interface_radius
    per_mode = []
    for mode in scenario.modes:
        full = solve_full_mode(mode, delta, geometry, split, params, scenario.forcing)
        reduced = solve_reduced_mode(
            mode, delta, geometry, params, scenario.forcing, method=method
        )
        layer1 = reconstruct_layer_ap(1, reduced, split)
        layer2 = reconstruct_layer_ap(2, reduced, split)
        per_mode.append(
            ModeError(
                delta,
                mode,
                inner=_h1_gap(
                    _curve(full.inner), _curve(reduced.inner), 0.0, r_in, mode, scenario
                ),
                layer_in=_h1_gap(
                    _curve(full.layer_in),
                    _layer_curve(0.0, layer1, 1.0, delta, split, geometry),
                    r_in,
                    interface,
                    mode,
                    scenario,
                ),
                layer_out=_h1_gap(
                    _curve(full.layer_out),
                    _layer_curve(0.0, layer2, 1.0, delta, split, geometry),
                    interface,
                    r_out,
                    mode,
                    scenario,
                ),
                outer=_h1_gap(
                    _curve(full.outer),
                    _curve(reduced.outer),
                    r_out,
                    geometry.outer_radius,
                    mode,
                    scenario,
                ),
            )
        )
    return ErrorRecord.from_modes(per_mode, PER_SIDE)


def expansion_gap(delta: float, scenario: Scenario) -> ErrorRecord:
    """H1 gap between the order-two model and its two-term thickness series.

    Both objects live on the split domains (no layer region), so the layer
    components are identically zero and the grouping is immaterial.
    """
    geometry, params = scenario.geometry, scenario.params
    interface = geometry.interface_radius
    per_mode = []
    for mode in scenario.modes:
        reduced = solve_reduced_mode(mode, delta, geometry, params, scenario.forcing)
        w0 = solve_w_recurrence(0, mode, geometry, params, scenario.forcing)
        w1 = solve_w_recurrence(1, mode, geometry, params, scenario.forcing, previous=w0)
        inner_sum, outer_sum = w_partial_sum((w0, w1), delta)
        per_mode.append(
            ModeError(
                delta,
                mode,
                inner=_h1_gap(
                    _curve(reduced.inner), _curve(inner_sum), 0.0, interface, mode, scenario
                ),
                layer_in=0.0,
                layer_out=0.0,
                outer=_h1_gap(
                    _curve(reduced.outer),
                    _curve(outer_sum),
                    interface,
                    geometry.outer_radius,
                    mode,
                    scenario,
                ),
            )
        )
    return ErrorRecord.from_modes(per_mode, PER_SIDE)


def dual_route_gap(delta: float, scenario: Scenario) -> float:
    """Largest relative disagreement between the two reduced-solve routes."""
    geometry, params = scenario.geometry, scenario.params
    radii = np.linspace(
        geometry.interface_radius / 50.0, geometry.outer_radius, 101
    )
    worst = 0.0
    for mode in scenario.modes:
        via_boundary = solve_reduced_mode(
            mode, delta, geometry, params, scenario.forcing, method="boundary"
        )
        via_direct = solve_reduced_mode(
            mode, delta, geometry, params, scenario.forcing, method="direct"
        )
        reference = via_direct.evaluate(radii)
        scale = float(np.max(np.abs(reference)))
        gap = float(np.max(np.abs(via_boundary.evaluate(radii) - reference)))
        omega_gap = abs(via_boundary.omega - via_direct.omega)
        if scale > 0.0:
            gap /= scale
            omega_gap /= max(abs(via_direct.omega), scale)
        worst = max(worst, gap, omega_gap)
    return worst


def theorem2_study(
    order: int,
    scenario: Scenario,
    ladder: Sequence[float] = DEFAULT_DELTA_LADDER,
) -> ConvergenceReport:
    return ConvergenceReport.from_records(
        [theorem2_errors(order, delta, scenario) for delta in ladder]
    )


def theorem4_study(
    scenario: Scenario,
    ladder: Sequence[float] = DEFAULT_DELTA_LADDER,
    method: str = "boundary",
) -> ConvergenceReport:
    return ConvergenceReport.from_records(
        [theorem4_errors(delta, scenario, method) for delta in ladder]
    )


def expansion_study(
    scenario: Scenario, ladder: Sequence[float] = DEFAULT_DELTA_LADDER
) -> ConvergenceReport:
    return ConvergenceReport.from_records(
        [expansion_gap(delta, scenario) for delta in ladder]
    )


ORACLE_KINDS = ("full", "two-region", "jump")


@dataclass(frozen=True)
class OracleStudy:
    """Finite-difference-vs-analytic errors over a grid ladder."""

    kind: str
    spacings: tuple[float, ...]
    errors: tuple[float, ...]
    order: float
    residual: float


def oracle_study(
    kind: str,
    scenario: Scenario,
    *,
    delta: float = 0.1,
    levels: int = 4,
    h0: float | None = None,
) -> OracleStudy:
    """Cross-check one analytic configuration against the grid solver.

    Uses the scenario's first mode with n > 0: pure n = 0 configurations
    with polynomial forcing are reproduced exactly by the second-order
    stencil, which leaves no rate to observe.
    """
    if kind not in ORACLE_KINDS:
        raise ValueError(f"kind: expected one of {ORACLE_KINDS}, got {kind!r}")
    geometry, params, split = scenario.geometry, scenario.params, scenario.split
    interface, rim = geometry.interface_radius, geometry.outer_radius
    mode = next((m for m in scenario.modes if m.n > 0), scenario.modes[0])
    terms = scenario.forcing.radial_terms(mode)

    if kind == "full":
        r_in, r_out = geometry.layer_bounds(delta, split)
        solution = solve_full_mode(mode, delta, geometry, split, params, scenario.forcing)
        problem = four_region_problem(
            r_in,
            interface,
            r_out,
            rim,
            mode.n,
            params.alpha_inner,
            params.alpha_layer,
            params.alpha_outer,
            forcing=terms,
        )
        references = [
            solution.inner.value,
            solution.layer_in.value,
            solution.layer_out.value,
            solution.outer.value,
        ]
        narrowest = min(r_in, interface - r_in, r_out - interface, rim - r_out)
        base = h0 if h0 is not None else narrowest / 8.0
    elif kind == "two-region":
        u0 = solve_u0_mode(mode, geometry, params, scenario.forcing)
        problem = two_region_problem(
            interface,
            rim,
            mode.n,
            alpha_in=params.alpha_inner,
            alpha_out=params.alpha_outer,
            forcing_in=terms,
            forcing_out=terms,
        )
        references = [u0.inner.value, u0.outer.value]
        base = h0 if h0 is not None else min(interface, rim - interface) / 32.0
    else:
        # Source-free problem driven purely by prescribed interface jumps.
        trace_jump, flux_jump = 0.75, -2.0
        analytic = solve_two_region_mode(
            mode,
            geometry,
            params.alpha_inner,
            params.alpha_outer,
            (),
            trace_jump=trace_jump,
            flux_jump=flux_jump,
        )
        problem = two_region_problem(
            interface,
            rim,
            mode.n,
            alpha_in=params.alpha_inner,
            alpha_out=params.alpha_outer,
            trace_jump=trace_jump,
            flux_jump=flux_jump,
        )
        references = [analytic.inner.value, analytic.outer.value]
        base = h0 if h0 is not None else min(interface, rim - interface) / 32.0

    spacings = tuple(base / 2**level for level in range(levels))
    errors = tuple(
        fd_oracle_solve(problem, h).max_error(references) for h in spacings
    )
    order, residual = fit_slope(zip(spacings, errors))
    return OracleStudy(kind, spacings, errors, order, residual)