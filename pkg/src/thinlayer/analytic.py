"""Closed-form per-mode solvers for the thin-layer transmission problem.

Separating the angular dependence turns every problem here into a radial
ODE per mode,

    -alpha * ( (1/r) (r u')' - (n^2/r^2) u ) = f_n(r),

whose homogeneous solutions are r^n and r^-n (1 and ln r for n = 0) and
whose particular solutions for polynomial forcing are again monomials.
Three solvers share that machinery:

* :func:`solve_full_mode` resolves the layer exactly: four regions, with
  trace and conductivity-weighted flux continuity at the layer faces and
  plain continuity of value and derivative inside the layer.
* :func:`solve_u0_mode` is the leading-order problem with the layer
  collapsed onto the interface circle (classical two-material
  transmission).
* :func:`solve_u1_mode` is the first-order corrector: homogeneous per
  region, driven by interface jumps proportional to the leading-order
  trace data, with the companion layer profiles from
  :func:`layer_profile_order1`.

All linear systems are at most 7x7 and solved by LU with partial
pivoting; the homogeneous basis is rescaled per region so the matrices
stay well conditioned for mode numbers well beyond the defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CircleGeometry, FourierMode, LayerSplit, surface_laplacian_symbol
from .materials import MaterialParams

RadialTerms = tuple[tuple[float, int], ...]

# A solve whose interface conditions fail at this level is broken, not
# merely inaccurate; tests pin far tighter bounds on the shipped scenarios.
_RESIDUAL_CEILING = 1e-8


@dataclass(frozen=True)
class ForcingTerm:
    """One separable source term ``coefficient * r^radial_power * (mode)``."""

    coefficient: float
    radial_power: int
    mode: FourierMode

    def __post_init__(self) -> None:
        if not math.isfinite(self.coefficient):
            raise ValueError(f"coefficient: must be finite, got {self.coefficient!r}")
        if not isinstance(self.radial_power, int) or self.radial_power < 0:
            raise ValueError(
                f"radial_power: expected a nonnegative integer, got {self.radial_power!r}"
            )
        if self.radial_power + 2 == self.mode.n:
            raise ValueError(
                f"radial_power: power {self.radial_power} is resonant with mode "
                f"n = {self.mode.n} (r^{self.mode.n} solves the homogeneous equation)"
            )


@dataclass(frozen=True)
class ForcingSpec:
    """A finite sum of separable polynomial source terms."""

    terms: tuple[ForcingTerm, ...]

    def modes(self) -> tuple[FourierMode, ...]:
        seen: list[FourierMode] = []
        for term in self.terms:
            if term.mode not in seen:
                seen.append(term.mode)
        return tuple(seen)

    def radial_terms(self, mode: FourierMode) -> RadialTerms:
        return tuple(
            (term.coefficient, term.radial_power)
            for term in self.terms
            if term.mode == mode
        )


def particular_radial(terms: RadialTerms, n: int, alpha: float) -> RadialTerms:
    """Monomial particular solution of the mode-n radial equation.

    A source ``c r^m`` is matched by ``-c / (alpha ((m+2)^2 - n^2)) r^(m+2)``,
    which exists precisely because resonant powers are rejected.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha: conductivity must be positive, got {alpha}")
    out = []
    for coefficient, power in terms:
        if power + 2 == n:
            raise ValueError(
                f"resonant forcing power {power} for mode n = {n}"
            )
        denom = alpha * float((power + 2) ** 2 - n * n)
        out.append((-coefficient / denom, power + 2))
    return tuple(out)


def _terms_value(terms: RadialTerms, r: float | np.ndarray) -> float | np.ndarray:
    rr = np.asarray(r, dtype=float)
    out = np.zeros_like(rr)
    for coefficient, power in terms:
        out = out + coefficient * rr**power
    return float(out) if out.ndim == 0 else out


def _terms_derivative(terms: RadialTerms, r: float | np.ndarray) -> float | np.ndarray:
    rr = np.asarray(r, dtype=float)
    out = np.zeros_like(rr)
    for coefficient, power in terms:
        if power:  # constant terms contribute nothing and r^-1 at 0 is a trap
            out = out + coefficient * power * rr ** (power - 1)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RadialPiece:
    """Radial solution on one region: homogeneous pair plus particular terms.

    For n >= 1 the value is ``a (r/a_scale)^n + b (b_scale/r)^n`` plus the
    particular monomials; for n = 0 it is ``a + b ln(r/b_scale)`` plus the
    same.  The scales keep assembled systems well conditioned and are free
    choices: rescaling moves the coefficients, not the function.
    """

    n: int
    a: float
    b: float
    particular: RadialTerms = ()
    a_scale: float = 1.0
    b_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.a_scale <= 0.0 or self.b_scale <= 0.0:
            raise ValueError("scales must be positive")

    def value(self, r: float | np.ndarray) -> float | np.ndarray:
        rr = np.asarray(r, dtype=float)
        out = np.zeros_like(rr)
        if self.n == 0:
            out = out + self.a
            if self.b:
                out = out + self.b * np.log(rr / self.b_scale)
        else:
            if self.a:
                out = out + self.a * (rr / self.a_scale) ** self.n
            if self.b:
                out = out + self.b * (self.b_scale / rr) ** self.n
        out = out + _terms_value(self.particular, rr)
        return float(out) if np.isscalar(r) else out

    def derivative(self, r: float | np.ndarray) -> float | np.ndarray:
        rr = np.asarray(r, dtype=float)
        out = np.zeros_like(rr)
        if self.n == 0:
            if self.b:
                out = out + self.b / rr
        else:
            if self.a:
                out = out + self.a * self.n * rr ** (self.n - 1) / self.a_scale**self.n
            if self.b:
                out = out - self.b * self.n * self.b_scale**self.n * rr ** (-self.n - 1)
        out = out + _terms_derivative(self.particular, rr)
        return float(out) if np.isscalar(r) else out

    def scaled(self, factor: float) -> RadialPiece:
        """The piece multiplied pointwise by a constant."""
        return RadialPiece(
            self.n,
            factor * self.a,
            factor * self.b,
            tuple((factor * c, p) for c, p in self.particular),
            self.a_scale,
            self.b_scale,
        )

    def plus(self, other: RadialPiece) -> RadialPiece:
        """Pointwise sum, renormalized to this piece's scales."""
        if other.n != self.n:
            raise ValueError(f"cannot add pieces of modes {self.n} and {other.n}")
        if self.n == 0:
            a = self.a + other.a + other.b * math.log(self.b_scale / other.b_scale)
            b = self.b + other.b
        else:
            a = self.a + other.a * (self.a_scale / other.a_scale) ** self.n
            b = self.b + other.b * (other.b_scale / self.b_scale) ** self.n
        merged: dict[int, float] = {}
        for coefficient, power in self.particular + other.particular:
            merged[power] = merged.get(power, 0.0) + coefficient
        particular = tuple(
            (merged[power], power) for power in sorted(merged) if merged[power] != 0.0
        )
        return RadialPiece(self.n, a, b, particular, self.a_scale, self.b_scale)


def _hom_rows(n: int, r: float, a_scale: float, b_scale: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """(value, derivative) coefficients of the two homogeneous basis functions."""
    if n == 0:
        return (1.0, math.log(r / b_scale)), (0.0, 1.0 / r)
    va = (r / a_scale) ** n
    vb = (b_scale / r) ** n
    da = n * r ** (n - 1) / a_scale**n
    db = -n * b_scale**n * r ** (-n - 1)
    return (va, vb), (da, db)


def _solve(matrix: np.ndarray, rhs: np.ndarray, context: str) -> np.ndarray:
    try:
        solution = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"{context}: singular interface system ({exc})") from exc
    if not np.all(np.isfinite(solution)):
        raise ValueError(f"{context}: interface system produced non-finite coefficients")
    return solution


def _relative_residual(pairs: list[tuple[float, float]]) -> float:
    """Max residual of ``lhs - rhs`` pairs, each scaled by its own magnitude."""
    worst = 0.0
    for lhs, rhs in pairs:
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    return worst


@dataclass(frozen=True)
class FullModeSolution:
    """Exact per-mode solution of the four-region transmission problem."""

    mode: FourierMode
    delta: float
    geometry: CircleGeometry
    split: LayerSplit
    params: MaterialParams
    inner: RadialPiece
    layer_in: RadialPiece
    layer_out: RadialPiece
    outer: RadialPiece
    residual: float

    @property
    def breakpoints(self) -> tuple[float, float, float, float, float]:
        r_in, r_out = self.geometry.layer_bounds(self.delta, self.split)
        return (0.0, r_in, self.geometry.interface_radius, r_out, self.geometry.outer_radius)

    def _pieces(self) -> tuple[RadialPiece, ...]:
        return (self.inner, self.layer_in, self.layer_out, self.outer)

    def evaluate(self, r: float | np.ndarray, derivative_order: int = 0) -> float | np.ndarray:
        return _evaluate_piecewise(self._pieces(), self.breakpoints, r, derivative_order)


@dataclass(frozen=True)
class TwoRegionModeSolution:
    """Per-mode solution of a disk/annulus pair joined at the interface circle."""

    mode: FourierMode
    geometry: CircleGeometry
    inner: RadialPiece
    outer: RadialPiece
    residual: float

    @property
    def breakpoints(self) -> tuple[float, float, float]:
        return (0.0, self.geometry.interface_radius, self.geometry.outer_radius)

    def evaluate(self, r: float | np.ndarray, derivative_order: int = 0) -> float | np.ndarray:
        return _evaluate_piecewise((self.inner, self.outer), self.breakpoints, r, derivative_order)


def _evaluate_piecewise(
    pieces: tuple[RadialPiece, ...],
    breakpoints: tuple[float, ...],
    r: float | np.ndarray,
    derivative_order: int,
) -> float | np.ndarray:
    if derivative_order not in (0, 1):
        raise ValueError(f"derivative_order: expected 0 or 1, got {derivative_order!r}")
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rr < 0.0) or np.any(rr > breakpoints[-1] * (1.0 + 1e-12)):
        raise ValueError("r: radius outside the computational disk")
    # Interior breakpoints own their left piece; the last piece is closed.
    index = np.searchsorted(np.asarray(breakpoints[1:-1]), rr, side="right")
    out = np.empty_like(rr)
    for k, piece in enumerate(pieces):
        mask = index == k
        if np.any(mask):
            fn = piece.value if derivative_order == 0 else piece.derivative
            out[mask] = fn(rr[mask])
    return float(out[0]) if np.isscalar(r) else out


def eval_mode_solution(
    solution: FullModeSolution | TwoRegionModeSolution,
    r: float | np.ndarray,
    derivative_order: int = 0,
) -> float | np.ndarray:
    """Evaluate a piecewise mode solution (or its radial derivative)."""
    return solution.evaluate(r, derivative_order)


def solve_full_mode(
    mode: FourierMode,
    delta: float,
    geometry: CircleGeometry,
    split: LayerSplit,
    params: MaterialParams,
    forcing: ForcingSpec,
) -> FullModeSolution:
    """Resolve one mode of the transmission problem with the layer present.

    Seven conditions close the system: trace and conductivity-weighted
    flux continuity at both layer faces, value and derivative continuity
    at the interface circle inside the layer, and a homogeneous Dirichlet
    condition at the outer boundary.  The inner region keeps only the
    basis function bounded at the origin.
    """
    r_in, r_out = geometry.layer_bounds(delta, split)
    interface = geometry.interface_radius
    rim = geometry.outer_radius
    n = mode.n
    a_i, a_d, a_e = params.alpha_inner, params.alpha_layer, params.alpha_outer

    terms = forcing.radial_terms(mode)
    part_inner = particular_radial(terms, n, a_i)
    part_layer = particular_radial(terms, n, a_d)
    part_outer = particular_radial(terms, n, a_e)

    scales = {
        "inner": (r_in, r_in),
        "layer_in": (interface, r_in),
        "layer_out": (r_out, interface),
        "outer": (rim, r_out),
    }

    matrix = np.zeros((7, 7))
    rhs = np.zeros(7)
    # Unknowns: [a_inner, a_l1, b_l1, a_l2, b_l2, a_outer, b_outer].

    def rows_at(region: str, r: float) -> tuple[tuple[float, float], tuple[float, float]]:
        a_scale, b_scale = scales[region]
        return _hom_rows(n, r, a_scale, b_scale)

    (vi, _), (di, _) = rows_at("inner", r_in)
    v1, d1 = rows_at("layer_in", r_in)
    matrix[0, 0] = vi
    matrix[0, 1:3] = -np.asarray(v1)
    rhs[0] = _terms_value(part_layer, r_in) - _terms_value(part_inner, r_in)
    matrix[1, 0] = a_i * di
    matrix[1, 1:3] = -a_d * np.asarray(d1)
    rhs[1] = a_d * _terms_derivative(part_layer, r_in) - a_i * _terms_derivative(
        part_inner, r_in
    )

    v1, d1 = rows_at("layer_in", interface)
    v2, d2 = rows_at("layer_out", interface)
    matrix[2, 1:3] = np.asarray(v1)
    matrix[2, 3:5] = -np.asarray(v2)
    matrix[3, 1:3] = np.asarray(d1)
    matrix[3, 3:5] = -np.asarray(d2)
    # Same conductivity, same particular: those rows stay homogeneous.

    v2, d2 = rows_at("layer_out", r_out)
    ve, de = rows_at("outer", r_out)
    matrix[4, 3:5] = np.asarray(v2)
    matrix[4, 5:7] = -np.asarray(ve)
    rhs[4] = _terms_value(part_outer, r_out) - _terms_value(part_layer, r_out)
    matrix[5, 3:5] = a_d * np.asarray(d2)
    matrix[5, 5:7] = -a_e * np.asarray(de)
    rhs[5] = a_e * _terms_derivative(part_outer, r_out) - a_d * _terms_derivative(
        part_layer, r_out
    )

    ve, _ = rows_at("outer", rim)
    matrix[6, 5:7] = np.asarray(ve)
    rhs[6] = -_terms_value(part_outer, rim)

    coeffs = _solve(matrix, rhs, "solve_full_mode")

    inner = RadialPiece(n, coeffs[0], 0.0, part_inner, *scales["inner"])
    layer_in = RadialPiece(n, coeffs[1], coeffs[2], part_layer, *scales["layer_in"])
    layer_out = RadialPiece(n, coeffs[3], coeffs[4], part_layer, *scales["layer_out"])
    outer = RadialPiece(n, coeffs[5], coeffs[6], part_outer, *scales["outer"])

    residual = _relative_residual(
        [
            (inner.value(r_in), layer_in.value(r_in)),
            (a_i * inner.derivative(r_in), a_d * layer_in.derivative(r_in)),
            (layer_in.value(interface), layer_out.value(interface)),
            (layer_in.derivative(interface), layer_out.derivative(interface)),
            (layer_out.value(r_out), outer.value(r_out)),
            (a_d * layer_out.derivative(r_out), a_e * outer.derivative(r_out)),
            (outer.value(rim), 0.0),
        ]
    )
    if residual > _RESIDUAL_CEILING:
        raise ValueError(
            f"solve_full_mode: interface conditions violated (residual {residual:.3e})"
        )
    return FullModeSolution(
        mode, delta, geometry, split, params, inner, layer_in, layer_out, outer, residual
    )


def solve_two_region_mode(
    mode: FourierMode,
    geometry: CircleGeometry,
    alpha_in: float,
    alpha_out: float,
    forcing_terms: RadialTerms,
    *,
    weight_in: float | None = None,
    weight_out: float | None = None,
    trace_jump: float = 0.0,
    flux_jump: float = 0.0,
    trace_coupling: float = 0.0,
    flux_coupling: float = 0.0,
) -> TwoRegionModeSolution:
    """General disk/annulus solve; the building block for the layerless models.

    Interface conditions at the interface circle R, with u' the radial
    derivative and w the weights (defaulting to the conductivities):

        u_in(R) - u_out(R) - trace_coupling * u_in'(R) = trace_jump
        w_in u_in'(R) - w_out u_out'(R) - flux_coupling * u_in(R) = flux_jump

    plus the homogeneous Dirichlet condition at the outer boundary.
    """
    interface = geometry.interface_radius
    rim = geometry.outer_radius
    n = mode.n
    w_in = alpha_in if weight_in is None else weight_in
    w_out = alpha_out if weight_out is None else weight_out

    part_inner = particular_radial(forcing_terms, n, alpha_in)
    part_outer = particular_radial(forcing_terms, n, alpha_out)
    inner_scales = (interface, interface)
    outer_scales = (rim, interface)

    (vi, _), (di, _) = _hom_rows(n, interface, *inner_scales)
    ve, de = _hom_rows(n, interface, *outer_scales)
    ve_rim, _ = _hom_rows(n, rim, *outer_scales)

    r_if = interface
    matrix = np.zeros((3, 3))
    rhs = np.zeros(3)
    # Unknowns: [a_inner, a_outer, b_outer].
    matrix[0, 0] = vi - trace_coupling * di
    matrix[0, 1:] = -np.asarray(ve)
    rhs[0] = (
        trace_jump
        + _terms_value(part_outer, r_if)
        - _terms_value(part_inner, r_if)
        + trace_coupling * _terms_derivative(part_inner, r_if)
    )
    matrix[1, 0] = w_in * di - flux_coupling * vi
    matrix[1, 1:] = -w_out * np.asarray(de)
    rhs[1] = (
        flux_jump
        + w_out * _terms_derivative(part_outer, r_if)
        - w_in * _terms_derivative(part_inner, r_if)
        + flux_coupling * _terms_value(part_inner, r_if)
    )
    matrix[2, 1:] = np.asarray(ve_rim)
    rhs[2] = -_terms_value(part_outer, rim)

    coeffs = _solve(matrix, rhs, "solve_two_region_mode")
    inner = RadialPiece(n, coeffs[0], 0.0, part_inner, *inner_scales)
    outer = RadialPiece(n, coeffs[1], coeffs[2], part_outer, *outer_scales)

    residual = _relative_residual(
        [
            (
                inner.value(interface) - trace_coupling * inner.derivative(interface),
                outer.value(interface) + trace_jump,
            ),
            (
                w_in * inner.derivative(interface) - flux_coupling * inner.value(interface),
                w_out * outer.derivative(interface) + flux_jump,
            ),
            (outer.value(rim), 0.0),
        ]
    )
    if residual > _RESIDUAL_CEILING:
        raise ValueError(
            f"solve_two_region_mode: interface conditions violated (residual {residual:.3e})"
        )
    return TwoRegionModeSolution(mode, geometry, inner, outer, residual)


def solve_u0_mode(
    mode: FourierMode,
    geometry: CircleGeometry,
    params: MaterialParams,
    forcing: ForcingSpec,
) -> TwoRegionModeSolution:
    """Leading-order model: classical two-material transmission, no layer."""
    return solve_two_region_mode(
        mode,
        geometry,
        params.alpha_inner,
        params.alpha_outer,
        forcing.radial_terms(mode),
    )


def trace_jump_coefficient(params: MaterialParams, split: LayerSplit) -> float:
    """Coefficient of the leading-order interface gradient in the trace jump.

    Vanishes exactly at the mid-diffusion split; that cancellation is what
    the split is chosen for.
    """
    a_i, a_d, a_e = params.alpha_inner, params.alpha_layer, params.alpha_outer
    return split.p1 * (1.0 - a_i / a_d) + split.p2 * (a_i / a_e - a_i / a_d)


def flux_jump_coefficient(params: MaterialParams, split: LayerSplit) -> float:
    """Coefficient of the tangential second derivative in the flux jump.

    Equals the material contrast coefficient at the mid-diffusion split.
    """
    a_i, a_d, a_e = params.alpha_inner, params.alpha_layer, params.alpha_outer
    return split.p1 * (a_d - a_i) + split.p2 * (a_d - a_e)


def solve_u1_mode(
    mode: FourierMode,
    geometry: CircleGeometry,
    params: MaterialParams,
    split: LayerSplit,
    u0: TwoRegionModeSolution,
) -> TwoRegionModeSolution:
    """First-order corrector driven by the leading-order interface data.

    Homogeneous per region; the layer's effect at this order is a trace
    jump proportional to the leading-order gradient and a flux jump
    proportional to its tangential Laplacian on the interface circle.
    """
    interface = geometry.interface_radius
    trace = trace_jump_coefficient(params, split) * u0.inner.derivative(interface)
    flux = (
        flux_jump_coefficient(params, split)
        * surface_laplacian_symbol(mode.n, geometry)
        * u0.inner.value(interface)
    )
    return solve_two_region_mode(
        mode,
        geometry,
        params.alpha_inner,
        params.alpha_outer,
        (),
        trace_jump=trace,
        flux_jump=flux,
    )


@dataclass(frozen=True)
class LayerProfile:
    """Affine profile in the stretched layer coordinate of one layer half."""

    side: int
    value_at_interface: float
    slope: float

    def value(self, s: float | np.ndarray) -> float | np.ndarray:
        out = self.value_at_interface + self.slope * np.asarray(s, dtype=float)
        return float(out) if np.isscalar(s) else out

    def derivative(self, s: float | np.ndarray) -> float | np.ndarray:
        if np.isscalar(s):
            return self.slope
        return np.full_like(np.asarray(s, dtype=float), self.slope)


def layer_profile_order0(u0: TwoRegionModeSolution, side: int) -> LayerProfile:
    """Order-zero layer profile: the constant leading-order trace."""
    if side not in (1, 2):
        raise ValueError(f"side: expected 1 or 2, got {side!r}")
    return LayerProfile(side, u0.inner.value(u0.geometry.interface_radius), 0.0)


def layer_profile_order1(
    side: int,
    params: MaterialParams,
    split: LayerSplit,
    u0: TwoRegionModeSolution,
    u1: TwoRegionModeSolution,
) -> LayerProfile:
    """First-order layer profile in the stretched coordinate of one half.

    Side 1 (inner half, s in [-1, 0]):
        u1_inner(R) + p1 ((s + 1) alpha_i/alpha_d - 1) * u0_inner'(R)
    Side 2 (outer half, s in [0, 1]):
        u1_outer(R) + p2 ((s - 1) alpha_e/alpha_d + 1) * u0_outer'(R)

    Both halves take the same value at s = 0, and the layer-conductivity
    flux alpha_d/p * d/ds matches the adjacent region's flux at its face.
    """
    interface = u0.geometry.interface_radius
    if side == 1:
        gradient = u0.inner.derivative(interface)
        ratio = params.alpha_inner / params.alpha_layer
        return LayerProfile(
            1,
            u1.inner.value(interface) + split.p1 * (ratio - 1.0) * gradient,
            split.p1 * ratio * gradient,
        )
    if side == 2:
        gradient = u0.outer.derivative(interface)
        ratio = params.alpha_outer / params.alpha_layer
        return LayerProfile(
            2,
            u1.outer.value(interface) + split.p2 * (1.0 - ratio) * gradient,
            split.p2 * ratio * gradient,
        )
    raise ValueError(f"side: expected 1 or 2, got {side!r}")
