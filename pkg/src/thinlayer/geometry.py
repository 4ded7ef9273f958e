"""Concentric-circle geometry, layer splits, and angular modes.

The domain is a disk of radius ``outer_radius`` containing a circular
interface of radius ``interface_radius``.  A thin layer of total thickness
``delta`` straddles the interface: a fraction ``p1`` of the thickness lies
inside it and ``p2 = 1 - p1`` outside.  Angular dependence is separated into
``cos(n theta)`` / ``sin(n theta)`` modes, so every field in the package
reduces to radial functions indexed by a :class:`FourierMode`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .materials import MaterialParams

# p1 + p2 must reproduce 1.0 essentially exactly; the constructor below
# builds p2 as the complement so this is a tripwire, not a tolerance.
_SPLIT_SUM_ULPS = 4

# Independent recomputation of the complementary fraction must agree with
# 1 - p1 to this relative tolerance, else the contrast is numerically
# degenerate and the split fractions are meaningless.
_SPLIT_CONSISTENCY = 1e-12

# Default band guard: a split with min(p1, p2) below this leaves one layer
# half so thin that the stretched-coordinate profiles are poorly scaled.
DEFAULT_SPLIT_BAND = 0.05


@dataclass(frozen=True)
class CircleGeometry:
    """Interface circle of radius ``interface_radius`` inside a disk."""

    interface_radius: float
    outer_radius: float

    def __post_init__(self) -> None:
        for name in ("interface_radius", "outer_radius"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValueError(f"{name}: expected a finite number, got {value!r}")
        if self.interface_radius <= 0.0:
            raise ValueError(
                f"interface_radius: must be positive, got {self.interface_radius}"
            )
        if self.outer_radius <= self.interface_radius:
            raise ValueError(
                "outer_radius: must exceed interface_radius, got "
                f"{self.outer_radius} <= {self.interface_radius}"
            )

    def layer_bounds(self, delta: float, split: LayerSplit) -> tuple[float, float]:
        """Inner and outer radii of a layer of thickness ``delta``.

        Raises if the layer would swallow the inner disk or reach the
        outer boundary; every solver calls this before assembling.
        """
        if not (isinstance(delta, (int, float)) and math.isfinite(delta)) or delta <= 0.0:
            raise ValueError(f"delta: thickness must be positive, got {delta!r}")
        r_in = self.interface_radius - split.p1 * delta
        r_out = self.interface_radius + split.p2 * delta
        if r_in <= 0.0:
            raise ValueError(
                f"delta: layer reaches the origin (interface {self.interface_radius}, "
                f"inner fraction {split.p1}, delta {delta})"
            )
        if r_out >= self.outer_radius:
            raise ValueError(
                f"delta: layer reaches the outer boundary (outer {self.outer_radius}, "
                f"outer fraction {split.p2}, delta {delta})"
            )
        return r_in, r_out


@dataclass(frozen=True)
class LayerSplit:
    """Fractions of the layer thickness inside (p1) and outside (p2) the interface."""

    p1: float
    p2: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValueError(f"{name}: expected a finite number, got {value!r}")
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name}: fraction must lie in (0, 1), got {value}")
        if abs((self.p1 + self.p2) - 1.0) > _SPLIT_SUM_ULPS * math.ulp(1.0):
            raise ValueError(
                f"p1 + p2 must equal 1, got {self.p1} + {self.p2} = {self.p1 + self.p2!r}"
            )

    @classmethod
    def from_inner_fraction(cls, p1: float) -> LayerSplit:
        return cls(p1, 1.0 - p1)


@dataclass(frozen=True)
class FourierMode:
    """Angular mode ``cos(n theta)`` or ``sin(n theta)``."""

    n: int
    parity: str = "cos"

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"n: expected a nonnegative integer, got {self.n!r}")
        if self.parity not in ("cos", "sin"):
            raise ValueError(f"parity: expected 'cos' or 'sin', got {self.parity!r}")
        if self.n == 0 and self.parity != "cos":
            raise ValueError("parity: the n = 0 mode has no sine branch")

    @property
    def angular_factor(self) -> float:
        """Integral of the squared angular factor over one full turn."""
        return 2.0 * math.pi if self.n == 0 else math.pi


def mid_diffusion_split(
    params: MaterialParams, band: float = DEFAULT_SPLIT_BAND
) -> LayerSplit:
    """Layer split that cancels the first-order trace jump across the layer.

    Defined only when the layer conductivity lies strictly between the inner
    and outer ones.  Warns (without failing) when either fraction falls
    below ``band``: the split is still exact, but one layer half becomes so
    thin that its stretched profile carries little of the correction.
    """
    if not params.layer_is_between():
        raise ValueError(
            "mid-diffusion split undefined: alpha_layer must lie strictly between "
            f"alpha_inner and alpha_outer, got ({params.alpha_inner}, "
            f"{params.alpha_layer}, {params.alpha_outer})"
        )
    a_i, a_d, a_e = params.alpha_inner, params.alpha_layer, params.alpha_outer
    p1 = a_i * (a_e - a_d) / (a_d * (a_e - a_i))
    p2 = a_e * (a_d - a_i) / (a_d * (a_e - a_i))
    if abs(p2 - (1.0 - p1)) > _SPLIT_CONSISTENCY * max(1.0, abs(p2)):
        raise ValueError(
            f"mid-diffusion split numerically degenerate: fractions {p1} and {p2} "
            "do not complement each other"
        )
    if min(p1, p2) < band:
        warnings.warn(
            f"mid-diffusion split ({p1:.6g}, {p2:.6g}) leaves a layer fraction "
            f"below {band}; stretched profiles on the thin side are poorly scaled",
            RuntimeWarning,
            stacklevel=2,
        )
    # Store the exact complement; p2 above re-derives it as a consistency check.
    return LayerSplit(p1, 1.0 - p1)


def surface_laplacian_symbol(n: int, geometry: CircleGeometry) -> float:
    """Per-mode symbol of the tangential Laplacian on the interface circle."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n: expected a nonnegative integer, got {n!r}")
    return -float(n * n) / geometry.interface_radius**2


def layer_radius(
    geometry: CircleGeometry,
    split: LayerSplit,
    delta: float,
    side: int,
    s: float,
) -> float:
    """Physical radius of the stretched layer coordinate ``s``.

    Side 1 is the inner half with ``s`` in [-1, 0]; side 2 the outer half
    with ``s`` in [0, 1].  ``s = 0`` maps to the interface on both sides.
    """
    geometry.layer_bounds(delta, split)
    if side == 1:
        if not -1.0 <= s <= 0.0:
            raise ValueError(f"s: side 1 requires s in [-1, 0], got {s}")
        return geometry.interface_radius + delta * split.p1 * s
    if side == 2:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"s: side 2 requires s in [0, 1], got {s}")
        return geometry.interface_radius + delta * split.p2 * s
    raise ValueError(f"side: expected 1 or 2, got {side!r}")


def stretched_coordinate(
    geometry: CircleGeometry,
    split: LayerSplit,
    delta: float,
    side: int,
    r: float,
) -> float:
    """Inverse of :func:`layer_radius` for a radius inside the layer half."""
    fraction = {1: split.p1, 2: split.p2}.get(side)
    if fraction is None:
        raise ValueError(f"side: expected 1 or 2, got {side!r}")
    return (r - geometry.interface_radius) / (delta * fraction)
