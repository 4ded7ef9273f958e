"""Material data for a three-conductivity composite medium.

The medium is a disk of conductivity ``alpha_inner`` separated from an
exterior annulus of conductivity ``alpha_outer`` by a thin annular layer of
conductivity ``alpha_layer``.  Several derived quantities (the layer split
fractions, the contrast coefficient entering the order-two interface
conditions) only make sense when the layer conductivity lies strictly
between the other two, so that ordering test is centralised here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Relative guard for the strict-ordering test: conductivities closer than
# this are treated as equal, which keeps the split fractions away from 0/0.
ORDERING_GUARD = 1e-12


@dataclass(frozen=True)
class MaterialParams:
    """Conductivities of the inner disk, thin layer, and outer annulus."""

    alpha_inner: float
    alpha_layer: float
    alpha_outer: float

    def __post_init__(self) -> None:
        for name in ("alpha_inner", "alpha_layer", "alpha_outer"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValueError(f"{name}: expected a finite number, got {value!r}")
            if value <= 0.0:
                raise ValueError(f"{name}: conductivity must be positive, got {value}")

    @property
    def scale(self) -> float:
        return max(self.alpha_inner, self.alpha_layer, self.alpha_outer)

    def layer_is_between(self) -> bool:
        """True when the layer conductivity sits strictly between the other two.

        Strictness uses a relative guard so that nearly equal conductivities
        do not pass: the downstream split fractions diverge as the gaps close.
        """
        guard = ORDERING_GUARD * self.scale
        lo = min(self.alpha_inner, self.alpha_outer)
        hi = max(self.alpha_inner, self.alpha_outer)
        return self.alpha_layer - lo > guard and hi - self.alpha_layer > guard

    @property
    def contrast(self) -> float:
        """Contrast coefficient (alpha_e - alpha_d)(alpha_i - alpha_d)/alpha_d.

        This is the coefficient multiplying the surface Laplacian in the
        order-two interface conditions.  Negative whenever the layer
        conductivity lies strictly between the other two.
        """
        return (
            (self.alpha_outer - self.alpha_layer)
            * (self.alpha_inner - self.alpha_layer)
            / self.alpha_layer
        )
