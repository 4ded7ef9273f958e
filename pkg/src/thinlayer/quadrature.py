"""Gauss-Legendre quadrature and per-mode H1 norms on radial intervals.

For a field ``v(r) cos(n theta)`` the squared H1 norm over the annulus
``a < r < b`` separates into an angular factor times a radial integral

    integral_a^b (v'(r)^2 + (n^2/r^2) v(r)^2 + v(r)^2) r dr,

which is what :func:`h1_norm_mode` evaluates.  Every integrand in this
package is analytic on the interval it is integrated over, so composite
Gauss-Legendre converges to round-off with a handful of panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

# Construction self-test threshold: the rule must integrate every monomial
# it is exact for back to this relative accuracy.
_SELF_TEST_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on (-1, 1), self-tested at build time."""

    points: int
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def gauss_legendre(cls, points: int) -> QuadratureRule:
        if not isinstance(points, int) or points < 8:
            raise ValueError(f"points: expected an integer >= 8, got {points!r}")
        nodes, weights = np.polynomial.legendre.leggauss(points)
        rule = cls(points, nodes, weights)
        rule._self_test()
        return rule

    def _self_test(self) -> None:
        # Exact for all monomials of degree <= 2*points - 1.
        for k in range(2 * self.points):
            got = float(np.sum(self.weights * self.nodes**k))
            want = 0.0 if k % 2 else 2.0 / (k + 1)
            if abs(got - want) > _SELF_TEST_TOL * max(1.0, abs(want)):
                raise RuntimeError(
                    f"quadrature self-test failed at degree {k}: {got} != {want}"
                )

    def on_interval(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped to the interval (a, b)."""
        if not b > a:
            raise ValueError(f"interval: expected a < b, got ({a}, {b})")
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights


def integrate(
    fn: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rule: QuadratureRule,
    panels: int = 1,
) -> float:
    """Composite Gauss-Legendre integral of a vectorized integrand."""
    if panels < 1:
        raise ValueError(f"panels: expected >= 1, got {panels}")
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        r, w = rule.on_interval(float(lo), float(hi))
        total += float(np.sum(w * fn(r)))
    return total


def h1_norm_mode(
    value: Callable[[np.ndarray], np.ndarray],
    derivative: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    n: int,
    angular_factor: float,
    rule: QuadratureRule,
    panels: int = 4,
) -> float:
    """H1 norm of ``value(r) * (angular mode n)`` over the annulus a < r < b.

    ``value`` and ``derivative`` must accept numpy arrays of radii.  For
    n = 0 the tangential term vanishes identically and is skipped, which
    also keeps the integrand finite on intervals starting at the origin.
    """
    nsq = float(n * n)

    def integrand(r: np.ndarray) -> np.ndarray:
        v = np.asarray(value(r), dtype=float)
        d = np.asarray(derivative(r), dtype=float)
        energy = d * d + v * v
        if nsq:
            energy = energy + (nsq / (r * r)) * v * v
        return energy * r

    return math.sqrt(angular_factor * integrate(integrand, a, b, rule, panels))
