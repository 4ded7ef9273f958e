"""Quadrature rule and per-mode H1 norms against closed-form integrals."""

from __future__ import annotations

import math

import numpy as np
import pytest

from thinlayer.quadrature import QuadratureRule, h1_norm_mode, integrate


@pytest.fixture(scope="module")
def rule() -> QuadratureRule:
    return QuadratureRule.gauss_legendre(16)


def test_construction_rejects_small_rules() -> None:
    with pytest.raises(ValueError, match="points"):
        QuadratureRule.gauss_legendre(4)


def test_construction_self_test_catches_bad_weights() -> None:
    good = QuadratureRule.gauss_legendre(8)
    bad = QuadratureRule(8, good.nodes, good.weights * (1.0 + 1e-6))
    with pytest.raises(RuntimeError, match="self-test"):
        bad._self_test()


def test_polynomial_exactness(rule: QuadratureRule) -> None:
    # Degree 31 is the exactness limit of a 16-point rule.
    exact = (5.0**32 - 2.0**32) / 32.0
    for panels in (1, 3):
        got = integrate(lambda r: r**31, 2.0, 5.0, rule, panels=panels)
        assert got == pytest.approx(exact, rel=1e-14)


def test_logarithmic_integrand(rule: QuadratureRule) -> None:
    got = integrate(np.log, 1.0, 2.0, rule, panels=2)
    assert got == pytest.approx(2.0 * math.log(2.0) - 1.0, rel=1e-14)


def test_interval_validation(rule: QuadratureRule) -> None:
    with pytest.raises(ValueError, match="interval"):
        rule.on_interval(2.0, 2.0)
    with pytest.raises(ValueError, match="panels"):
        integrate(np.log, 1.0, 2.0, rule, panels=0)


def test_h1_norm_constant_disk(rule: QuadratureRule) -> None:
    # Unit constant on the unit disk, radially symmetric mode.
    norm = h1_norm_mode(
        lambda r: np.ones_like(r),
        lambda r: np.zeros_like(r),
        0.0,
        1.0,
        n=0,
        angular_factor=2.0 * math.pi,
        rule=rule,
    )
    assert norm == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_h1_norm_linear_annulus(rule: QuadratureRule) -> None:
    # v(r) = r with n = 1 on 1 < r < 2: integrand (1 + r^2/r^2 + r^2) r.
    norm = h1_norm_mode(
        lambda r: r,
        lambda r: np.ones_like(r),
        1.0,
        2.0,
        n=1,
        angular_factor=math.pi,
        rule=rule,
    )
    assert norm == pytest.approx(math.sqrt(6.75 * math.pi), rel=1e-14)


def test_h1_norm_quadratic_mode_two(rule: QuadratureRule) -> None:
    # v(r) = r^2 with n = 2 on 0.5 < r < 1.5:
    # integrand (4r^2 + 4r^2 + r^4) r, integral 2r^4 + r^6/6.
    exact = (2.0 * 1.5**4 + 1.5**6 / 6.0) - (2.0 * 0.5**4 + 0.5**6 / 6.0)
    norm = h1_norm_mode(
        lambda r: r**2,
        lambda r: 2.0 * r,
        0.5,
        1.5,
        n=2,
        angular_factor=math.pi,
        rule=rule,
    )
    assert norm == pytest.approx(math.sqrt(math.pi * exact), rel=1e-14)
