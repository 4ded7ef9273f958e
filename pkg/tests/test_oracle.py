"""Finite-difference oracle against manufactured piecewise solutions.

Every reference here is hand-derived: pick piecewise radial functions,
compute the forcing and interface jumps they satisfy, then check that the
discretization reproduces them at second order (or exactly, where the
truncation error vanishes).  The closed-form solvers are deliberately not
involved.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from thinlayer.oracle import (
    OracleInterface,
    OracleProblem,
    OracleRegion,
    fd_oracle_solve,
    four_region_problem,
    two_region_problem,
)


def ladder_errors(problem: OracleProblem, references, h0: float, levels: int = 4):
    out = []
    for level in range(levels):
        h = h0 / 2**level
        solution = fd_oracle_solve(problem, h)
        out.append((h, solution.max_error(references)))
    return out


def fitted_order(pairs) -> float:
    hs = np.log([h for h, _ in pairs])
    es = np.log([e for _, e in pairs])
    return float(np.polyfit(hs, es, 1)[0])


def test_quadratic_disk_is_reproduced_exactly() -> None:
    # u = 1 - r^2 on the unit disk with alpha = 3 satisfies f = 12; the
    # conservative stencil has zero truncation error on quadratics.
    problem = OracleProblem(
        n=0,
        regions=(OracleRegion(0.0, 1.0, 3.0, ((12.0, 0),)),),
        interfaces=(),
    )
    solution = fd_oracle_solve(problem, 1.0 / 64.0)
    assert solution.max_error([lambda r: 1.0 - r**2]) < 1e-12


def test_two_region_jumps_mode_two_second_order() -> None:
    # Inner u = r^4 (alpha = 2, forcing -24 r^2), outer harmonic
    # u = r^2/2 - 8/r^2 (alpha = 5), with the jumps both functions induce.
    problem = two_region_problem(
        interface_radius=1.0,
        outer_radius=2.0,
        n=2,
        alpha_in=2.0,
        alpha_out=5.0,
        forcing_in=((-24.0, 2),),
        trace_jump=8.5,
        flux_jump=2.0 * 4.0 - 5.0 * 17.0,
    )
    references = [lambda r: r**4, lambda r: 0.5 * r**2 - 8.0 / r**2]
    pairs = ladder_errors(problem, references, h0=1.0 / 64.0)
    assert 1.8 < fitted_order(pairs) < 2.2
    assert pairs[-1][1] < pairs[0][1] / 16.0


def test_two_region_logarithmic_mode_zero_second_order() -> None:
    # Inner u = 2 - r^2 (alpha = 1, f = 4), outer u = 5 - 5 ln r (alpha = 3,
    # harmonic), Dirichlet radius e so the outer trace vanishes.
    problem = two_region_problem(
        interface_radius=1.0,
        outer_radius=math.e,
        n=0,
        alpha_in=1.0,
        alpha_out=3.0,
        forcing_in=((4.0, 0),),
        trace_jump=-4.0,
        flux_jump=1.0 * (-2.0) - 3.0 * (-5.0),
    )
    references = [lambda r: 2.0 - r**2, lambda r: 5.0 - 5.0 * np.log(r)]
    pairs = ladder_errors(problem, references, h0=1.0 / 48.0)
    assert 1.8 < fitted_order(pairs) < 2.2


def test_unit_weights_impose_derivative_continuity() -> None:
    # Conductivities differ (2 inside, 5 outside) but the interface carries
    # unit weights, so value and plain derivative are both continuous:
    # inner u = r^4, outer u = (64/27) r^2 - (64/81)/r^2 - (47/81) r^4.
    problem = two_region_problem(
        interface_radius=1.0,
        outer_radius=2.0,
        n=2,
        alpha_in=2.0,
        alpha_out=5.0,
        forcing_in=((-24.0, 2),),
        forcing_out=((940.0 / 27.0, 2),),
        weight_in=1.0,
        weight_out=1.0,
    )
    references = [
        lambda r: r**4,
        lambda r: (64.0 / 27.0) * r**2 - (64.0 / 81.0) / r**2 - (47.0 / 81.0) * r**4,
    ]
    pairs = ladder_errors(problem, references, h0=1.0 / 64.0)
    assert 1.8 < fitted_order(pairs) < 2.2


def test_four_region_chain_second_order() -> None:
    # Piecewise function with classical transmission at every junction,
    # n = 0: start from u = c_k + b_k ln r - r^2 / (4 alpha_k) with f = 1
    # everywhere and coefficients chained by hand below.
    alphas = (1.0, 2.0, 2.0, 4.0)
    radii = (0.5, 1.0, 1.5, 3.0)
    b = [0.0]
    # alpha_k b_k = alpha_{k+1} b_{k+1} + (flux of particular parts): the
    # particular flux r u' = -r^2/(4 alpha) * ... contributes alpha * (-r/(2 alpha)) = -r/2,
    # equal on both sides, so alpha b is continuous: b_{k+1} = alpha_k b_k / alpha_{k+1}.
    for k in range(3):
        b.append(alphas[k] * b[k] / alphas[k + 1])
    # With b identically 0 the chain is value-matching of the quadratics.
    c = [0.0, 0.0, 0.0, 0.0]
    c[3] = radii[3] ** 2 / (4.0 * alphas[3])
    for k in (2, 1, 0):
        r = radii[k]
        c[k] = c[k + 1] - r**2 / (4.0 * alphas[k + 1]) + r**2 / (4.0 * alphas[k])

    def make_ref(k: int):
        return lambda r: c[k] - r**2 / (4.0 * alphas[k])

    problem = four_region_problem(
        layer_inner_radius=radii[0],
        interface_radius=radii[1],
        layer_outer_radius=radii[2],
        outer_radius=radii[3],
        n=0,
        alpha_inner=alphas[0],
        alpha_layer=alphas[1],
        alpha_outer=alphas[3],
        forcing=((1.0, 0),),
    )
    solution = fd_oracle_solve(problem, 1.0 / 32.0)
    # Quadratics again: exact up to round-off, which also validates the
    # interface rows (the one-sided stencils are exact on quadratics).
    assert solution.max_error([make_ref(k) for k in range(4)]) < 1e-11


def test_grid_too_coarse_is_rejected() -> None:
    problem = two_region_problem(1.0, 2.0, 0, 1.0, 1.0)
    with pytest.raises(ValueError, match="fewer than"):
        fd_oracle_solve(problem, 0.5)


def test_problem_validation() -> None:
    with pytest.raises(ValueError, match="origin"):
        OracleProblem(0, (OracleRegion(0.5, 1.0, 1.0),), ())
    with pytest.raises(ValueError, match="contiguous"):
        OracleProblem(
            0,
            (OracleRegion(0.0, 1.0, 1.0), OracleRegion(1.5, 2.0, 1.0)),
            (OracleInterface(),),
        )
    with pytest.raises(ValueError, match="interfaces"):
        OracleProblem(
            0,
            (OracleRegion(0.0, 1.0, 1.0), OracleRegion(1.0, 2.0, 1.0)),
            (),
        )
