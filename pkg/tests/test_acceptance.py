"""Acceptance gate: nine behavior-level checks at pinned tolerances.

Each test covers one shipping criterion and prints a single PASS line with
the measured figure; run with -s to see them all.  Tolerances here are
contractual, not tunable: loosening one is a product change.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np
import pytest

from thinlayer import (
    CircleGeometry,
    FourierMode,
    LayerSplit,
    MaterialParams,
    Scenario,
    default_scenario,
    dual_route_gap,
    expansion_study,
    mid_diffusion_split,
    oracle_study,
    solve_full_mode,
    solve_reduced_mode,
    solve_u0_mode,
    solve_u1_mode,
    solve_w_recurrence,
    theorem2_study,
    theorem4_study,
)
from thinlayer.analytic import (
    ForcingSpec,
    ForcingTerm,
    flux_jump_coefficient,
    trace_jump_coefficient,
)
from thinlayer.cli import main
from thinlayer.convergence import DEFAULT_DELTA_LADDER

REPO_CONFIG = str(Path(__file__).parent.parent / "configs" / "default.json")


def sample_admissible_triple(rng: np.random.Generator) -> MaterialParams:
    while True:
        lo, hi = sorted(rng.uniform(0.2, 5.0, size=2))
        if hi - lo < 0.05 * hi:
            continue
        gap = hi - lo
        mid = rng.uniform(lo + 0.05 * gap, hi - 0.05 * gap)
        if rng.uniform() < 0.5:
            return MaterialParams(lo, mid, hi)
        return MaterialParams(hi, mid, lo)


def test_criterion_1_split_identities() -> None:
    started = time.perf_counter()
    rng = np.random.default_rng(20240819)
    for _ in range(100):
        params = sample_admissible_triple(rng)
        split = mid_diffusion_split(params, band=1e-9)
        assert abs(split.p1 + split.p2 - 1.0) <= 1e-13
        assert abs(trace_jump_coefficient(params, split)) <= 1e-13
        assert abs(flux_jump_coefficient(params, split) - params.contrast) <= 1e-13
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    print(f"criterion 1 PASS: 100 mid-diffusion triples, identities to 1e-13 ({elapsed:.2f}s)")


def test_criterion_2_full_solver_residuals() -> None:
    started = time.perf_counter()
    scenario = default_scenario()
    worst = 0.0
    for n in (0, 2, 5):
        for delta in (0.1, 0.01):
            solution = solve_full_mode(
                FourierMode(n),
                delta,
                scenario.geometry,
                scenario.split,
                scenario.params,
                scenario.forcing,
            )
            worst = max(worst, solution.residual)
            assert solution.residual <= 1e-12
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    print(
        "criterion 2 PASS: all interface/boundary residuals <= 1e-12 "
        f"(worst {worst:.2e}, {elapsed:.2f}s)"
    )


def test_criterion_3_oracle_equivalence() -> None:
    started = time.perf_counter()
    scenario = default_scenario()
    orders = {}
    for kind in ("full", "two-region", "jump"):
        study = oracle_study(kind, scenario)
        assert len(study.spacings) == 4
        assert study.order == pytest.approx(2.0, abs=0.2)
        orders[kind] = study.order
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    figures = ", ".join(f"{k}={v:.3f}" for k, v in orders.items())
    print(f"criterion 3 PASS: oracle orders within 2.0+-0.2 ({figures}, {elapsed:.2f}s)")


def test_criterion_4_first_order_rate() -> None:
    started = time.perf_counter()
    report = theorem2_study(0, default_scenario())
    assert report.slope == pytest.approx(1.0, abs=0.15)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    print(f"criterion 4 PASS: order-0 composite slope {report.slope:.4f} ({elapsed:.2f}s)")


def test_criterion_5_second_order_rate() -> None:
    started = time.perf_counter()
    report = theorem2_study(1, default_scenario())
    assert report.slope == pytest.approx(2.0, abs=0.15)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    print(f"criterion 5 PASS: order-1 composite slope {report.slope:.4f} ({elapsed:.2f}s)")


def test_criterion_6_reduced_model_rate_and_route_agreement() -> None:
    started = time.perf_counter()
    scenario = default_scenario()
    report = theorem4_study(scenario)
    assert report.slope == pytest.approx(2.0, abs=0.15)
    worst = 0.0
    for delta in DEFAULT_DELTA_LADDER:
        gap = dual_route_gap(delta, scenario)
        worst = max(worst, gap)
        assert gap <= 1e-12
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    print(
        f"criterion 6 PASS: reduced-model slope {report.slope:.4f}, "
        f"route gap <= {worst:.2e} at every ladder point ({elapsed:.2f}s)"
    )


def test_criterion_7_degeneracy_collapse() -> None:
    started = time.perf_counter()
    geometry = CircleGeometry(1.0, 2.0)
    params = MaterialParams(2.0, 2.0, 2.0)
    split = LayerSplit.from_inner_fraction(0.5)
    forcing = ForcingSpec(
        (
            ForcingTerm(4.0, 0, FourierMode(0)),
            ForcingTerm(1.0, 1, FourierMode(2)),
        )
    )
    worst = 0.0
    for mode in (FourierMode(0), FourierMode(2)):
        u0 = solve_u0_mode(mode, geometry, params, forcing)
        u1 = solve_u1_mode(mode, geometry, params, split, u0)
        samples = np.linspace(0.05, 1.95, 39)
        assert float(np.max(np.abs(u1.evaluate(samples)))) <= 1e-12
        for delta in DEFAULT_DELTA_LADDER:
            full = solve_full_mode(mode, delta, geometry, split, params, forcing)
            r_in, r_out = geometry.layer_bounds(delta, split)
            bulk = np.concatenate(
                [np.linspace(0.02, r_in, 40), np.linspace(r_out, 2.0, 40)]
            )
            gap = float(np.max(np.abs(full.evaluate(bulk) - u0.evaluate(bulk))))
            worst = max(worst, gap)
            assert gap <= 1e-12
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    print(
        "criterion 7 PASS: equal conductivities give u1 = 0 and full = order-0 "
        f"(worst gap {worst:.2e}, {elapsed:.2f}s)"
    )


def test_criterion_8_w_recurrence_consistency() -> None:
    started = time.perf_counter()
    scenario = default_scenario()
    geometry, params, forcing = scenario.geometry, scenario.params, scenario.forcing
    samples = np.concatenate([np.linspace(0.05, 0.95, 19), np.linspace(1.05, 1.95, 19)])
    for mode in scenario.modes:
        u0 = solve_u0_mode(mode, geometry, params, forcing)
        u1 = solve_u1_mode(mode, geometry, params, scenario.split, u0)
        w0 = solve_w_recurrence(0, mode, geometry, params, forcing)
        w1 = solve_w_recurrence(1, mode, geometry, params, forcing, previous=w0)
        assert float(np.max(np.abs(w0.evaluate(samples) - u0.evaluate(samples)))) <= 1e-12
        assert float(np.max(np.abs(w1.evaluate(samples) - u1.evaluate(samples)))) <= 1e-12
    report = expansion_study(scenario)
    assert report.slope == pytest.approx(2.0, abs=0.15)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    print(
        "criterion 8 PASS: w0, w1 match the expansion terms to 1e-12; "
        f"two-term remainder slope {report.slope:.4f} ({elapsed:.2f}s)"
    )


def test_criterion_9_deterministic_outputs(tmp_path: Path) -> None:
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["converge", "--config", REPO_CONFIG, "--out", str(first)]) == 0
    assert main(["converge", "--config", REPO_CONFIG, "--out", str(second)]) == 0
    names = ("theorem2_order0.csv", "theorem2_order1.csv", "theorem4.csv")
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()
    print(f"criterion 9 PASS: consecutive converge runs byte-identical ({', '.join(names)})")