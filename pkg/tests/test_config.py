"""Configuration ingestion: schema, field-path diagnostics, overrides."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from thinlayer.config import ConfigError, ExperimentConfig


def base_mapping() -> dict:
    return {
        "geometry": {"interface_radius": 1.0, "outer_radius": 2.0},
        "materials": {"alpha_inner": 1.0, "alpha_layer": 2.0, "alpha_outer": 4.0},
        "split": {"mode": "mid-diffusion"},
        "forcing": [
            {"coefficient": 4.0, "radial_power": 0, "mode": 0},
            {"coefficient": 1.0, "radial_power": 1, "mode": 2},
        ],
        "modes": [0, 2],
        "delta_ladder": [0.1, 0.05, 0.025, 0.0125, 0.00625],
    }


def test_repo_default_config_loads() -> None:
    config = ExperimentConfig.from_file(Path(__file__).parent.parent / "configs" / "default.json")
    assert config.geometry.interface_radius == 1.0
    assert config.params.alpha_layer == 2.0
    assert config.split.p1 == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert [m.n for m in config.modes] == [0, 2]
    assert config.delta_ladder == (0.1, 0.05, 0.025, 0.0125, 0.00625)
    assert config.quadrature_points == 32
    scenario = config.scenario()
    assert len(scenario.modes) == 2
    assert len(config.forcing.terms) == 2


def test_missing_field_names_its_path() -> None:
    data = base_mapping()
    del data["materials"]["alpha_outer"]
    with pytest.raises(ConfigError, match="materials.alpha_outer"):
        ExperimentConfig.from_mapping(data)
    data = base_mapping()
    del data["modes"]
    with pytest.raises(ConfigError, match="modes"):
        ExperimentConfig.from_mapping(data)


def test_unknown_field_rejected() -> None:
    data = base_mapping()
    data["geometry"]["radius"] = 3.0
    with pytest.raises(ConfigError, match="geometry.radius: unknown"):
        ExperimentConfig.from_mapping(data)
    data = base_mapping()
    data["seed"] = 7
    with pytest.raises(ConfigError, match="seed: unknown"):
        ExperimentConfig.from_mapping(data)


def test_booleans_are_not_numbers() -> None:
    data = base_mapping()
    data["materials"]["alpha_inner"] = True
    with pytest.raises(ConfigError, match="materials.alpha_inner"):
        ExperimentConfig.from_mapping(data)


def test_mid_diffusion_requires_strictly_between_layer() -> None:
    data = base_mapping()
    data["materials"]["alpha_layer"] = 9.0
    with pytest.raises(ConfigError, match="materials"):
        ExperimentConfig.from_mapping(data)


def test_explicit_split() -> None:
    data = base_mapping()
    data["split"] = {"mode": "explicit", "inner_fraction": 0.25}
    config = ExperimentConfig.from_mapping(data)
    assert config.split.p1 == 0.25
    assert config.split.p2 == 0.75
    assert config.split_mode == "explicit"

    data["split"] = {"mode": "mid-diffusion", "inner_fraction": 0.25}
    with pytest.raises(ConfigError, match="split.inner_fraction"):
        ExperimentConfig.from_mapping(data)
    data["split"] = {"mode": "balanced"}
    with pytest.raises(ConfigError, match="split.mode"):
        ExperimentConfig.from_mapping(data)


def test_forcing_must_stay_within_mode_set() -> None:
    data = base_mapping()
    data["forcing"].append({"coefficient": 1.0, "radial_power": 0, "mode": 5})
    with pytest.raises(ConfigError, match=r"forcing\[2\].mode"):
        ExperimentConfig.from_mapping(data)


def test_resonant_forcing_term_rejected_at_parse_time() -> None:
    data = base_mapping()
    # radial_power 0 under mode 2 collides with the homogeneous r^2 branch
    data["forcing"][1] = {"coefficient": 1.0, "radial_power": 0, "mode": 2}
    with pytest.raises(ConfigError, match=r"forcing\[1\]"):
        ExperimentConfig.from_mapping(data)


def test_delta_ladder_validation() -> None:
    data = base_mapping()
    data["delta_ladder"] = [4.0]
    with pytest.raises(ConfigError, match=r"delta_ladder\[0\]"):
        ExperimentConfig.from_mapping(data)
    data["delta_ladder"] = [0.05, 0.1]
    with pytest.raises(ConfigError, match="strictly decrease"):
        ExperimentConfig.from_mapping(data)
    data["delta_ladder"] = []
    with pytest.raises(ConfigError, match="delta_ladder"):
        ExperimentConfig.from_mapping(data)


def test_numeric_knob_validation() -> None:
    data = base_mapping()
    data["quadrature_points"] = 4
    with pytest.raises(ConfigError, match="quadrature_points"):
        ExperimentConfig.from_mapping(data)
    data = base_mapping()
    data["slope_tolerance"] = 0.0
    with pytest.raises(ConfigError, match="slope_tolerance"):
        ExperimentConfig.from_mapping(data)
    data = base_mapping()
    data["oracle"] = {"levels": 2}
    with pytest.raises(ConfigError, match="oracle.levels"):
        ExperimentConfig.from_mapping(data)


def test_file_level_errors(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="cannot read"):
        ExperimentConfig.from_file(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        ExperimentConfig.from_file(bad)


def test_overrides_revalidate(tmp_path: Path) -> None:
    config = ExperimentConfig.from_mapping(base_mapping())
    narrowed = config.with_overrides(delta_ladder=[0.05, 0.025])
    assert narrowed.delta_ladder == (0.05, 0.025)
    widened = config.with_overrides(modes=[0, 2, 5])
    assert [m.n for m in widened.modes] == [0, 2, 5]
    with pytest.raises(ConfigError, match="--modes"):
        config.with_overrides(modes=[0])  # would drop the n=2 forcing term
    with pytest.raises(ConfigError, match="--delta-ladder"):
        config.with_overrides(delta_ladder=[0.025, 0.05])
    with pytest.raises(ConfigError, match="--delta-ladder"):
        config.with_overrides(delta_ladder=[4.0])