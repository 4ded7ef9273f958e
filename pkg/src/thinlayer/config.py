"""Experiment configuration: one JSON document, validated before any solve.

Every check a solver module would perform at construction time runs here
first, so a bad config fails with a field path ("materials.alpha_layer: ...")
instead of a traceback from deep inside a linear solve.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .analytic import ForcingSpec, ForcingTerm
from .convergence import Scenario
from .geometry import CircleGeometry, FourierMode, LayerSplit, mid_diffusion_split
from .materials import MaterialParams
from .quadrature import QuadratureRule

SPLIT_MODES = ("mid-diffusion", "explicit")
DEFAULT_SLOPE_TOLERANCE = 0.15


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending field path."""


def _as_mapping(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise ConfigError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _as_list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise ConfigError(f"{path}: expected a list, got {type(value).__name__}")
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _reject_unknown(data: Mapping[str, Any], allowed: Sequence[str], path: str) -> None:
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{path}{key}: unknown field")


def _pop(data: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in data:
        raise ConfigError(f"{path}{key}: missing required field")
    return data[key]


def _parse_mode(value: Any, path: str) -> FourierMode:
    if isinstance(value, int) and not isinstance(value, bool):
        n, parity = value, "cos"
    else:
        entry = _as_mapping(value, path)
        _reject_unknown(entry, ("n", "parity"), f"{path}.")
        n = _as_int(_pop(entry, "n", f"{path}."), f"{path}.n")
        parity = entry.get("parity", "cos")
    try:
        return FourierMode(n, parity)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated inputs for the CLI commands and the study harness."""

    geometry: CircleGeometry
    params: MaterialParams
    split: LayerSplit
    split_mode: str
    forcing: ForcingSpec
    modes: tuple[FourierMode, ...]
    delta_ladder: tuple[float, ...]
    quadrature_points: int = 32
    panels: int = 4
    oracle_levels: int = 4
    oracle_delta: float = 0.1
    oracle_base_spacing: float | None = None
    slope_tolerance: float = DEFAULT_SLOPE_TOLERANCE

    @classmethod
    def from_file(cls, path: str | Path) -> ExperimentConfig:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON in {path}: {exc}") from exc
        return cls.from_mapping(data)

    @classmethod
    def from_mapping(cls, data: Any) -> ExperimentConfig:
        data = _as_mapping(data, "config")
        _reject_unknown(
            data,
            (
                "geometry",
                "materials",
                "split",
                "forcing",
                "modes",
                "delta_ladder",
                "quadrature_points",
                "panels",
                "oracle",
                "slope_tolerance",
            ),
            "",
        )

        raw = _as_mapping(_pop(data, "geometry", ""), "geometry")
        _reject_unknown(raw, ("interface_radius", "outer_radius"), "geometry.")
        try:
            geometry = CircleGeometry(
                _as_number(_pop(raw, "interface_radius", "geometry."), "geometry.interface_radius"),
                _as_number(_pop(raw, "outer_radius", "geometry."), "geometry.outer_radius"),
            )
        except ValueError as exc:
            raise ConfigError(f"geometry: {exc}") from exc

        raw = _as_mapping(_pop(data, "materials", ""), "materials")
        _reject_unknown(raw, ("alpha_inner", "alpha_layer", "alpha_outer"), "materials.")
        try:
            params = MaterialParams(
                _as_number(_pop(raw, "alpha_inner", "materials."), "materials.alpha_inner"),
                _as_number(_pop(raw, "alpha_layer", "materials."), "materials.alpha_layer"),
                _as_number(_pop(raw, "alpha_outer", "materials."), "materials.alpha_outer"),
            )
        except ValueError as exc:
            raise ConfigError(f"materials: {exc}") from exc

        raw = _as_mapping(data.get("split", {"mode": "mid-diffusion"}), "split")
        _reject_unknown(raw, ("mode", "inner_fraction"), "split.")
        split_mode = raw.get("mode", "mid-diffusion")
        if split_mode not in SPLIT_MODES:
            raise ConfigError(f"split.mode: expected one of {SPLIT_MODES}, got {split_mode!r}")
        if split_mode == "mid-diffusion":
            if "inner_fraction" in raw:
                raise ConfigError(
                    "split.inner_fraction: only allowed with split.mode = \"explicit\""
                )
            try:
                split = mid_diffusion_split(params)
            except ValueError as exc:
                raise ConfigError(f"materials: {exc}") from exc
        else:
            fraction = _as_number(
                _pop(raw, "inner_fraction", "split."), "split.inner_fraction"
            )
            try:
                split = LayerSplit.from_inner_fraction(fraction)
            except ValueError as exc:
                raise ConfigError(f"split.inner_fraction: {exc}") from exc

        modes = tuple(
            _parse_mode(entry, f"modes[{i}]")
            for i, entry in enumerate(_as_list(_pop(data, "modes", ""), "modes"))
        )
        if not modes:
            raise ConfigError("modes: need at least one Fourier mode")
        mode_keys = {(mode.n, mode.parity) for mode in modes}
        if len(mode_keys) != len(modes):
            raise ConfigError("modes: duplicate entries")

        terms = []
        for i, entry in enumerate(_as_list(_pop(data, "forcing", ""), "forcing")):
            entry = _as_mapping(entry, f"forcing[{i}]")
            _reject_unknown(
                entry, ("coefficient", "radial_power", "mode", "parity"), f"forcing[{i}]."
            )
            coefficient = _as_number(
                _pop(entry, "coefficient", f"forcing[{i}]."), f"forcing[{i}].coefficient"
            )
            power = _as_int(
                _pop(entry, "radial_power", f"forcing[{i}]."), f"forcing[{i}].radial_power"
            )
            mode_value: Any = _pop(entry, "mode", f"forcing[{i}].")
            if "parity" in entry:
                mode_value = {"n": mode_value, "parity": entry["parity"]}
            mode = _parse_mode(mode_value, f"forcing[{i}].mode")
            if (mode.n, mode.parity) not in mode_keys:
                raise ConfigError(
                    f"forcing[{i}].mode: n={mode.n} ({mode.parity}) is not in modes; "
                    "its energy would be silently dropped"
                )
            try:
                terms.append(ForcingTerm(coefficient, power, mode))
            except ValueError as exc:
                raise ConfigError(f"forcing[{i}]: {exc}") from exc
        forcing = ForcingSpec(tuple(terms))

        ladder = tuple(
            _as_number(entry, f"delta_ladder[{i}]")
            for i, entry in enumerate(_as_list(_pop(data, "delta_ladder", ""), "delta_ladder"))
        )
        if not ladder:
            raise ConfigError("delta_ladder: need at least one thickness")
        for i, delta in enumerate(ladder):
            try:
                geometry.layer_bounds(delta, split)
            except ValueError as exc:
                raise ConfigError(f"delta_ladder[{i}]: {exc}") from exc
        if any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise ConfigError("delta_ladder: thicknesses must strictly decrease")

        points = _as_int(data.get("quadrature_points", 32), "quadrature_points")
        try:
            QuadratureRule.gauss_legendre(points)
        except ValueError as exc:
            raise ConfigError(f"quadrature_points: {exc}") from exc
        panels = _as_int(data.get("panels", 4), "panels")
        if panels < 1:
            raise ConfigError("panels: need a positive panel count")

        raw = _as_mapping(data.get("oracle", {}), "oracle")
        _reject_unknown(raw, ("levels", "delta", "base_spacing"), "oracle.")
        levels = _as_int(raw.get("levels", 4), "oracle.levels")
        if levels < 3:
            raise ConfigError("oracle.levels: need at least 3 grids to fit an order")
        oracle_delta = _as_number(raw.get("delta", 0.1), "oracle.delta")
        try:
            geometry.layer_bounds(oracle_delta, split)
        except ValueError as exc:
            raise ConfigError(f"oracle.delta: {exc}") from exc
        base_spacing = raw.get("base_spacing")
        if base_spacing is not None:
            base_spacing = _as_number(base_spacing, "oracle.base_spacing")
            if base_spacing <= 0.0:
                raise ConfigError("oracle.base_spacing: must be positive")

        tolerance = _as_number(
            data.get("slope_tolerance", DEFAULT_SLOPE_TOLERANCE), "slope_tolerance"
        )
        if not 0.0 < tolerance < 1.0:
            raise ConfigError("slope_tolerance: expected a value in (0, 1)")

        return cls(
            geometry=geometry,
            params=params,
            split=split,
            split_mode=split_mode,
            forcing=forcing,
            modes=modes,
            delta_ladder=ladder,
            quadrature_points=points,
            panels=panels,
            oracle_levels=levels,
            oracle_delta=oracle_delta,
            oracle_base_spacing=base_spacing,
            slope_tolerance=tolerance,
        )

    def scenario(self) -> Scenario:
        return Scenario(
            self.geometry,
            self.params,
            self.split,
            self.forcing,
            self.modes,
            QuadratureRule.gauss_legendre(self.quadrature_points),
            self.panels,
        )

    def with_overrides(
        self,
        modes: Sequence[int] | None = None,
        delta_ladder: Sequence[float] | None = None,
    ) -> ExperimentConfig:
        """Apply CLI overrides, re-running the cross-field checks they affect."""
        updated = self
        if modes is not None:
            parsed = tuple(_parse_mode(n, f"--modes[{i}]") for i, n in enumerate(modes))
            if not parsed:
                raise ConfigError("--modes: need at least one Fourier mode")
            if len({(m.n, m.parity) for m in parsed}) != len(parsed):
                raise ConfigError("--modes: duplicate entries")
            keys = {(m.n, m.parity) for m in parsed}
            for term in self.forcing.terms:
                if (term.mode.n, term.mode.parity) not in keys:
                    raise ConfigError(
                        f"--modes: forcing drives n={term.mode.n} which the "
                        "override would drop"
                    )
            updated = dataclasses.replace(updated, modes=parsed)
        if delta_ladder is not None:
            ladder = tuple(float(d) for d in delta_ladder)
            if not ladder:
                raise ConfigError("--delta-ladder: need at least one thickness")
            for i, delta in enumerate(ladder):
                try:
                    self.geometry.layer_bounds(delta, self.split)
                except ValueError as exc:
                    raise ConfigError(f"--delta-ladder[{i}]: {exc}") from exc
            if any(b >= a for a, b in zip(ladder, ladder[1:])):
                raise ConfigError("--delta-ladder: thicknesses must strictly decrease")
            updated = dataclasses.replace(updated, delta_ladder=ladder)
        return updated