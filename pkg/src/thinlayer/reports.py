"""Persisted outputs: delimited tables, JSON summaries, and figures.

Tables are written byte-deterministically: fixed column order, floats at 17
significant digits, newline endings, no timestamps.  Figures are rendered
with the Agg backend and carry no reproducibility contract.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analytic import RadialPiece
from .convergence import ErrorRecord, OracleStudy
from .geometry import FourierMode

FLOAT_FORMAT = "%.17g"

CONVERGE_HEADER = (
    "delta",
    "mode",
    "err_i_h1",
    "err_layer_h1_weighted",
    "err_e_h1",
    "composite",
)


def format_float(value: float) -> str:
    return FLOAT_FORMAT % value


def mode_label(mode: FourierMode) -> str:
    return str(mode.n) if mode.parity == "cos" else f"{mode.n}s"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, payload: Any) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def error_rows(records: Sequence[ErrorRecord]) -> list[tuple[str, ...]]:
    """Per-(thickness, mode) rows under each record's own layer grouping."""
    rows = []
    for record in records:
        for entry in record.per_mode:
            rows.append(
                (
                    format_float(entry.delta),
                    mode_label(entry.mode),
                    format_float(entry.inner),
                    format_float(entry.weighted_layer(record.grouping)),
                    format_float(entry.outer),
                    format_float(entry.composite(record.grouping)),
                )
            )
    return rows


def piece_payload(piece: RadialPiece) -> dict[str, Any]:
    return {
        "n": piece.n,
        "a": piece.a,
        "a_scale": piece.a_scale,
        "b": piece.b,
        "b_scale": piece.b_scale,
        "particular": [[c, p] for c, p in piece.particular],
    }


def convergence_figure(
    path: Path, curves: dict[str, tuple[Sequence[ErrorRecord], float | None]]
) -> None:
    """Log-log composite error vs thickness, one line per study."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    drew = False
    for name, (records, slope) in curves.items():
        deltas = [r.delta for r in records]
        composites = [r.composite for r in records]
        if not all(c > 0 for c in composites):
            continue
        label = name if slope is None else f"{name} (slope {slope:.3f})"
        ax.loglog(deltas, composites, "o-", label=label)
        drew = True
    ax.set_xlabel("layer thickness")
    ax.set_ylabel("composite H1 error")
    ax.grid(True, which="both", alpha=0.3)
    if drew:
        ax.invert_xaxis()
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def profiles_figure(
    path: Path,
    per_mode: dict[str, dict[str, tuple[np.ndarray, np.ndarray]]],
) -> None:
    """Radial traces, one panel per mode; curves keyed by solver name."""
    count = max(len(per_mode), 1)
    fig, axes = plt.subplots(1, count, figsize=(4.8 * count, 3.8), squeeze=False)
    for ax, (label, curves) in zip(axes[0], per_mode.items()):
        for name, (radii, values) in curves.items():
            ax.plot(radii, values, label=name, linewidth=1.2)
        ax.set_title(f"mode {label}")
        ax.set_xlabel("r")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def oracle_figure(path: Path, studies: Sequence[OracleStudy]) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for study in studies:
        ax.loglog(
            study.spacings,
            study.errors,
            "o-",
            label=f"{study.kind} (order {study.order:.3f})",
        )
    ax.set_xlabel("grid spacing")
    ax.set_ylabel("max error vs analytic")
    ax.grid(True, which="both", alpha=0.3)
    ax.invert_xaxis()
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def sweep_figure(path: Path, gaps: dict[str, list[tuple[float, float]]]) -> None:
    """Interface-trace gap between resolved and reduced solves, per mode."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    drew = False
    for label, points in gaps.items():
        deltas = [p[0] for p in points]
        values = [p[1] for p in points]
        if not all(v > 0 for v in values):
            continue
        ax.loglog(deltas, values, "o-", label=f"mode {label}")
        drew = True
    ax.set_xlabel("layer thickness")
    ax.set_ylabel("|trace(full) - trace(reduced)|")
    ax.grid(True, which="both", alpha=0.3)
    if drew:
        ax.invert_xaxis()
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)