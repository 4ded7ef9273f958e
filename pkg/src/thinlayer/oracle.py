"""Finite-difference oracle for radial interface problems.

An independent second-order discretization of the per-mode radial equation

    -alpha * ( (1/r) (r u')' - (n^2/r^2) u ) = f(r)

on a chain of annular regions, each with its own conductivity and
polynomial forcing, joined by interface conditions

    u_in(r_I) - u_out(r_I) = trace_jump,
    w_in u_in'(r_I) - w_out u_out'(r_I) = flux_jump.

The weights are the conductivities for classical transmission, or 1 on both
sides to impose plain derivative continuity.  Interior nodes use the
conservative control-volume stencil; interface derivatives use one-sided
three-point stencils so the whole scheme stays second order.  Nothing here
shares code with the closed-form solvers, which is the point: agreement
between the two is evidence, not tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

MIN_CELLS_PER_REGION = 8

RadialTerms = tuple[tuple[float, int], ...]


def eval_terms(terms: RadialTerms, r: np.ndarray) -> np.ndarray:
    out = np.zeros_like(np.asarray(r, dtype=float))
    for coefficient, power in terms:
        out = out + coefficient * np.asarray(r, dtype=float) ** power
    return out


@dataclass(frozen=True)
class OracleRegion:
    """One annular region: radii, conductivity, polynomial forcing terms."""

    r_lo: float
    r_hi: float
    alpha: float
    forcing: RadialTerms = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.r_lo < self.r_hi:
            raise ValueError(f"region radii must satisfy 0 <= r_lo < r_hi, got ({self.r_lo}, {self.r_hi})")
        if self.alpha <= 0.0:
            raise ValueError(f"alpha: conductivity must be positive, got {self.alpha}")
        for coefficient, power in self.forcing:
            if not isinstance(power, int) or power < 0:
                raise ValueError(f"forcing power must be a nonnegative integer, got {power!r}")
            if not math.isfinite(coefficient):
                raise ValueError(f"forcing coefficient must be finite, got {coefficient!r}")

    @property
    def width(self) -> float:
        return self.r_hi - self.r_lo


@dataclass(frozen=True)
class OracleInterface:
    """Jump data at the junction of two consecutive regions."""

    trace_jump: float = 0.0
    flux_jump: float = 0.0
    weight_in: float = 1.0
    weight_out: float = 1.0

    def __post_init__(self) -> None:
        for name in ("trace_jump", "flux_jump", "weight_in", "weight_out"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name}: must be finite")
        if self.weight_in <= 0.0 or self.weight_out <= 0.0:
            raise ValueError("interface weights must be positive")


@dataclass(frozen=True)
class OracleProblem:
    """Mode number plus a contiguous chain of regions and their interfaces.

    The chain must start at the origin and ends with a homogeneous
    Dirichlet condition at the outermost radius.
    """

    n: int
    regions: tuple[OracleRegion, ...]
    interfaces: tuple[OracleInterface, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"n: expected a nonnegative integer, got {self.n!r}")
        if not self.regions:
            raise ValueError("regions: at least one region required")
        if self.regions[0].r_lo != 0.0:
            raise ValueError("regions: the chain must start at the origin")
        if len(self.interfaces) != len(self.regions) - 1:
            raise ValueError(
                f"interfaces: expected {len(self.regions) - 1} for "
                f"{len(self.regions)} regions, got {len(self.interfaces)}"
            )
        for left, right in zip(self.regions[:-1], self.regions[1:]):
            if left.r_hi != right.r_lo:
                raise ValueError(
                    f"regions: not contiguous at {left.r_hi} != {right.r_lo}"
                )


@dataclass(frozen=True, eq=False)
class OracleSolution:
    """Per-region node radii and solution values."""

    problem: OracleProblem
    grids: tuple[np.ndarray, ...]
    values: tuple[np.ndarray, ...]

    def max_error(self, references: Sequence[Callable[[np.ndarray], np.ndarray]]) -> float:
        """Max-norm error against per-region reference callables."""
        if len(references) != len(self.grids):
            raise ValueError("references: need one callable per region")
        worst = 0.0
        for r, u, ref in zip(self.grids, self.values, references):
            worst = max(worst, float(np.max(np.abs(u - np.asarray(ref(r), dtype=float)))))
        return worst

    def reference_scale(self, references: Sequence[Callable[[np.ndarray], np.ndarray]]) -> float:
        scale = 0.0
        for r, ref in zip(self.grids, references):
            scale = max(scale, float(np.max(np.abs(np.asarray(ref(r), dtype=float)))))
        return scale


def fd_oracle_solve(problem: OracleProblem, h: float) -> OracleSolution:
    """Solve the interface problem on a grid of target spacing ``h``.

    ``h`` must resolve every region with at least ``MIN_CELLS_PER_REGION``
    cells; each region is then meshed uniformly with its own spacing no
    coarser than ``h``.
    """
    if not (math.isfinite(h) and h > 0.0):
        raise ValueError(f"h: grid spacing must be positive, got {h!r}")
    cells = []
    for k, region in enumerate(problem.regions):
        if region.width / h < MIN_CELLS_PER_REGION - 1e-9:
            raise ValueError(
                f"h: spacing {h} leaves region {k} (width {region.width:.6g}) with "
                f"fewer than {MIN_CELLS_PER_REGION} cells"
            )
        cells.append(int(math.ceil(region.width / h - 1e-12)))

    grids = []
    offsets = []
    total = 0
    for region, nk in zip(problem.regions, cells):
        offsets.append(total)
        grids.append(np.linspace(region.r_lo, region.r_hi, nk + 1))
        total += nk + 1

    matrix = scipy.sparse.lil_matrix((total, total))
    rhs = np.zeros(total)
    n, nsq = problem.n, float(problem.n**2)

    for k, (region, nk) in enumerate(zip(problem.regions, cells)):
        base = offsets[k]
        grid = grids[k]
        hk = region.width / nk
        alpha = region.alpha

        for j in range(1, nk):
            row = base + j
            rj = grid[j]
            rp, rm = rj + 0.5 * hk, rj - 0.5 * hk
            scale = alpha / (hk * hk * rj)
            matrix[row, row - 1] = -scale * rm
            matrix[row, row] = scale * (rp + rm) + alpha * nsq / (rj * rj)
            matrix[row, row + 1] = -scale * rp
            rhs[row] = float(eval_terms(region.forcing, np.array(rj)))

        if k == 0:
            # Origin closure: control volume over (0, h/2) for the radially
            # symmetric mode, plain Dirichlet otherwise (u ~ r^n there).
            if n == 0:
                matrix[base, base] = 0.5 * alpha
                matrix[base, base + 1] = -0.5 * alpha
                rhs[base] = sum(
                    c * (0.5 * hk) ** (m + 2) / (m + 2) for c, m in region.forcing
                )
            else:
                matrix[base, base] = 1.0
                rhs[base] = 0.0

        if k == len(problem.regions) - 1:
            last = base + nk
            matrix[last, last] = 1.0
            rhs[last] = 0.0

    for k, iface in enumerate(problem.interfaces):
        left_base, right_base = offsets[k], offsets[k + 1]
        left_last = left_base + cells[k]
        h_left = problem.regions[k].width / cells[k]
        h_right = problem.regions[k + 1].width / cells[k + 1]

        row = left_last
        matrix.rows[row] = []
        matrix.data[row] = []
        matrix[row, left_last] = 1.0
        matrix[row, right_base] = -1.0
        rhs[row] = iface.trace_jump

        # One-sided three-point derivatives keep the flux row second order.
        row = right_base
        matrix.rows[row] = []
        matrix.data[row] = []
        cl = iface.weight_in / (2.0 * h_left)
        matrix[row, left_last] = 3.0 * cl
        matrix[row, left_last - 1] = -4.0 * cl
        matrix[row, left_last - 2] = cl
        cr = iface.weight_out / (2.0 * h_right)
        matrix[row, right_base] += 3.0 * cr
        matrix[row, right_base + 1] = -4.0 * cr
        matrix[row, right_base + 2] = cr
        rhs[row] = iface.flux_jump

    solution = scipy.sparse.linalg.spsolve(matrix.tocsr(), rhs)
    values = tuple(
        solution[offsets[k] : offsets[k] + cells[k] + 1] for k in range(len(cells))
    )
    return OracleSolution(problem, tuple(grids), values)


def two_region_problem(
    interface_radius: float,
    outer_radius: float,
    n: int,
    alpha_in: float,
    alpha_out: float,
    forcing_in: RadialTerms = (),
    forcing_out: RadialTerms = (),
    trace_jump: float = 0.0,
    flux_jump: float = 0.0,
    weight_in: float | None = None,
    weight_out: float | None = None,
) -> OracleProblem:
    """Disk plus annulus with a single interface; weights default to the alphas."""
    return OracleProblem(
        n=n,
        regions=(
            OracleRegion(0.0, interface_radius, alpha_in, forcing_in),
            OracleRegion(interface_radius, outer_radius, alpha_out, forcing_out),
        ),
        interfaces=(
            OracleInterface(
                trace_jump=trace_jump,
                flux_jump=flux_jump,
                weight_in=alpha_in if weight_in is None else weight_in,
                weight_out=alpha_out if weight_out is None else weight_out,
            ),
        ),
    )


def four_region_problem(
    layer_inner_radius: float,
    interface_radius: float,
    layer_outer_radius: float,
    outer_radius: float,
    n: int,
    alpha_inner: float,
    alpha_layer: float,
    alpha_outer: float,
    forcing: RadialTerms = (),
) -> OracleProblem:
    """Disk, two layer halves, outer annulus; classical transmission throughout."""
    return OracleProblem(
        n=n,
        regions=(
            OracleRegion(0.0, layer_inner_radius, alpha_inner, forcing),
            OracleRegion(layer_inner_radius, interface_radius, alpha_layer, forcing),
            OracleRegion(interface_radius, layer_outer_radius, alpha_layer, forcing),
            OracleRegion(layer_outer_radius, outer_radius, alpha_outer, forcing),
        ),
        interfaces=(
            OracleInterface(weight_in=alpha_inner, weight_out=alpha_layer),
            OracleInterface(weight_in=alpha_layer, weight_out=alpha_layer),
            OracleInterface(weight_in=alpha_layer, weight_out=alpha_outer),
        ),
    )
