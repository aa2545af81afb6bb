"""Dense 2-D evaluation of a target's constrained-space density plus shape
analytics (mode counting, ridge direction, conditional argmax traces) and
CSV / binary-PGM emission.

Cells are evaluated at centers, lo + (i + 0.5) (hi - lo) / n, which keeps
unit-interval axes away from their support boundaries. Values are the
unnormalized log posterior in natural (constrained) parameters with no
transform Jacobian. +inf cells (the instrumental-variable singular set can
hit a lattice point) are clipped to 10 nats above the finite maximum and
recorded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .targets import Target

CLIP_MARGIN = 10.0


@dataclass(frozen=True)
class GridSpec:
    x_param: str
    y_param: str
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    nx: int = 200
    ny: int = 200
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.x_param == self.y_param:
            raise ValueError("x_param and y_param must differ")
        if not (self.x_range[0] < self.x_range[1] and self.y_range[0] < self.y_range[1]):
            raise ValueError("ranges must satisfy lo < hi")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("need nx, ny >= 2")

    def x_centers(self) -> np.ndarray:
        lo, hi = self.x_range
        return lo + (np.arange(self.nx) + 0.5) * (hi - lo) / self.nx

    def y_centers(self) -> np.ndarray:
        lo, hi = self.y_range
        return lo + (np.arange(self.ny) + 0.5) * (hi - lo) / self.ny


@dataclass(frozen=True)
class DensityGrid:
    target: str
    spec: GridSpec
    logp: np.ndarray  # (ny, nx)
    max_logp: float
    clipped_cells: tuple  # ((i, j), ...) with i the x index, j the y index


def _check_axis_range(target: Target, name: str, rng: tuple[float, float]) -> None:
    from .transforms import Interval, Positive, Real, UnitInterval

    for d in target.space.descriptors:
        if name not in d.support.coord_names(d.name):
            continue
        s = d.support
        # ranges may touch the boundary: cell centers stay strictly inside
        if isinstance(s, Real):
            ok = True
        elif isinstance(s, Positive):
            ok = rng[0] >= 0.0
        elif isinstance(s, UnitInterval):
            ok = 0.0 <= rng[0] and rng[1] <= 1.0
        elif isinstance(s, Interval):
            ok = s.lo <= rng[0] and rng[1] <= s.hi
        else:
            raise ValueError(f"coordinate {name!r} of {target.name!r} cannot be a grid axis")
        if not ok:
            raise ValueError(
                f"axis range {rng} for {name!r} leaves the {s.label()} support"
            )
        return
    raise ValueError(f"target {target.name!r} has no parameter coordinate {name!r}")


def evaluate_grid(target: Target, spec: GridSpec) -> DensityGrid:
    """Evaluate the constrained-space log density at every cell center.

    Deterministic, with values independent of evaluation order; rows may be
    computed concurrently since targets are pure.
    """
    _check_axis_range(target, spec.x_param, spec.x_range)
    _check_axis_range(target, spec.y_param, spec.y_range)
    fn = target.grid_density(spec.x_param, spec.y_param, dict(spec.fixed))
    xs = spec.x_centers()
    ys = spec.y_centers()
    logp = np.empty((spec.ny, spec.nx))
    for j, yv in enumerate(ys):
        row = logp[j]
        for i, xv in enumerate(xs):
            row[i] = fn(float(xv), float(yv))

    clipped = []
    pos_inf = np.isposinf(logp)
    if pos_inf.any():
        finite = logp[np.isfinite(logp)]
        clip_value = (float(finite.max()) if finite.size else 0.0) + CLIP_MARGIN
        for j, i in zip(*np.nonzero(pos_inf)):
            clipped.append((int(i), int(j)))
            logp[j, i] = clip_value
    finite = logp[np.isfinite(logp)]
    max_logp = float(finite.max()) if finite.size else -math.inf
    return DensityGrid(
        target=target.name,
        spec=spec,
        logp=logp,
        max_logp=max_logp,
        clipped_cells=tuple(clipped),
    )


def find_local_maxima(grid: DensityGrid, min_separation: int = 1) -> list[tuple[int, int, float]]:
    """Interior cells strictly above all 8 neighbors, greedily thinned.

    Returned as (i, j, logp) sorted by logp descending; kept maxima are at
    least ``min_separation`` cells apart in Chebyshev distance. Boundary
    cells are excluded.
    """
    if min_separation < 1:
        raise ValueError("min_separation must be >= 1")
    lp = grid.logp
    center = lp[1:-1, 1:-1]
    strict = np.isfinite(center)
    for dj in (-1, 0, 1):
        for di in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbor = lp[1 + dj : lp.shape[0] - 1 + dj, 1 + di : lp.shape[1] - 1 + di]
            strict &= center > neighbor
    hits = [
        (int(i) + 1, int(j) + 1, float(center[j, i])) for j, i in zip(*np.nonzero(strict))
    ]
    hits.sort(key=lambda t: -t[2])
    kept: list[tuple[int, int, float]] = []
    for i, j, v in hits:
        if all(max(abs(i - ki), abs(j - kj)) >= min_separation for ki, kj, _ in kept):
            kept.append((i, j, v))
    return kept


def principal_axis(grid: DensityGrid) -> np.ndarray:
    """Leading eigenvector of the exp(logp - max)-weighted covariance of cell
    centers, sign-fixed so the first nonzero component is positive."""
    spec = grid.spec
    w = np.exp(grid.logp - grid.max_logp)
    w[~np.isfinite(grid.logp)] = 0.0
    total = w.sum()
    if not total > 0 or np.count_nonzero(w) < 2:
        raise ValueError("grid is degenerate: fewer than two cells carry mass")
    xs, ys = np.meshgrid(spec.x_centers(), spec.y_centers())
    mx = float((w * xs).sum() / total)
    my = float((w * ys).sum() / total)
    dx = xs - mx
    dy = ys - my
    cov = np.array(
        [
            [(w * dx * dx).sum(), (w * dx * dy).sum()],
            [(w * dx * dy).sum(), (w * dy * dy).sum()],
        ]
    ) / total
    eigvals, eigvecs = np.linalg.eigh(cov)
    vec = eigvecs[:, int(np.argmax(eigvals))]
    for comp in vec:
        if comp != 0.0:
            if comp < 0.0:
                vec = -vec
            break
    return vec


def conditional_argmax(grid: DensityGrid, axis: str = "x") -> list[tuple[float, float]]:
    """Trace of the conditional mode: for each x column (or y row), the center
    of its best cell. Columns that are -inf everywhere are omitted."""
    xs = grid.spec.x_centers()
    ys = grid.spec.y_centers()
    out = []
    if axis == "x":
        for i in range(grid.spec.nx):
            col = grid.logp[:, i]
            if np.all(np.isneginf(col)):
                continue
            out.append((float(xs[i]), float(ys[int(np.argmax(col))])))
    elif axis == "y":
        for j in range(grid.spec.ny):
            row = grid.logp[j]
            if np.all(np.isneginf(row)):
                continue
            out.append((float(ys[j]), float(xs[int(np.argmax(row))])))
    else:
        raise ValueError("axis must be 'x' or 'y'")
    return out


def write_grid(grid: DensityGrid, csv_path, pgm_path=None, metadata=None) -> None:
    """Write x,y,logp rows (17 significant digits), an optional 8-bit PGM
    heatmap, and a JSON sidecar <csv_path>.json recording spec and clipping."""
    xs = grid.spec.x_centers()
    ys = grid.spec.y_centers()
    try:
        with open(csv_path, "w") as fh:
            fh.write("x,y,logp\n")
            for j in range(grid.spec.ny):
                yv = ys[j]
                row = grid.logp[j]
                for i in range(grid.spec.nx):
                    fh.write(f"{xs[i]:.17g},{yv:.17g},{row[i]:.17g}\n")
    except OSError as exc:
        raise OSError(f"cannot write grid CSV to {csv_path}: {exc}") from exc

    if pgm_path is not None:
        gray = np.zeros((grid.spec.ny, grid.spec.nx), dtype=np.uint8)
        finite = np.isfinite(grid.logp)
        gray[finite] = np.rint(
            255.0 * np.exp(grid.logp[finite] - grid.max_logp)
        ).astype(np.uint8)
        header = f"P5\n{grid.spec.nx} {grid.spec.ny}\n255\n".encode("ascii")
        try:
            with open(pgm_path, "wb") as fh:
                fh.write(header)
                # top image row is the largest y so the heatmap reads upright
                fh.write(gray[::-1].tobytes())
        except OSError as exc:
            raise OSError(f"cannot write PGM to {pgm_path}: {exc}") from exc

    sidecar = {
        "target": grid.target,
        "x_param": grid.spec.x_param,
        "y_param": grid.spec.y_param,
        "x_range": list(grid.spec.x_range),
        "y_range": list(grid.spec.y_range),
        "nx": grid.spec.nx,
        "ny": grid.spec.ny,
        "fixed": dict(grid.spec.fixed),
        "max_logp": grid.max_logp,
        "clipped_cells": [list(c) for c in grid.clipped_cells],
    }
    if metadata:
        sidecar["metadata"] = dict(metadata)
    sidecar_path = f"{csv_path}.json"
    try:
        with open(sidecar_path, "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write grid sidecar to {sidecar_path}: {exc}") from exc
