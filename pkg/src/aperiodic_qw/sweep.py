"""(nu, theta0) parameter sweeps and the transport/entanglement diagrams.

Each grid cell is an independent guarded walk from ``|up> (x) |n0>``.
Cells run in a process pool and are gathered back in grid order, so the
output does not depend on scheduling.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy
from numpy.typing import NDArray

from . import __version__
from .errors import GuardError, ValidationError
from .evolution import DEFAULT_MARGIN, auto_lattice, run_walk
from .observables import long_time_average

__all__ = ["SweepSpec", "DiagramResult", "run_sweep", "enhancement_mask", "run_cell"]

_CELL_PROBES = ("sp0", "sp1", "ipr", "entropy")
CSV_COLUMNS = ("theta0", "nu", "sp0", "sp1", "ipr", "ipr_norm", "entropy", "mask")


@dataclass(frozen=True)
class SweepSpec:
    """Grid axes and the per-run settings shared by every cell."""

    theta0s: tuple[float, ...]
    nus: tuple[float, ...]
    n_steps: int = 500
    n0: int | None = None
    margin: int = DEFAULT_MARGIN
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta0s", tuple(float(x) for x in self.theta0s))
        object.__setattr__(self, "nus", tuple(float(x) for x in self.nus))
        if not self.theta0s or not self.nus:
            raise ValidationError("theta0 and nu grids must be non-empty")
        if any(not nu >= 0 for nu in self.nus):
            raise ValidationError("nu values must be non-negative")
        if self.n_steps < 4:
            raise ValidationError("sweeps need at least 4 steps for long-time averages")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")
        # raises GuardError on an infeasible (n0, n_steps) pair
        auto_lattice(self.n_steps, self.n0, self.margin)

    @classmethod
    def desk_scale(cls, **overrides) -> "SweepSpec":
        """nu in [0, 4] step 0.05, theta0 in [0, 2 pi] step pi/50, T = 500."""
        params = dict(
            theta0s=tuple(k * math.pi / 50 for k in range(101)),
            nus=tuple(round(0.05 * k, 10) for k in range(81)),
            n_steps=500,
        )
        params.update(overrides)
        return cls(**params)

    @property
    def lattice(self) -> tuple[int, int]:
        return auto_lattice(self.n_steps, self.n0, self.margin)


def run_cell(theta0: float, nu: float, n_steps: int, n0: int | None, margin: int) -> dict:
    """Long-time averages of one trajectory."""
    series = run_walk(theta0, nu, n_steps, _CELL_PROBES, n0=n0, margin=margin)
    return {tag: long_time_average(series, tag) for tag in _CELL_PROBES}


def _run_cell_args(args) -> dict:
    try:
        return run_cell(*args)
    except GuardError as exc:
        raise GuardError(f"cell theta0={args[0]!r}, nu={args[1]!r}: {exc}") from None


@dataclass
class DiagramResult:
    """Per-cell long-time averages on the ``(nu, theta0)`` grid.

    Arrays are indexed ``[i_nu, j_theta]``. ``baseline[j]`` is the
    homogeneous (``nu = 0``) entropy for ``theta0s[j]``.
    """

    theta0s: NDArray[np.float64]
    nus: NDArray[np.float64]
    sp0: NDArray[np.float64]
    sp1: NDArray[np.float64]
    ipr: NDArray[np.float64]
    entropy: NDArray[np.float64]
    baseline: NDArray[np.float64]
    spec: SweepSpec | None = None
    timings: dict = field(default_factory=dict)

    @property
    def ipr_norm(self) -> NDArray[np.float64]:
        return self.ipr / np.max(self.ipr)

    @property
    def mask(self) -> NDArray[np.bool_]:
        return enhancement_mask(self)

    def cell(self, theta0: float, nu: float) -> dict:
        i = int(np.argmin(np.abs(self.nus - nu)))
        j = int(np.argmin(np.abs(self.theta0s - theta0)))
        return {
            "sp0": float(self.sp0[i, j]),
            "sp1": float(self.sp1[i, j]),
            "ipr": float(self.ipr[i, j]),
            "ipr_norm": float(self.ipr_norm[i, j]),
            "entropy": float(self.entropy[i, j]),
            "mask": bool(self.mask[i, j]),
        }

    def to_csv(self, path: str | Path) -> None:
        """Long format, one row per cell, nu-major order, 17 significant digits."""
        norm = self.ipr_norm
        mask = self.mask
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for i, nu in enumerate(self.nus):
                for j, th in enumerate(self.theta0s):
                    w.writerow([
                        f"{th:.17g}", f"{nu:.17g}",
                        f"{self.sp0[i, j]:.17g}", f"{self.sp1[i, j]:.17g}",
                        f"{self.ipr[i, j]:.17g}", f"{norm[i, j]:.17g}",
                        f"{self.entropy[i, j]:.17g}", int(mask[i, j]),
                    ])

    def manifest(self) -> dict:
        n_sites, n0 = self.spec.lattice if self.spec else (None, None)
        return {
            "parameters": {
                **({k: v for k, v in asdict(self.spec).items()} if self.spec else {}),
                "n_sites": n_sites,
                "n0_resolved": n0,
            },
            "baseline_entropy": [float(x) for x in self.baseline],
            "versions": {
                "aperiodic_qw": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": sys.version.split()[0],
                "platform": platform.platform(),
            },
            "timings": self.timings,
        }

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "sweep.csv"
        manifest_path = out_dir / "manifest.json"
        self.to_csv(csv_path)
        manifest_path.write_text(json.dumps(self.manifest(), indent=2) + "\n")
        return csv_path, manifest_path


def enhancement_mask(result: DiagramResult) -> NDArray[np.bool_]:
    """``entropy[i, j] > baseline[j]``, strict and with no minimum gain."""
    base = np.asarray(result.baseline, dtype=np.float64)
    if base.shape != (len(result.theta0s),) or not np.all(np.isfinite(base)):
        raise ValidationError("a homogeneous baseline is missing for some theta0 column")
    return result.entropy > base[np.newaxis, :]


def run_sweep(spec: SweepSpec) -> DiagramResult:
    """Run every grid cell (plus nu = 0 baselines) and collect the diagrams.

    Raises
    ------
    GuardError
        Naming the offending cell, if any cell cannot be run guarded.
    """
    tic = time.perf_counter()
    nus = list(spec.nus)
    extra_baseline = 0.0 not in nus
    run_nus = nus + ([0.0] if extra_baseline else [])
    cells = [(th, nu) for nu in run_nus for th in spec.theta0s]
    args = [(th, nu, spec.n_steps, spec.n0, spec.margin) for th, nu in cells]

    if spec.workers == 1:
        results = [_run_cell_args(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            # chunksize 1: idle workers keep pulling cells off the queue
            results = list(pool.map(_run_cell_args, args, chunksize=1))

    n_th = len(spec.theta0s)
    grid = {
        tag: np.array([r[tag] for r in results]).reshape(len(run_nus), n_th)
        for tag in _CELL_PROBES
    }
    zero_row = run_nus.index(0.0)
    baseline = grid["entropy"][zero_row].copy()
    keep = slice(0, len(nus))
    toc = time.perf_counter()
    return DiagramResult(
        theta0s=np.array(spec.theta0s),
        nus=np.array(nus),
        sp0=grid["sp0"][keep],
        sp1=grid["sp1"][keep],
        ipr=grid["ipr"][keep],
        entropy=grid["entropy"][keep],
        baseline=baseline,
        spec=spec,
        timings={"wall_seconds": toc - tic, "cells": len(cells), "workers": spec.workers},
    )
