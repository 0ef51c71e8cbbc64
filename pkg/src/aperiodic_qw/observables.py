"""Transport observables and time-series container.

``sp0``/``sp1`` are the survival probability on the start site and on the
three sites ``n0-1, n0, n0+1``; ``ipr`` is the inverse participation ratio
of the spin-summed site distribution.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .errors import LatticeIndexError, ValidationError
from .lattice_state import WalkerState, position_probabilities

__all__ = [
    "PROBES",
    "ObservableSeries",
    "survival_probability",
    "inverse_participation_ratio",
    "long_time_average",
    "parse_probes",
]

PROBES = ("sp0", "sp1", "ipr", "entropy", "trace")

# Allowed value ranges, checked with RANGE_TOL slack.
_RANGES = {
    "sp0": (0.0, 1.0),
    "sp1": (0.0, 1.0),
    "ipr": (1.0, np.inf),
    "entropy": (0.0, 1.0),
    "trace": (0.0, 1.0),
}
RANGE_TOL = 1e-9


def parse_probes(spec: str | list[str] | tuple[str, ...]) -> tuple[str, ...]:
    """Normalize a probe list; ``"sp"`` expands to ``sp0`` and ``sp1``.

    The result follows the canonical :data:`PROBES` order.
    """
    if isinstance(spec, str):
        items = [s.strip() for s in spec.split(",") if s.strip()]
    else:
        items = list(spec)
    wanted = set()
    for tag in items:
        if tag == "sp":
            wanted.update(("sp0", "sp1"))
        elif tag in PROBES:
            wanted.add(tag)
        else:
            raise ValidationError(f"unknown probe {tag!r}; choose from {PROBES}")
    return tuple(p for p in PROBES if p in wanted)


@dataclass
class ObservableSeries:
    """Time-indexed probe values from one trajectory.

    ``trace`` has no value at the first recorded time (there is no earlier
    state to compare with); that slot holds NaN.
    """

    times: NDArray[np.int64]
    values: dict[str, NDArray[np.float64]]
    final_state: WalkerState | None = field(default=None, repr=False)
    n0: int | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.int64)
        for tag, vals in self.values.items():
            if tag not in PROBES:
                raise ValidationError(f"unknown probe {tag!r}")
            vals = np.asarray(vals, dtype=np.float64)
            if vals.shape != self.times.shape:
                raise ValidationError(
                    f"probe {tag!r} has {vals.size} samples, expected {self.times.size}"
                )
            self.values[tag] = vals

    def __getitem__(self, tag: str) -> NDArray[np.float64]:
        try:
            return self.values[tag]
        except KeyError:
            raise ValidationError(f"probe {tag!r} not recorded") from None

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def probes(self) -> tuple[str, ...]:
        return tuple(p for p in PROBES if p in self.values)

    def check_ranges(self, n_sites: int | None = None) -> None:
        """Raise :class:`ValidationError` if any sample is out of its range."""
        for tag, vals in self.values.items():
            lo, hi = _RANGES[tag]
            if tag == "ipr" and n_sites is not None:
                hi = n_sites
            finite = vals[np.isfinite(vals)]
            if finite.size and (
                finite.min() < lo - RANGE_TOL or finite.max() > hi + RANGE_TOL
            ):
                raise ValidationError(
                    f"probe {tag!r} leaves [{lo}, {hi}]: "
                    f"min={finite.min()!r} max={finite.max()!r}"
                )

    def to_csv(self, path: str | Path) -> None:
        """Write ``t`` followed by one column per probe, 17 significant digits."""
        probes = self.probes
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", *probes])
            for i, t in enumerate(self.times):
                writer.writerow([int(t), *(f"{self.values[p][i]:.17g}" for p in probes)])

    @classmethod
    def from_csv(cls, path: str | Path) -> "ObservableSeries":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [row for row in reader if row]
        if not header or header[0] != "t":
            raise ValidationError(f"{path}: first column must be 't'")
        data = np.array([[float(x) for x in row] for row in rows]).reshape(-1, len(header))
        values = {tag: data[:, j] for j, tag in enumerate(header[1:], start=1)}
        return cls(data[:, 0].astype(np.int64), values)


def survival_probability(state: WalkerState, n0: int, radius: int = 0) -> float:
    """Probability on sites ``n0-radius .. n0+radius``, summed over spin."""
    if radius not in (0, 1):
        raise ValidationError(f"radius must be 0 or 1, got {radius}")
    lo, hi = n0 - radius, n0 + radius
    if lo < 0 or hi >= state.n_sites:
        raise LatticeIndexError(
            f"window [{lo}, {hi}] outside lattice of {state.n_sites} sites"
        )
    a = state.up[lo : hi + 1]
    b = state.down[lo : hi + 1]
    return float(np.sum(a.real**2 + a.imag**2 + b.real**2 + b.imag**2))


def inverse_participation_ratio(state: WalkerState) -> float:
    """``1 / sum_n p_n**2`` with ``p_n`` the spin-summed site probability."""
    p = position_probabilities(state)
    total = float(np.sum(p))
    if total <= 0.0:
        raise ValidationError("IPR undefined for a zero-norm state")
    return 1.0 / float(np.dot(p, p))


def long_time_average(series: ObservableSeries, tag: str) -> float:
    """Mean of a probe over the last half of the run, ``t in [T/2, T]``.

    NaN samples (the first ``trace`` slot) are ignored.
    """
    if tag not in PROBES:
        raise ValidationError(f"unknown probe {tag!r}")
    vals = series[tag]
    if len(series) < 4:
        raise ValidationError(f"need at least 4 samples, got {len(series)}")
    t_end = series.times[-1]
    sel = series.times * 2 >= t_end
    window = vals[sel]
    window = window[np.isfinite(window)]
    return float(np.mean(window))
