"""Spinor wavefunction of a single walker on a finite 1-D lattice.

The walker state is stored as two parallel complex arrays, ``up`` holding
the amplitudes ``a_n`` of ``|up> (x) |n>`` and ``down`` holding ``b_n`` of
``|down> (x) |n>``. Sites are indexed ``0 .. N-1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .errors import LatticeIndexError, ValidationError

__all__ = [
    "WalkerState",
    "InitialStateSpec",
    "make_localized_state",
    "position_probabilities",
    "state_to_json",
    "state_from_json",
]

NORM_TOL = 1e-10
SPINOR_TOL = 1e-12


@dataclass(frozen=True)
class WalkerState:
    """Pure walker state ``sum_n (a_n |up> + b_n |down>) (x) |n>``."""

    up: NDArray[np.complex128]
    down: NDArray[np.complex128]

    def __post_init__(self) -> None:
        up = np.ascontiguousarray(self.up, dtype=np.complex128)
        down = np.ascontiguousarray(self.down, dtype=np.complex128)
        if up.ndim != 1 or down.ndim != 1:
            raise ValidationError("up and down must be one-dimensional")
        if up.shape != down.shape:
            raise ValidationError(
                f"up and down differ in length ({up.size} vs {down.size})"
            )
        if up.size < 2:
            raise ValidationError(f"lattice needs at least 2 sites, got {up.size}")
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)

    @property
    def n_sites(self) -> int:
        return int(self.up.size)

    def norm(self) -> float:
        """Total probability ``sum_n |a_n|^2 + |b_n|^2``."""
        return float(np.sum(position_probabilities(self)))

    def check_normalized(self, tol: float = NORM_TOL) -> None:
        norm = self.norm()
        if abs(1.0 - norm) > tol:
            raise ValidationError(f"state norm is {norm!r}, expected 1")

    def as_vector(self) -> NDArray[np.complex128]:
        """Flatten to the basis ``(up_0..up_{N-1}, down_0..down_{N-1})``."""
        return np.concatenate([self.up, self.down])

    @classmethod
    def from_vector(cls, vec: NDArray[np.complex128]) -> "WalkerState":
        vec = np.asarray(vec, dtype=np.complex128)
        if vec.ndim != 1 or vec.size % 2:
            raise ValidationError("vector length must be even (2N)")
        n = vec.size // 2
        return cls(vec[:n].copy(), vec[n:].copy())

    def copy(self) -> "WalkerState":
        return WalkerState(self.up.copy(), self.down.copy())


@dataclass(frozen=True)
class InitialStateSpec:
    """Walker starting on site ``n0`` with coin spinor ``(up, down)``."""

    n0: int
    spin_up_amp: complex = 1.0
    spin_down_amp: complex = 0.0

    def __post_init__(self) -> None:
        weight = abs(self.spin_up_amp) ** 2 + abs(self.spin_down_amp) ** 2
        if abs(weight - 1.0) > SPINOR_TOL:
            raise ValidationError(f"coin spinor has weight {weight!r}, expected 1")


def make_localized_state(spec: InitialStateSpec, n_sites: int) -> WalkerState:
    """Return ``(up_amp |up> + down_amp |down>) (x) |n0>`` on ``n_sites`` sites.

    Raises
    ------
    LatticeIndexError
        If ``n0`` is not a valid site.
    """
    if n_sites < 2:
        raise ValidationError(f"lattice needs at least 2 sites, got {n_sites}")
    if not 0 <= spec.n0 < n_sites:
        raise LatticeIndexError(f"n0={spec.n0} outside lattice of {n_sites} sites")
    up = np.zeros(n_sites, dtype=np.complex128)
    down = np.zeros(n_sites, dtype=np.complex128)
    up[spec.n0] = spec.spin_up_amp
    down[spec.n0] = spec.spin_down_amp
    return WalkerState(up, down)


def position_probabilities(state: WalkerState) -> NDArray[np.float64]:
    """Site occupation ``p_n = |a_n|^2 + |b_n|^2`` (spin summed)."""
    a, b = state.up, state.down
    return a.real**2 + a.imag**2 + b.real**2 + b.imag**2


def state_to_json(state: WalkerState) -> str:
    payload = {
        "n_sites": state.n_sites,
        "up": [[float(z.real), float(z.imag)] for z in state.up],
        "down": [[float(z.real), float(z.imag)] for z in state.down],
    }
    return json.dumps(payload)


def state_from_json(text: str | Path) -> WalkerState:
    """Inverse of :func:`state_to_json`; accepts the JSON text or a file path."""
    if isinstance(text, Path):
        text = text.read_text()
    payload = json.loads(text)
    try:
        up = np.array([complex(re, im) for re, im in payload["up"]])
        down = np.array([complex(re, im) for re, im in payload["down"]])
        n_sites = int(payload["n_sites"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed state JSON: {exc}") from exc
    if up.size != n_sites:
        raise ValidationError(f"n_sites={n_sites} but {up.size} amplitudes given")
    return WalkerState(up, down)
