"""One-step walk operator ``U = S (C (x) I)`` and trajectory driver.

A step applies the local coin on every site and then moves the up
component one site right and the down component one site left:

    a'_{n+1} = cos t_n a_n + sin t_n b_n
    b'_{n-1} = sin t_n a_n - cos t_n b_n
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .coin_field import CoinField, build_field
from .entanglement import reduce_over_position, trace_distance, von_neumann_entropy
from .errors import GuardError, ValidationError
from .lattice_state import InitialStateSpec, WalkerState, make_localized_state
from .observables import (
    ObservableSeries,
    inverse_participation_ratio,
    parse_probes,
    survival_probability,
)

__all__ = [
    "Boundary",
    "EvolutionConfig",
    "DEFAULT_MARGIN",
    "auto_lattice",
    "apply_step",
    "evolve",
    "run_walk",
]

DEFAULT_MARGIN = 2


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    LIGHT_CONE_GUARD = "guard"


@dataclass(frozen=True)
class EvolutionConfig:
    n_steps: int
    boundary: Boundary = Boundary.LIGHT_CONE_GUARD
    record_every: int = 1

    def __post_init__(self) -> None:
        if self.n_steps < 0:
            raise ValidationError(f"n_steps must be >= 0, got {self.n_steps}")
        if self.record_every < 1:
            raise ValidationError(f"record_every must be >= 1, got {self.record_every}")
        object.__setattr__(self, "boundary", Boundary(self.boundary))


def auto_lattice(
    n_steps: int, n0: int | None = None, margin: int = DEFAULT_MARGIN
) -> tuple[int, int]:
    """Pick ``(n_sites, n0)`` so a ``n_steps`` run never reaches the edges.

    Without ``n0`` the walker starts in the middle of ``2*(T+margin)+1`` sites.
    With an explicit ``n0`` the lattice is extended to the right as needed;
    ``n0`` itself must leave room on the left, since site indices enter the
    coin angles and cannot be shifted.
    """
    if n_steps < 0 or margin < 1:
        raise ValidationError("need n_steps >= 0 and margin >= 1")
    reach = n_steps + margin
    if n0 is None:
        return 2 * reach + 1, reach
    if n0 < n_steps + 1:
        raise GuardError(
            f"n0={n0} too close to site 0 for {n_steps} guarded steps "
            f"(need n0 >= {n_steps + 1}); use the periodic boundary instead"
        )
    return n0 + reach + 1, n0


def _support(state: WalkerState) -> tuple[int, int]:
    nz = np.flatnonzero((state.up != 0) | (state.down != 0))
    if nz.size == 0:
        raise ValidationError("state has no nonzero amplitude")
    return int(nz[0]), int(nz[-1])


def _check_guard(state: WalkerState, n_steps: int) -> None:
    lo, hi = _support(state)
    room = min(lo, state.n_sites - 1 - hi) - 1
    if n_steps > room:
        raise GuardError(
            f"{n_steps} steps from support [{lo}, {hi}] would reach the edge of "
            f"{state.n_sites} sites (at most {max(room, 0)} allowed)"
        )


def _step_into(a, b, c, s, out_a, out_b, t1, t2) -> None:
    # up: coin then shift right
    np.multiply(c, a, out=t1)
    np.multiply(s, b, out=t2)
    np.add(t1, t2, out=t1)
    out_a[1:] = t1[:-1]
    out_a[0] = t1[-1]
    # down: coin then shift left
    np.multiply(s, a, out=t1)
    np.multiply(c, b, out=t2)
    np.subtract(t1, t2, out=t1)
    out_b[:-1] = t1[1:]
    out_b[-1] = t1[0]


def apply_step(
    state: WalkerState,
    field: CoinField,
    boundary: Boundary | str = Boundary.PERIODIC,
) -> WalkerState:
    """Return ``U |state>``; the input is left untouched.

    Under the light-cone guard any amplitude on the two edge sites raises
    :class:`GuardError` before stepping.
    """
    if state.n_sites != field.n_sites:
        raise ValidationError(
            f"state has {state.n_sites} sites but field has {field.n_sites}"
        )
    if Boundary(boundary) is Boundary.LIGHT_CONE_GUARD:
        _check_guard(state, 1)
    n = state.n_sites
    out_a = np.empty(n, dtype=np.complex128)
    out_b = np.empty(n, dtype=np.complex128)
    t1 = np.empty(n, dtype=np.complex128)
    t2 = np.empty(n, dtype=np.complex128)
    _step_into(state.up, state.down, field.cos, field.sin, out_a, out_b, t1, t2)
    return WalkerState(out_a, out_b)


def evolve(
    state0: WalkerState,
    field: CoinField,
    config: EvolutionConfig,
    probes=("sp0", "sp1", "ipr"),
    n0: int | None = None,
) -> ObservableSeries:
    """Run ``config.n_steps`` steps and sample probes every ``record_every`` steps.

    ``n0`` is the reference site for the survival probabilities; by default
    it is the most probable site of ``state0``. The returned series carries
    the final state. The function is pure: ``state0`` is not modified.
    """
    probes = parse_probes(probes)
    if state0.n_sites != field.n_sites:
        raise ValidationError(
            f"state has {state0.n_sites} sites but field has {field.n_sites}"
        )
    if config.boundary is Boundary.LIGHT_CONE_GUARD:
        _check_guard(state0, config.n_steps)
    if n0 is None:
        p0 = np.abs(state0.up) ** 2 + np.abs(state0.down) ** 2
        n0 = int(np.argmax(p0))

    n = state0.n_sites
    a = state0.up.copy()
    b = state0.down.copy()
    na = np.empty_like(a)
    nb = np.empty_like(b)
    t1 = np.empty_like(a)
    t2 = np.empty_like(a)
    c, s = field.cos, field.sin

    need_rho = "entropy" in probes or "trace" in probes
    times: list[int] = []
    rec: dict[str, list[float]] = {p: [] for p in probes}
    prev_rho = None

    def record(t: int) -> None:
        nonlocal prev_rho
        view = WalkerState(a, b)
        times.append(t)
        if "sp0" in rec:
            rec["sp0"].append(survival_probability(view, n0, 0))
        if "sp1" in rec:
            rec["sp1"].append(survival_probability(view, n0, 1))
        if "ipr" in rec:
            rec["ipr"].append(inverse_participation_ratio(view))
        if need_rho:
            rho = reduce_over_position(view)
            if "entropy" in rec:
                rec["entropy"].append(von_neumann_entropy(rho))
            if "trace" in rec:
                rec["trace"].append(
                    np.nan if prev_rho is None else trace_distance(rho, prev_rho)
                )
            prev_rho = rho

    record(0)
    for t in range(1, config.n_steps + 1):
        _step_into(a, b, c, s, na, nb, t1, t2)
        a, na = na, a
        b, nb = nb, b
        if t % config.record_every == 0:
            record(t)

    return ObservableSeries(
        times=np.array(times, dtype=np.int64),
        values={p: np.array(v) for p, v in rec.items()},
        final_state=WalkerState(a.copy(), b.copy()),
        n0=n0,
    )


def run_walk(
    theta0: float,
    nu: float,
    n_steps: int,
    probes=("sp0", "sp1", "ipr", "entropy"),
    n0: int | None = None,
    spin: tuple[complex, complex] = (1.0, 0.0),
    record_every: int = 1,
    margin: int = DEFAULT_MARGIN,
    n_sites: int | None = None,
) -> ObservableSeries:
    """Guarded walk from ``spin (x) |n0>`` on an auto-sized lattice.

    ``n_sites`` may be given to use a larger lattice than the minimum; the
    guard is still enforced.
    """
    auto_n, n0 = auto_lattice(n_steps, n0, margin)
    if n_sites is None:
        n_sites = auto_n
    state = make_localized_state(InitialStateSpec(n0, *spin), n_sites)
    field = build_field(theta0, nu, n_sites)
    config = EvolutionConfig(n_steps, Boundary.LIGHT_CONE_GUARD, record_every)
    return evolve(state, field, config, probes, n0=n0)
