"""Coin-position entanglement and the trace-distance asymptotics.

The reduced coin density matrix of a pure walker state is

    rho_c = [[alpha, gamma], [conj(gamma), beta]]

with ``alpha = sum|a_n|^2``, ``beta = sum|b_n|^2``, ``gamma = sum a_n conj(b_n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from .errors import FitError, NumericalError, ValidationError
from .lattice_state import WalkerState

__all__ = [
    "ReducedCoinDensity",
    "PowerLawFit",
    "reduce_over_position",
    "von_neumann_entropy",
    "trace_distance",
    "trace_distance_series",
    "asymptotic_fit",
]

# Slack allowed on the eigenvalue discriminant before it counts as an error.
DISC_TOL = 1e-9
MIN_FIT_POINTS = 8
ZERO_CUTOFF = 1e-14


@dataclass(frozen=True)
class ReducedCoinDensity:
    alpha: float
    beta: float
    gamma: complex

    @property
    def determinant(self) -> float:
        return self.alpha * self.beta - abs(self.gamma) ** 2

    def matrix(self) -> NDArray[np.complex128]:
        g = complex(self.gamma)
        return np.array([[self.alpha, g], [g.conjugate(), self.beta]], dtype=np.complex128)

    def eigenvalues(self) -> tuple[float, float]:
        """``(lambda_plus, lambda_minus)`` of the 2x2 matrix, closed form."""
        tr = self.alpha + self.beta
        disc = tr * tr - 4.0 * self.determinant
        if disc < -DISC_TOL:
            raise NumericalError(f"negative discriminant {disc!r} for {self}")
        root = math.sqrt(max(disc, 0.0))
        lam_p = 0.5 * (tr + root)
        # det / lambda_plus avoids cancellation when lambda_minus is tiny.
        lam_m = self.determinant / lam_p if lam_p > 0 else 0.0
        return lam_p, lam_m


def reduce_over_position(state: WalkerState) -> ReducedCoinDensity:
    """Trace the pure state over position."""
    a, b = state.up, state.down
    alpha = float(np.sum(a.real**2 + a.imag**2))
    beta = float(np.sum(b.real**2 + b.imag**2))
    gamma = complex(np.vdot(b, a))  # sum_n a_n conj(b_n)
    return ReducedCoinDensity(alpha, beta, gamma)


def _h(x: float) -> float:
    return 0.0 if x <= 0.0 else -x * math.log2(x)


def von_neumann_entropy(rho: ReducedCoinDensity) -> float:
    """Entropy ``-sum lambda log2 lambda`` of the coin state, in bits.

    Eigenvalues come from ``lambda = (1 +- sqrt(1 - 4 (alpha beta - |gamma|^2))) / 2``.
    Raises :class:`NumericalError` if the discriminant leaves ``[0, 1]``
    by more than ``DISC_TOL``.
    """
    tr = rho.alpha + rho.beta
    if abs(tr - 1.0) > 1e-8:
        raise NumericalError(f"reduced density matrix has trace {tr!r}")
    disc = 1.0 - 4.0 * rho.determinant
    if disc < -DISC_TOL or disc > 1.0 + DISC_TOL:
        raise NumericalError(f"discriminant {disc!r} outside [0, 1]")
    lam_p, lam_m = rho.eigenvalues()
    s = _h(lam_p) + _h(lam_m)
    return min(max(s, 0.0), 1.0)


def trace_distance(rho1: ReducedCoinDensity, rho2: ReducedCoinDensity) -> float:
    """``1/2 Tr|rho1 - rho2|`` from the exact eigenvalues of the 2x2 difference."""
    da = rho1.alpha - rho2.alpha
    db = rho1.beta - rho2.beta
    dg = complex(rho1.gamma) - complex(rho2.gamma)
    mid = 0.5 * (da + db)
    rad = math.hypot(0.5 * (da - db), abs(dg))
    return 0.5 * (abs(mid + rad) + abs(mid - rad))


def trace_distance_series(rhos: list[ReducedCoinDensity]) -> NDArray[np.float64]:
    """``D`` between consecutive entries; the first slot is NaN."""
    out = np.full(len(rhos), np.nan)
    for i in range(1, len(rhos)):
        out[i] = trace_distance(rhos[i], rhos[i - 1])
    return out


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line through ``(log t, log D)``.

    ``power_law`` is False when the tail is (almost) all exact zeros, as
    for the period-2 Pauli-X walk; the exponent is then NaN.
    """

    exponent: float
    amplitude: float
    r_squared: float
    window: tuple[int, int]
    n_points: int
    n_excluded: int
    power_law: bool = True

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "amplitude": self.amplitude,
            "r_squared": self.r_squared,
            "window": list(self.window),
            "n_points": self.n_points,
            "n_excluded": self.n_excluded,
            "power_law": self.power_law,
        }


def asymptotic_fit(
    times,
    values,
    window: tuple[float, float] | None = None,
) -> PowerLawFit:
    """Fit ``D(t) ~ amplitude * t**exponent`` on a time window.

    Parameters
    ----------
    times, values:
        The ``trace`` time series. Non-finite samples are dropped silently.
    window:
        Inclusive ``(t_min, t_max)``. Defaults to the last 90% of samples.

    Samples with ``D <= 1e-14`` are excluded and counted in ``n_excluded``.
    If exclusion leaves fewer than 8 points the result is a no-power-law
    fit; if the window itself holds fewer than 8 samples, :class:`FitError`.
    """
    t = np.asarray(times, dtype=np.float64)
    d = np.asarray(values, dtype=np.float64)
    if t.shape != d.shape:
        raise ValidationError("times and values differ in length")
    keep = np.isfinite(d)
    t, d = t[keep], d[keep]
    if t.size == 0:
        raise FitError("empty series")
    if window is None:
        start = int(math.floor(0.1 * t.size))
        window = (t[start], t[-1])
    t_min, t_max = window
    if t_min > t_max:
        raise ValidationError(f"bad window {window}")
    sel = (t >= t_min) & (t <= t_max) & (t > 0)
    tw, dw = t[sel], d[sel]
    if tw.size < MIN_FIT_POINTS:
        raise FitError(f"only {tw.size} samples in window {window}")
    pos = dw > ZERO_CUTOFF
    n_excl = int(np.count_nonzero(~pos))
    win = (int(t_min), int(t_max))
    if np.count_nonzero(pos) < MIN_FIT_POINTS:
        return PowerLawFit(math.nan, math.nan, 0.0, win, int(np.count_nonzero(pos)),
                           n_excl, power_law=False)
    x = np.log(tw[pos])
    y = np.log(dw[pos])
    res = stats.linregress(x, y)
    r2 = float(res.rvalue**2) if np.isfinite(res.rvalue) else 0.0
    return PowerLawFit(
        exponent=float(res.slope),
        amplitude=float(math.exp(res.intercept)),
        r_squared=r2,
        window=win,
        n_points=int(x.size),
        n_excluded=n_excl,
    )
