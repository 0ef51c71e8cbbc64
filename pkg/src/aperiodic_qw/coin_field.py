"""Aperiodic coin field ``theta(n) = theta0 * n**nu``.

Every site carries the real reflection coin

    C(theta) = [[cos theta,  sin theta],
                [sin theta, -cos theta]]

with the angle taken from the absolute lattice index ``n = 0 .. N-1``.
``nu = 0`` gives the homogeneous walk, ``nu = 1`` the arithmetic progression
``theta0 * n``. Conventions: ``0**0 = 1`` and ``0**nu = 0`` for ``nu > 0``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import LatticeIndexError, ValidationError

__all__ = [
    "CoinField",
    "angle_at",
    "coin_matrix",
    "build_field",
    "parse_angle",
]

# 2*pi to full extended precision; np.pi alone is only a float64.
_TWO_PI_LD = np.longdouble("6.283185307179586476925286766559005768")


def _reduced_angles(theta0: float, nu: float, n: NDArray) -> NDArray[np.float64]:
    # Product and reduction in long double, then rounded once to float64.
    n_ld = np.asarray(n, dtype=np.longdouble)
    raw = np.longdouble(theta0) * np.power(n_ld, np.longdouble(nu))
    red = np.mod(raw, _TWO_PI_LD).astype(np.float64)
    # Rounding can push values just below 2*pi onto 2*pi.
    red[red >= 2.0 * math.pi] = 0.0
    return red


def angle_at(theta0: float, nu: float, n: int) -> float:
    """Coin angle ``(theta0 * n**nu) mod 2*pi`` at site ``n``, in ``[0, 2*pi)``."""
    if n < 0:
        raise LatticeIndexError(f"site index must be non-negative, got {n}")
    if nu < 0:
        raise ValidationError(f"nu must be non-negative, got {nu}")
    return float(_reduced_angles(theta0, nu, np.array([n]))[0])


def coin_matrix(theta: float) -> NDArray[np.float64]:
    """Return ``[[cos t, sin t], [sin t, -cos t]]``.

    ``theta = pi/4`` is the Hadamard coin, ``pi/2`` Pauli-X and ``0`` Pauli-Z.
    """
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


@dataclass(frozen=True)
class CoinField:
    """Static per-site coin angles with precomputed ``cos``/``sin`` tables.

    The arrays are read-only so a field can be shared between workers.
    """

    theta0: float
    nu: float
    n_sites: int
    angles: NDArray[np.float64] = field(repr=False)
    cos: NDArray[np.float64] = field(repr=False)
    sin: NDArray[np.float64] = field(repr=False)

    def matrix(self, n: int) -> NDArray[np.float64]:
        """Coin matrix at site ``n``."""
        c, s = self.cos[n], self.sin[n]
        return np.array([[c, s], [s, -c]])

    def matrices(self) -> NDArray[np.float64]:
        """All coin matrices, shape ``(N, 2, 2)``."""
        out = np.empty((self.n_sites, 2, 2))
        out[:, 0, 0] = self.cos
        out[:, 0, 1] = self.sin
        out[:, 1, 0] = self.sin
        out[:, 1, 1] = -self.cos
        return out


def build_field(theta0: float, nu: float, n_sites: int) -> CoinField:
    """Tabulate the coin field on sites ``0 .. n_sites-1``."""
    if n_sites < 2:
        raise ValidationError(f"lattice needs at least 2 sites, got {n_sites}")
    if not nu >= 0:
        raise ValidationError(f"nu must be non-negative, got {nu}")
    if not math.isfinite(theta0):
        raise ValidationError(f"theta0 must be finite, got {theta0}")
    angles = _reduced_angles(theta0, nu, np.arange(n_sites))
    cos = np.cos(angles)
    sin = np.sin(angles)
    for arr in (angles, cos, sin):
        arr.setflags(write=False)
    return CoinField(float(theta0), float(nu), int(n_sites), angles, cos, sin)


_PI_RE = re.compile(
    r"""^\s*(?P<sign>[-+]?)\s*
        (?P<num>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*
        pi\s*
        (?:/\s*(?P<den>\d+(?:\.\d*)?|\.\d+))?\s*$""",
    re.VERBOSE | re.IGNORECASE,
)


def parse_angle(value: str | float) -> float:
    """Parse a real or a fraction-of-pi string such as ``"pi/4"`` or ``"3pi/2"``.

    >>> parse_angle("pi/2") == math.pi / 2
    True
    >>> parse_angle("0.25")
    0.25
    """
    if isinstance(value, (int, float)):
        return float(value)
    text = value.strip()
    m = _PI_RE.match(text)
    if m:
        num = float(m["num"]) if m["num"] else 1.0
        den = float(m["den"]) if m["den"] else 1.0
        if den == 0:
            raise ValidationError(f"zero denominator in angle {value!r}")
        out = num * math.pi / den
        return -out if m["sign"] == "-" else out
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"cannot parse angle {value!r}") from None
