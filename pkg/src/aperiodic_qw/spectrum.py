"""Dense Floquet operator, quasi-energies and band analysis.

The one-step operator is built on a ring of N sites in the basis
``(|up,0>, ..., |up,N-1>, |down,0>, ..., |down,N-1>)`` and diagonalized
with a complex Schur decomposition. Quasi-energies ``E = -i log(lambda)``
live on the branch ``(-pi, pi]``.

Gap and cluster detection treat the spectrum as a circle, so a band
straddling the branch cut at ``E = pi`` is not split in two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .coin_field import CoinField
from .errors import NumericalError, ValidationError
from .evolution import Boundary

__all__ = [
    "QuasiEnergySpectrum",
    "BandReport",
    "build_floquet_matrix",
    "unitarity_defect",
    "quasi_energies",
    "band_report",
    "wrap_energy",
]

TWO_PI = 2.0 * math.pi
GAP_THRESHOLD = 0.05
DEGENERACY_TOL = 1e-6 * TWO_PI
CLUSTER_MIN = 4
UNITARITY_TOL = 1e-10


def wrap_energy(e):
    """Map angles onto ``(-pi, pi]``."""
    w = np.mod(np.asarray(e, dtype=np.float64) + math.pi, TWO_PI) - math.pi
    w = np.where(w <= -math.pi, w + TWO_PI, w)
    return w if w.ndim else float(w)


def build_floquet_matrix(
    field: CoinField, boundary: Boundary | str = Boundary.PERIODIC
) -> NDArray[np.complex128]:
    """Dense ``2N x 2N`` matrix of ``U = S (C (x) I)`` with periodic closure."""
    if Boundary(boundary) is not Boundary.PERIODIC:
        raise ValidationError("the dense operator is only unitary with periodic closure")
    n = field.n_sites
    c, s = field.cos, field.sin
    src = np.arange(n)
    right = (src + 1) % n
    left = (src - 1) % n
    u = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    # column (up, j): coin gives c|up> + s|down>, then up moves right, down left
    np.add.at(u, (right, src), c)
    np.add.at(u, (n + left, src), s)
    # column (down, j): coin gives s|up> - c|down>
    np.add.at(u, (right, n + src), s)
    np.add.at(u, (n + left, n + src), -c)
    return u


def unitarity_defect(u: NDArray[np.complex128]) -> float:
    """``max |(U^H U - I)_ij|``."""
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


@dataclass(frozen=True)
class QuasiEnergySpectrum:
    """Eigenvalues sorted by quasi-energy, with their Schur vectors.

    For a unitary (normal) matrix the Schur form is diagonal, so the columns
    of ``vectors`` are eigenvectors.
    """

    eigenvalues: NDArray[np.complex128]
    energies: NDArray[np.float64]
    vectors: NDArray[np.complex128] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return int(self.energies.size)


def quasi_energies(u: NDArray[np.complex128], vectors: bool = False) -> QuasiEnergySpectrum:
    """Diagonalize ``u`` and return its sorted quasi-energies.

    Raises
    ------
    ValidationError
        If ``u`` is not unitary within ``1e-10``.
    NumericalError
        If the Schur decomposition fails or eigenvalues leave the unit circle.
    """
    u = np.asarray(u, dtype=np.complex128)
    defect = unitarity_defect(u)
    if defect > UNITARITY_TOL:
        raise ValidationError(f"matrix is not unitary (defect {defect:.3e})")
    try:
        t, z = scipy.linalg.schur(u, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        cond = np.linalg.cond(u)
        raise NumericalError(
            f"Schur decomposition failed ({exc}); cond={cond:.3e}, "
            f"unitarity defect={defect:.3e}"
        ) from exc
    lam = np.diag(t).copy()
    off = np.max(np.abs(np.triu(t, 1))) if t.shape[0] > 1 else 0.0
    mod_err = float(np.max(np.abs(np.abs(lam) - 1.0)))
    if mod_err > 1e-9:
        raise NumericalError(f"eigenvalues leave unit circle by {mod_err:.3e}")
    if off > 1e-8:
        raise NumericalError(f"Schur form not diagonal (off-diagonal {off:.3e})")
    energies = wrap_energy(np.angle(lam))
    order = np.argsort(energies, kind="stable")
    return QuasiEnergySpectrum(
        eigenvalues=lam[order],
        energies=energies[order],
        vectors=z[:, order] if vectors else None,
    )


@dataclass
class BandReport:
    """Gaps, bands and flat (degenerate) clusters of a quasi-energy spectrum.

    ``gaps`` holds ``(lower, upper, width)``; ``upper`` is wrapped back onto
    ``(-pi, pi]`` so a gap across the branch cut has ``upper < lower``.
    ``bands`` holds ``(lower, upper, width, n_levels)`` for the stretches
    between gaps, and ``spacings`` lists all circular level spacings.
    """

    gaps: list[tuple[float, float, float]]
    flat_clusters: list[tuple[float, int]]
    bands: list[tuple[float, float, float, int]]
    spacings: NDArray[np.float64] = field(repr=False)
    gap_threshold: float = GAP_THRESHOLD
    degeneracy_tol: float = DEGENERACY_TOL
    cluster_min: int = CLUSTER_MIN

    @property
    def total_gap(self) -> float:
        return float(sum(g[2] for g in self.gaps))

    @property
    def bandwidths(self) -> list[float]:
        return [b[2] for b in self.bands]

    def as_dict(self) -> dict:
        return {
            "gap_threshold": self.gap_threshold,
            "degeneracy_tol": self.degeneracy_tol,
            "cluster_min": self.cluster_min,
            "total_gap": self.total_gap,
            "gaps": [{"lower": lo, "upper": hi, "width": w} for lo, hi, w in self.gaps],
            "bands": [
                {"lower": lo, "upper": hi, "width": w, "n_levels": k}
                for lo, hi, w, k in self.bands
            ],
            "flat_clusters": [
                {"energy": e, "multiplicity": m} for e, m in self.flat_clusters
            ],
            "level_spacings": [float(x) for x in self.spacings],
        }


def band_report(
    spec: QuasiEnergySpectrum,
    gap_threshold: float = GAP_THRESHOLD,
    degeneracy_tol: float = DEGENERACY_TOL,
    cluster_min: int = CLUSTER_MIN,
) -> BandReport:
    """Classify gaps wider than ``gap_threshold`` and flat clusters.

    A flat cluster is a run of at least ``cluster_min`` levels lying within
    ``degeneracy_tol`` of the first level of the run.
    """
    e = np.sort(np.asarray(spec.energies, dtype=np.float64))
    m = e.size
    if m == 0:
        return BandReport([], [], [], np.empty(0), gap_threshold, degeneracy_tol, cluster_min)
    spacings = np.empty(m)
    spacings[:-1] = np.diff(e)
    spacings[-1] = e[0] + TWO_PI - e[-1]

    # Unroll the circle just after its widest spacing.
    cut = int(np.argmax(spacings))
    start = (cut + 1) % m
    idx = (np.arange(m) + start) % m
    unrolled = e[idx] + np.where(idx < start, TWO_PI, 0.0)
    steps = np.diff(unrolled)

    gaps = []
    bands = []
    band_lo = 0
    # gaps inside the unrolled stretch, then the closing gap across the cut
    edges = [(i, steps[i]) for i in range(m - 1)] + [(m - 1, spacings[cut])]
    for i, width in edges:
        if width > gap_threshold:
            lo = unrolled[i]
            gaps.append((float(wrap_energy(lo)), float(wrap_energy(lo + width)), float(width)))
            band = unrolled[band_lo : i + 1]
            bands.append(
                (float(wrap_energy(band[0])), float(wrap_energy(band[-1])),
                 float(band[-1] - band[0]), int(band.size))
            )
            band_lo = i + 1
    if not gaps:
        bands = [(float(wrap_energy(unrolled[0])), float(wrap_energy(unrolled[-1])),
                  float(unrolled[-1] - unrolled[0]), m)]

    clusters = []
    i = 0
    while i < m:
        j = i + 1
        while j < m and unrolled[j] - unrolled[i] <= degeneracy_tol:
            j += 1
        if j - i >= cluster_min:
            clusters.append((float(wrap_energy(np.mean(unrolled[i:j]))), j - i))
        i = j

    return BandReport(
        gaps=sorted(gaps),
        flat_clusters=sorted(clusters),
        bands=bands,
        spacings=spacings,
        gap_threshold=gap_threshold,
        degeneracy_tol=degeneracy_tol,
        cluster_min=cluster_min,
    )
