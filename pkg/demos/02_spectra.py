"""
Quasi-energy spectra of the one-step operator
=============================================

The walk operator U is unitary, so its eigenvalues sit on the unit circle
and E_k = -i log(lambda_k) are quasi-energies. For homogeneous coins the
spectrum is known in closed form, sin E = +-cos(theta0) sin k. Adding
the aperiodic field first closes the gap, then (larger nu) opens many
small gaps and degenerate flat clusters.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from aperiodic_qw import band_report, build_field, build_floquet_matrix, quasi_energies

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)
N = 128

# homogeneous spectra against the Bloch formula
for theta0 in (math.pi / 4, math.pi / 2):
    spec = quasi_energies(build_floquet_matrix(build_field(theta0, 0.0, N)))
    rep = band_report(spec, gap_threshold=0.1)
    print(f"theta0={theta0:.4f} nu=0: {len(rep.gaps)} gaps, "
          f"flat clusters {[m for _, m in rep.flat_clusters]}")

# the nu trend at theta0 = pi/4
nus = (0.2, 0.3, 0.4, 0.8, 0.9, 1.0, 1.2, 1.3, 1.4)
fig, axes = plt.subplots(3, 3, figsize=(9, 7), sharey=True)
for ax, nu in zip(axes.flat, nus):
    spec = quasi_energies(build_floquet_matrix(build_field(math.pi / 4, nu, N)))
    rep = band_report(spec)
    ax.plot(np.arange(len(spec)), spec.energies, ".", ms=2)
    ax.set_title(f"nu={nu}: gap {rep.total_gap:.2f}, {len(rep.flat_clusters)} flat", fontsize=8)
    print(f"nu={nu}: total gap {rep.total_gap:.3f}, flat clusters {len(rep.flat_clusters)}")
for ax in axes[:, 0]:
    ax.set_ylabel("E_k")
fig.tight_layout()
fig.savefig(OUT / "spectra.png", dpi=120)
print("figure in", OUT)
