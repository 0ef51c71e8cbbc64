"""
(nu, theta0) diagrams
=====================

A coarse version of the transport and entanglement-enhancement diagrams.
Each cell is an independent walk, so the sweep runs in a process pool.
The full desk-scale grid is ``SweepSpec.desk_scale()`` (81 x 101 cells,
a few minutes on a workstation); here we use a smaller one.
"""

import math
import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from aperiodic_qw import SweepSpec, run_sweep

OUT = Path(__file__).with_name("output")

spec = SweepSpec(
    theta0s=tuple(k * math.pi / 20 for k in range(41)),
    nus=tuple(round(0.1 * k, 10) for k in range(41)),
    n_steps=300,
    workers=os.cpu_count() or 1,
)
res = run_sweep(spec)
csv_path, manifest_path = res.write(OUT / "sweep")
print("wrote", csv_path, "and", manifest_path)
print(f"{res.timings['cells']} cells in {res.timings['wall_seconds']:.1f} s")

extent = (0, 2 * math.pi, res.nus[0], res.nus[-1])
fig, axes = plt.subplots(1, 3, figsize=(12, 4), sharey=True)
for ax, data, title in ((axes[0], res.sp0, "<SP>"),
                        (axes[1], res.ipr_norm, "normalized <IPR>"),
                        (axes[2], res.mask.astype(float), "entropy gain")):
    im = ax.imshow(data, origin="lower", aspect="auto", extent=extent, cmap="Greys")
    ax.set_title(title)
    ax.set_xlabel("theta0")
    fig.colorbar(im, ax=ax)
axes[0].set_ylabel("nu")
fig.tight_layout()
fig.savefig(OUT / "diagrams.png", dpi=120)
