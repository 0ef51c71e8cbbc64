"""
Does the coin state settle down?
================================

D(t) is the trace distance between the reduced coin states at
consecutive steps. A power-law decay means the coin state approaches an
asymptotic limit; a flat, noisy D(t) means it never does.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from aperiodic_qw import asymptotic_fit, run_walk

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

fig, ax = plt.subplots(figsize=(6, 4))
for label, theta0, nu in (("pi/4, nu=0", math.pi / 4, 0.0),
                          ("pi/4, nu=1", math.pi / 4, 1.0),
                          ("pi/2, nu=0", math.pi / 2, 0.0),
                          ("pi/2, nu=0.05", math.pi / 2, 0.05)):
    s = run_walk(theta0, nu, 1000, ("trace",))
    fit = asymptotic_fit(s.times, s["trace"], (50, 1000))
    print(f"{label:<15} exponent {fit.exponent:+.3f}  R2 {fit.r_squared:.3f}  "
          f"excluded zeros {fit.n_excluded}")
    ax.loglog(s.times[1:], s["trace"][1:], lw=0.7, label=label)
ax.set_xlabel("t")
ax.set_ylabel("D(t)")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "trace_distance.png", dpi=120)
print("figure in", OUT)
