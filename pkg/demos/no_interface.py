"""Initial data decaying only algebraically never forms an interface.

Compactly supported data invades at speed 2, so a probe at distance 2.0
observed at time 0.5 (outside the light cone of the front) stays at 0.
Data bounded below by m/(1 + ||x/eps||^n) instead drives the solution to 1
everywhere as eps -> 0: the probe value climbs to 1 down the ladder.
"""

import os

from fkpplab.studies import run_no_interface_study
from fkpplab.svgplot import line_plot

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

rep = run_no_interface_study(epsilons=(0.04, 0.02, 0.01), m=0.5, n=2.0,
                             probe_t=0.5, probe_x=2.0, dim=2)

print("probe u(t=0.5, ||x||=2.0), radial dimension 2")
print("eps      algebraic tail     compact control    u at origin")
for r in rep.rows:
    print(f"{r['epsilon']:<8g} {r['probe_algebraic']:<18.8f} "
          f"{r['probe_compact']:<18.3e} {r['probe_origin']:.6f}")
print()
for line in rep.summary_lines():
    print(line)

eps = [r["epsilon"] for r in rep.rows]
line_plot(os.path.join(OUT, "no_interface_probe.svg"),
          [(eps, [r["probe_algebraic"] for r in rep.rows], "algebraic data"),
           (eps, [r["probe_compact"] for r in rep.rows], "compact data")],
          title="probe beyond the front", xlabel="epsilon",
          ylabel="u(0.5, 2.0)", logx=True)
print(f"\nwrote {OUT}/no_interface_probe.svg")
