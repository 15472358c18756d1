"""Front speed and layer thickness down an epsilon ladder.

The measured front speed converges to 2 as eps -> 0 (the deficit is the
slow logarithmic drift of pulled fronts, of order eps/t), and the layer
width between the levels eps and 1-2eps scales like eps |ln eps|.
"""

import os

from fkpplab.kinetics import eps_log
from fkpplab.studies import run_speed_study, run_thickness_study
from fkpplab.svgplot import line_plot

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

ladder = (0.04, 0.02, 0.01)
speed = run_speed_study(epsilons=ladder)
thick = run_thickness_study(epsilons=ladder)

print("eps      speed     |speed-2|   allowed    W(T)      W/(eps|ln eps|)")
for rs, rt in zip(speed.rows, thick.rows):
    print(f"{rs['epsilon']:<8g} {rs['speed']:.5f}   {rs['abs_error']:.5f}    "
          f"{rs['allowed_error']:.4f}     {rt['width_end']:.4f}    "
          f"{rt['width_over_eps_log']:.3f}")

print()
for line in speed.summary_lines():
    print(line)
for line in thick.summary_lines():
    print(line)

eps = [r["epsilon"] for r in speed.rows]
line_plot(os.path.join(OUT, "speed_error.svg"),
          [(eps, [r["abs_error"] for r in speed.rows], "measured"),
           ([e for e in eps], [10 * eps_log(e) for e in eps], "allowed")],
          title="front speed error vs epsilon", xlabel="epsilon",
          ylabel="|speed - 2|", logx=True, logy=True)
print(f"\nwrote {OUT}/speed_error.svg")
