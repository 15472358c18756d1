"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines
as they complete.  Heavy runs are shared through the in-process study cache,
so criterion 4 reuses criterion 3's ladder and the barrier run is computed
once.
"""

import math
import time

import numpy as np
from scipy.integrate import solve_ivp

from fkpplab.geometry import ConvexBody
from fkpplab.grids import Field, Grid, interpolate
from fkpplab.kinetics import (
    KineticsParams,
    bistable_logistic,
    eps_log,
    fitted_generation_alpha,
    logistic_flow,
    modified_logistic,
    positivity_time,
    semiflow_sensitivity,
)
from fkpplab.solver import InitialData, SimConfig, default_dt, step
from fkpplab.studies import (
    cached_run,
    compact_family_config,
    run_barrier_check,
    run_generation_study,
    run_no_interface_study,
    run_speed_study,
    run_thickness_study,
    run_wave_study,
)

LADDER = (0.04, 0.02, 0.01)


def _verdict(num, name, passed, detail, elapsed, budget):
    line = (f"ACCEPTANCE {num} {name}: {'PASS' if passed else 'FAIL'} "
            f"({detail}; {elapsed:.1f}s of {budget:.0f}s budget)")
    print("\n" + line)
    assert passed, line
    assert elapsed <= budget, f"criterion {num} exceeded its runtime budget: {line}"


def test_criterion_1_wave_correctness():
    t0 = time.perf_counter()
    rep = run_wave_study(speeds=(2.0, 2.2, 2.5, 3.0))
    detail = "; ".join(
        f"c={r['c']:g} res={r['residual_max']:.1e}" for r in rep.rows)
    lam25 = [r for r in rep.rows if r["c"] == 2.5][0]["lambda_fit"]
    ok = rep.passed and abs(lam25 - 0.5) <= 0.005
    _verdict(1, "wave-correctness", ok, detail + f"; lam(2.5)={lam25:.4f}",
             time.perf_counter() - t0, 5.0)


def test_criterion_2_minimal_speed_tail_law():
    t0 = time.perf_counter()
    from fkpplab.studies import cached_wave

    prof = cached_wave(2.0)
    gm, gp = prof.kpp_ratio_bounds(z_hi=15.0)
    ok = 0.0 < gm <= gp <= 10.0 * gm
    _verdict(2, "minimal-speed-tail-law", ok,
             f"gamma-={gm:.3f} gamma+={gp:.3f} ratio={gp / gm:.2f} <= 10",
             time.perf_counter() - t0, 2.0)


def test_criterion_3_front_speed():
    t0 = time.perf_counter()
    rep = run_speed_study(epsilons=LADDER, amplitude=0.9, width=0.25, t_end=1.0)
    detail = "; ".join(
        f"eps={r['epsilon']:g} |err|={r['abs_error']:.4f}<={r['allowed_error']:.3f}"
        for r in rep.rows)
    _verdict(3, "front-speed", rep.passed, detail, time.perf_counter() - t0, 60.0)


def test_criterion_4_thickness_scaling():
    t0 = time.perf_counter()
    rep = run_thickness_study(epsilons=LADDER, amplitude=0.9, width=0.25,
                              t_end=1.0)
    ratios = [r["width_over_eps_log"] for r in rep.rows]
    consts = [r["band_const_end"] for r in rep.rows]
    detail = (f"W/(eps|ln eps|) in [{min(ratios):.2f},{max(ratios):.2f}]"
              f" spread {max(ratios) / min(ratios):.2f};"
              f" C_meas in [{min(consts):.2f},{max(consts):.2f}]")
    _verdict(4, "thickness-scaling", rep.passed, detail,
             time.perf_counter() - t0, 60.0)


def test_criterion_5_generation_time():
    t0 = time.perf_counter()
    rep = run_generation_study(epsilons=LADDER, amplitude=0.5, t_end=0.5)
    alphas = [r["alpha"] for r in rep.rows]
    detail = (f"alpha in [{min(alphas):.2f},{max(alphas):.2f}]"
              f" spread {max(alphas) / min(alphas):.2f};"
              f" fit residual {rep.fits[0]['residual']:.4f}")
    _verdict(5, "generation-time", rep.passed, detail,
             time.perf_counter() - t0, 30.0)


def test_criterion_6_sandwich_suite():
    t0 = time.perf_counter()
    rep = run_barrier_check(epsilon=0.02)
    names = {c["name"]: c for c in rep.checks}
    ok = rep.passed and names["sabotage_detected"]["passed"]
    detail = "; ".join(f"{c['name']}={'ok' if c['passed'] else 'VIOLATED'}"
                       for c in rep.checks)
    _verdict(6, "sandwich-suite", ok, detail, time.perf_counter() - t0, 20.0)


def test_criterion_7_no_interface():
    t0 = time.perf_counter()
    rep = run_no_interface_study(epsilons=LADDER, m=0.5, n=2.0,
                                 probe_t=0.5, probe_x=2.0, dim=2)
    probes = [r["probe_algebraic"] for r in rep.rows]
    controls = [r["probe_compact"] for r in rep.rows]
    detail = (f"algebraic {'->'.join(f'{p:.4f}' for p in probes)};"
              f" controls max {max(controls):.1e}")
    _verdict(7, "no-interface", rep.passed, detail,
             time.perf_counter() - t0, 60.0)


def test_criterion_8_semiflow_suite():
    t0 = time.perf_counter()
    ok = True
    notes = []

    # logistic closed form vs adaptive RK, 1e-10
    worst = 0.0
    for xi, s in ((0.1, 2.3), (0.5, math.log(3.0)), (0.9, 4.0)):
        sol = solve_ivp(lambda _, z: z * (1 - z), (0, s), [xi],
                        method="DOP853", rtol=1e-12, atol=1e-14)
        worst = max(worst, abs(logistic_flow(xi, s) - sol.y[0, -1]))
    ok &= worst <= 1e-10
    notes.append(f"logistic vs RK {worst:.1e}")

    # positivity time vs measured crossing, 1%
    from fkpplab.kinetics import _modified_derivs

    p = KineticsParams(0.02)
    xi = p.threshold / 2
    ev = lambda _, w: w[0]
    ev.terminal, ev.direction = True, -1
    sol = solve_ivp(lambda _, w: _modified_derivs(w, p)[0], (0, 100.0), [xi],
                    events=ev, method="DOP853", rtol=1e-10, atol=1e-14)
    rel = abs(sol.t_events[0][0] - positivity_time(xi, p)) / positivity_time(xi, p)
    ok &= rel <= 0.01
    notes.append(f"crossing {rel:.1e}")

    # w_xi > 0 at 20 sampled points
    rng = np.random.default_rng(17)
    pos = all(semiflow_sensitivity(rng.uniform(0.2, 3.0),
                                   rng.uniform(-0.3, 1.5), p)[0] > 0
              for _ in range(20))
    ok &= pos
    notes.append(f"w_xi>0 {pos}")

    # modified rate below the bistable rate on [-2, 2]
    u = np.linspace(-2, 2, 10_000)
    gap = float((modified_logistic(u, p) - bistable_logistic(u)).max())
    ok &= gap <= 1e-12
    notes.append(f"rate gap {gap:.1e}")

    # threshold constant stable within a factor 2
    alphas = [fitted_generation_alpha(KineticsParams(e)) for e in LADDER]
    spread = max(alphas) / min(alphas)
    ok &= spread <= 2.0
    notes.append(f"alpha spread {spread:.2f}")

    _verdict(8, "semiflow-suite", ok, "; ".join(notes),
             time.perf_counter() - t0, 5.0)


def test_criterion_9_solver_numerics():
    t0 = time.perf_counter()
    ok = True
    notes = []
    eps = 0.04
    body = ConvexBody.interval(-0.5, 0.5)

    # Strang order from a Richardson triplet on smooth data
    dx = eps / 8
    grid = Grid("line", ((-1.2, 1.2),), dx)
    x = grid.axis(0)
    u0 = 0.8 * np.exp(-4 * x**2)
    t_end = 0.1
    sols = []
    for div in (1, 2, 4):
        dt = default_dt(grid, eps) / div
        n = math.ceil(t_end / dt)
        f = Field(grid, u0.copy())
        for _ in range(n):
            f = step(f, t_end / n, eps)
        sols.append(f.values)
    order = math.log2(np.linalg.norm(sols[0] - sols[1])
                      / np.linalg.norm(sols[1] - sols[2]))
    ok &= order >= 1.8
    notes.append(f"order {order:.2f}")

    # comparison preservation on 10 random ordered pairs
    rng = np.random.default_rng(23)
    dt = default_dt(grid, eps)
    preserved = True
    for _ in range(10):
        u = rng.uniform(0, 0.9, grid.shape)
        v = u + rng.uniform(0, 0.1, grid.shape)
        fu, fv = Field(grid, u), Field(grid, v)
        for _ in range(4):
            fu = step(fu, dt, eps)
            fv = step(fv, dt, eps)
        preserved &= bool(np.all(fv.values - fu.values >= -1e-12))
    ok &= preserved
    notes.append(f"comparison {preserved}")

    # sup bound 1 + eps + 1e-8 after the generation time
    cfg = compact_family_config(eps, body, 0.9, 0.25, t_end=0.5,
                                tail=(1.0, 0.3))
    traj = cached_run(cfg)
    sup = traj.series["sup"]
    t = traj.series["t"]
    sup_after = float(sup[t >= 2.0 * eps_log(eps)].max())
    ok &= sup_after <= 1.0 + eps + 1e-8
    notes.append(f"sup after gen {sup_after:.4f}")

    # radial vs plane consistency
    eps2, t2 = 0.1, 0.15
    dx2 = eps2 / 8
    ball = ConvexBody.ball((0.0, 0.0), 0.5)
    init = InitialData.compact(ball, 0.9, 0.25)
    ext = math.ceil((0.5 + 2 * t2 + 10 * eps_log(eps2)) / dx2 + 2) * dx2
    cfg_r = SimConfig(eps2, Grid("radial", ((0.0, ext),), dx2, dim=2), init,
                      t_end=t2, record=("sup", "min"), checkpoint_times=(t2,))
    cfg_p = SimConfig(eps2, Grid("plane", ((-ext, ext), (-ext, ext)), dx2),
                      init, t_end=t2, record=("sup", "min"),
                      checkpoint_times=(t2,))
    fr = cached_run(cfg_r).checkpoint_at(t2)
    fp = cached_run(cfg_p).checkpoint_at(t2)
    r = cfg_r.grid.axis(0)
    ur = fr.values
    up = np.array([interpolate(fp, (ri, 0.0)) for ri in r])
    front = (ur > 0.01) & (ur < 0.99)
    gap = float(np.max(np.abs(ur - up)[front]))
    ok &= gap <= 5e-3
    notes.append(f"radial-plane gap {gap:.1e}")

    _verdict(9, "solver-numerics", ok, "; ".join(notes),
             time.perf_counter() - t0, 30.0)
