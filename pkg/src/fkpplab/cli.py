"""Command-line entry point.

Subcommands: wave, simulate, speed, thickness, generation, no-interface,
barriers.  Each takes --config <path> and --out <dir>; --svg adds plots.
Exit codes: 0 all checks pass, 1 usage/configuration error, 2 check
failure, 3 numerical error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import body_from_config, initial_from_config, load_config
from .errors import ConfigurationError, DomainError, NumericalError
from .grids import Grid
from .kinetics import eps_log
from .reporting import config_hash
from .solver import SimConfig, dump_checkpoint, run
from .studies import (
    algebraic_family_config,
    cached_wave,
    run_barrier_check,
    run_generation_study,
    run_no_interface_study,
    run_speed_study,
    run_thickness_study,
    run_wave_study,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors are 1
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _family_kwargs(cfg):
    kw = {}
    if "geometry" in cfg:
        kw["body"] = body_from_config(cfg)
    ini = cfg.get("initial", {})
    if "amplitude" in ini:
        kw["amplitude"] = ini["amplitude"]
    if "width" in ini:
        kw["width"] = ini["width"]
    sol = cfg.get("solver", {})
    if "t_end" in sol:
        kw["t_end"] = sol["t_end"]
    st = cfg.get("study", {})
    if "epsilons" in st:
        kw["epsilons"] = st["epsilons"]
    return kw


def _dispatch(args, cfg):
    st = cfg.get("study", {})
    if args.command == "speed":
        kw = _family_kwargs(cfg)
        if "fit_window" in st:
            kw["fit_window"] = st["fit_window"]
        return run_speed_study(**kw)
    if args.command == "thickness":
        return run_thickness_study(**_family_kwargs(cfg))
    if args.command == "generation":
        kw = _family_kwargs(cfg)
        kw.setdefault("amplitude", 0.5)
        kw.setdefault("t_end", 0.5)
        if "k" in st:
            kw["k"] = st["k"]
        return run_generation_study(**kw)
    if args.command == "no-interface":
        kw = {}
        ini = cfg.get("initial", {})
        for src, dst in (("m", "m"), ("n", "n")):
            if src in ini:
                kw[dst] = ini[src]
        if "epsilons" in st:
            kw["epsilons"] = st["epsilons"]
        for key in ("probe_t", "probe_x"):
            if key in st:
                kw[key] = st[key]
        if "dim" in cfg.get("solver", {}):
            kw["dim"] = cfg["solver"]["dim"]
        return run_no_interface_study(**kw)
    if args.command == "barriers":
        kw = {}
        if "kinetics" in cfg and "epsilon" in cfg["kinetics"]:
            kw["epsilon"] = cfg["kinetics"]["epsilon"]
        if "geometry" in cfg:
            kw["body"] = body_from_config(cfg)
        ini = cfg.get("initial", {})
        if "amplitude" in ini:
            kw["amplitude"] = ini["amplitude"]
        if "width" in ini:
            kw["width"] = ini["width"]
        if "t_end" in cfg.get("solver", {}):
            kw["t_end"] = cfg["solver"]["t_end"]
        for key in ("c_motion", "gen_window", "ordering_tol", "residual_tol"):
            if key in st:
                kw[key] = st[key]
        return run_barrier_check(**kw)
    if args.command == "wave":
        kw = {}
        w = cfg.get("wave", {})
        if "speeds" in w:
            kw["speeds"] = w["speeds"]
        if "dz" in w:
            kw["dz"] = w["dz"]
        if "z_span" in w:
            kw["z_span"] = w["z_span"]
        return run_wave_study(**kw)
    raise ConfigurationError(f"unknown command {args.command!r}")


def _run_simulate(args, cfg):
    from .reporting import ExperimentReport

    kin = cfg.get("kinetics", {})
    if "epsilon" not in kin:
        raise ConfigurationError("[kinetics] epsilon is required for simulate")
    eps = kin["epsilon"]
    sol = cfg.get("solver", {})
    mode = sol.get("mode", "line")
    t_end = sol.get("t_end", 1.0)
    checkpoints = sol.get("checkpoints", (t_end / 2.0, t_end))
    body = body_from_config(cfg) if cfg.get("initial", {}).get(
        "variant", "compact") == "compact" else None
    initial = initial_from_config(cfg, body)

    dx = eps / 8.0
    if initial.variant == "algebraic":
        sim = algebraic_family_config(eps, initial.m, initial.n, t_end,
                                      sol.get("extent", 4.0),
                                      dim=sol.get("dim", 2),
                                      checkpoints=checkpoints)
    else:
        import math

        need = body.diameter / 2.0 + 2.0 * t_end + 10.0 * eps_log(eps)
        ext = math.ceil(max(need, sol.get("extent", 0.0)) / dx + 2) * dx
        if mode == "line":
            grid = Grid("line", ((-ext, ext),), dx)
        elif mode == "radial":
            grid = Grid("radial", ((0.0, ext),), dx, dim=sol.get("dim", 2))
        else:
            grid = Grid("plane", ((-ext, ext), (-ext, ext)), dx)
        sim = SimConfig(eps, grid, initial, t_end=t_end,
                        checkpoint_times=tuple(checkpoints),
                        record=("sup", "min", "front_half", "layer_width"))
    traj = run(sim)
    report = ExperimentReport(
        "simulate",
        columns=("t", "sup", "min", "front_half", "layer_width"),
        metadata={"config_hash": config_hash({k: dict(v) for k, v in cfg.items()})},
    )
    ts = traj.series["t"]
    for tc, fld in traj.checkpoints:
        i = int(round(tc / (ts[1] - ts[0]))) if len(ts) > 1 else 0
        row = {name: traj.series[name][i] for name in sim.record
               if name in ("sup", "min", "front_half", "layer_width")}
        report.add_row(t=tc, **row)
        dump_checkpoint(fld, tc, os.path.join(args.out, f"checkpoint_t{tc:g}.csv"))
    sup0 = max(1.0, float(traj.series["sup"][0]))
    report.add_check("sup_norm_bounded",
                     float(traj.series["sup"].max()) <= sup0 + 1e-8)
    return report, traj


def _emit_svg(args, report):
    from .svgplot import line_plot

    rows = report.rows
    path = os.path.join(args.out, f"{report.study}.svg")
    if report.study in ("speed",):
        eps = [r["epsilon"] for r in rows]
        line_plot(path, [(eps, [r["abs_error"] for r in rows], "measured"),
                         (eps, [r["allowed_error"] for r in rows], "allowed")],
                  title="front speed error", xlabel="epsilon",
                  ylabel="|speed - 2|", logx=True, logy=True)
    elif report.study == "thickness":
        eps = [r["epsilon"] for r in rows]
        line_plot(path, [(eps, [r["width_over_eps_log"] for r in rows], "W/(eps|ln eps|)")],
                  title="layer width scaling", xlabel="epsilon",
                  ylabel="ratio", logx=True)
    elif report.study == "generation":
        el = [eps_log(r["epsilon"]) for r in rows]
        line_plot(path, [(el, [r["tau"] for r in rows], "tau")],
                  title="generation time", xlabel="eps |ln eps|", ylabel="tau")
    elif report.study == "no_interface":
        eps = [r["epsilon"] for r in rows]
        line_plot(path, [(eps, [r["probe_algebraic"] for r in rows], "algebraic"),
                         (eps, [r["probe_compact"] for r in rows], "compact")],
                  title="probe outside the front", xlabel="epsilon",
                  ylabel="u(t0, x0)", logx=True)
    elif report.study == "barriers":
        ts = [r["t"] for r in rows]
        line_plot(path, [(ts, [r["min_slack_sub"] for r in rows], "sub slack"),
                         (ts, [r["min_slack_super"] for r in rows], "super slack")],
                  title="barrier slack", xlabel="t", ylabel="slack")
    elif report.study == "wave":
        for r in rows:
            prof = cached_wave(r["c"]) if r["c"] >= 2 else cached_wave(
                r["c"], sign_changing=True)
            sub = slice(None, None, 50)
            line_plot(os.path.join(args.out, f"wave_c{r['c']:g}.svg"),
                      [(prof.z[sub], prof.U[sub], f"c={r['c']:g}")],
                      title="travelling wave", xlabel="z", ylabel="U")


def main(argv=None):
    parser = _Parser(prog="fkpplab",
                     description="Sharp-interface laboratory for the scaled "
                                 "Fisher-KPP equation")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("wave", "simulate", "speed", "thickness", "generation",
                 "no-interface", "barriers"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="INI config file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--svg", action="store_true", help="also emit SVG plots")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        os.makedirs(args.out, exist_ok=True)
        if args.command == "simulate":
            report, _ = _run_simulate(args, cfg)
        else:
            report = _dispatch(args, cfg)
        report.metadata.setdefault("config_hash",
                                   config_hash({k: dict(v) for k, v in cfg.items()}))
        report.write_csv(os.path.join(args.out, "report.csv"))
        if args.svg:
            _emit_svg(args, report)
        for line in report.summary_lines():
            print(line)
        if report.study == "wave":
            for r in report.rows:
                prof = cached_wave(r["c"]) if r["c"] >= 2 else cached_wave(
                    r["c"], sign_changing=True)
                prof.dump_table(os.path.join(args.out, f"wave_c{r['c']:g}.csv"))
        print(f"report written to {os.path.join(args.out, 'report.csv')}")
        return 0 if report.passed else 2
    except (ConfigurationError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
