"""Command-line front end.

One subcommand per reproducible artifact: protocol design, pulse fitting,
closed/open-system simulation, robustness sweeps, the adiabatic baseline
curve, the amplitude table, and the data behind each figure.  Every run
writes a manifest.json with the fully resolved configuration so that
reruns are byte-reproducible.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .protocol import (design_sta, design_stirap, protocol_to_json,
                       InvalidParameters, InvalidWinding)
from .dynamics import (LindbladRates, propagate_schrodinger,
                       propagate_lindblad, sta_pulses, stirap_pulses,
                       write_population_csv)
from .pulsefit import (fitted_pulse_pair, pulse_amplitude, pulse_to_json,
                       reference_m1_fit)
from .analysis import (amplitude_error_sweep, decoherence_map,
                       fit_protocol_pulses, format_table,
                       stirap_infidelity_curve, table_one,
                       timing_error_sweep, write_map_csv, write_sweep_csv,
                       write_table_csv)

OUTDIR_ENV = "LAMBDA_STA_OUTDIR"


class ConfigError(Exception):
    pass


class ComputationError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lambda-sta",
        description="Shortcut-to-adiabaticity pulse design and simulation "
                    "for three-level Lambda systems.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file with default options "
                        "(overridden by explicit flags)")
    parser.add_argument("--outdir", default=None,
                        help=f"output directory (default: ${OUTDIR_ENV} or .)")

    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, steps=True):
        p.add_argument("--T", type=float, default=1.0, dest="duration",
                       help="total interaction time (default 1)")
        if steps:
            p.add_argument("--steps", type=int, default=10_000,
                           help="integration steps (default 10000)")

    p = sub.add_parser("design", help="build a shortcut protocol")
    p.add_argument("--m", type=int, default=1, help="winding integer")
    p.add_argument("--samples", type=int, default=1001)
    common(p, steps=False)

    p = sub.add_parser("fit", help="fit the shortcut schedules to Gaussians")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--samples", type=int, default=1001)
    common(p, steps=False)

    p = sub.add_parser("simulate", help="closed-system trajectory")
    p.add_argument("--protocol", default="sta-fit",
                   choices=["sta", "sta-fit", "sta-ref", "stirap"])
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--components", type=int, default=None)
    p.add_argument("--omega0", type=float, default=45.0)
    p.add_argument("--t0", type=float, default=None)
    p.add_argument("--tc", type=float, default=None)
    common(p)

    p = sub.add_parser("lindblad", help="open-system trajectory")
    p.add_argument("--protocol", default="sta-ref",
                   choices=["sta", "sta-fit", "sta-ref", "stirap"])
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--components", type=int, default=None)
    p.add_argument("--omega0", type=float, default=45.0)
    p.add_argument("--t0", type=float, default=None)
    p.add_argument("--tc", type=float, default=None)
    p.add_argument("--gamma1", type=float, default=0.0)
    p.add_argument("--gamma2", type=float, default=0.0)
    p.add_argument("--gamma-phi1", type=float, default=0.0)
    p.add_argument("--gamma-phi2", type=float, default=0.0)
    common(p)

    p = sub.add_parser("sweep", help="parameter-error robustness sweep")
    p.add_argument("--kind", required=True,
                   choices=["timing-error", "amp1-error", "amp2-error"])
    p.add_argument("--range", type=float, default=0.1, dest="error_range")
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--jobs", type=int, default=1)
    common(p)

    p = sub.add_parser("stirap-curve", help="baseline infidelity vs amplitude")
    p.add_argument("--min", type=float, default=1.0, dest="amp_min")
    p.add_argument("--max", type=float, default=80.0, dest="amp_max")
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--t0", type=float, default=None)
    p.add_argument("--tc", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1)
    common(p)

    p = sub.add_parser("table1", help="amplitude/population table per winding")
    p.add_argument("--max-m", type=int, default=7)
    p.add_argument("--fit-budget", type=int, default=None)
    common(p)

    for name, help_text in [
            ("fig1", "shortcut schedules vs their Gaussian fits"),
            ("fig2", "population trajectories for m = 1, 2, 3"),
            ("fig3", "baseline infidelity curve"),
            ("fig4", "parameter-error robustness sweeps"),
            ("fig5", "decoherence robustness maps")]:
        p = sub.add_parser(name, help=help_text)
        if name == "fig4":
            p.add_argument("--points", type=int, default=41)
        if name == "fig5":
            p.add_argument("--grid", type=int, default=21)
        p.add_argument("--jobs", type=int, default=1)
        common(p)

    return parser


def _apply_config_file(args, argv):
    """Overlay --config values under explicit flags."""
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            overrides = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    if not isinstance(overrides, dict):
        raise ConfigError("config file must hold a JSON object")
    explicit = {a.split("=")[0].lstrip("-").replace("-", "_")
                for a in argv if a.startswith("--")}
    for key, value in overrides.items():
        attr = key.replace("-", "_")
        if attr in explicit or not hasattr(args, attr):
            continue
        setattr(args, attr, value)
    return args


def _validate(args):
    checks = {
        "m": lambda v: v >= 1,
        "duration": lambda v: v > 0,
        "steps": lambda v: v >= 100,
        "samples": lambda v: v >= 100,
        "points": lambda v: v >= 2,
        "grid": lambda v: v >= 2,
        "omega0": lambda v: v > 0,
        "jobs": lambda v: v >= 1,
        "max_m": lambda v: 1 <= v <= 10,
        "error_range": lambda v: 0 < v <= 0.2,
    }
    for name, ok in checks.items():
        value = getattr(args, name, None)
        if value is not None and not ok(value):
            raise ConfigError(f"invalid value for --{name.replace('_', '-')}: {value}")


def _resolve_outdir(args):
    outdir = args.outdir or os.environ.get(OUTDIR_ENV) or "."
    path = Path(outdir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(outdir, args, outputs):
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("config", "outdir") and v is not None}
    doc = {"tool": "lambda-sta", "version": __version__,
           "config": config, "outputs": sorted(outputs)}
    (outdir / "manifest.json").write_text(json.dumps(doc, indent=2) + "\n")


def _protocol_pulses(args):
    """Resolve a --protocol choice into a pulse pair (and its amplitude)."""
    T = args.duration
    if args.protocol == "stirap":
        proto = design_stirap(args.omega0 / T, args.t0, args.tc, T)
        return stirap_pulses(proto), proto.omega0
    p = design_sta(args.m, T)
    if args.protocol == "sta":
        t = np.linspace(0, T, 1001)
        return sta_pulses(p), float(np.abs(p.omega1(t)).max())
    if args.protocol == "sta-ref":
        if args.m != 1:
            raise ConfigError("reference fit coefficients exist only for m=1")
        f1, f2 = reference_m1_fit(T)
        return fitted_pulse_pair(f1, f2), pulse_amplitude(f1, f2, 1001, T)
    (f1, _), (f2, _) = fit_protocol_pulses(p, args.components)
    return fitted_pulse_pair(f1, f2), pulse_amplitude(f1, f2, 1001, T)


def cmd_design(args, outdir):
    p = design_sta(args.m, args.duration)
    (outdir / "protocol.json").write_text(protocol_to_json(p) + "\n")
    t = np.linspace(0, args.duration, args.samples)
    with open(outdir / "schedule.csv", "w") as fh:
        fh.write("t_over_T,Omega1,Omega2,Omega,theta,phi\n")
        for ti in t:
            fh.write(f"{ti / args.duration:.12g},{float(p.omega1(ti)):.12g},"
                     f"{float(p.omega2(ti)):.12g},{float(p.omega(ti)):.12g},"
                     f"{float(p.theta(ti)):.12g},{float(p.phi(ti)):.12g}\n")
    return ["protocol.json", "schedule.csv"]


def cmd_fit(args, outdir):
    p = design_sta(args.m, args.duration)
    (f1, r1), (f2, r2) = fit_protocol_pulses(p, args.components, args.samples)
    (outdir / "pulse1.json").write_text(pulse_to_json(f1, r1) + "\n")
    (outdir / "pulse2.json").write_text(pulse_to_json(f2, r2) + "\n")
    return ["pulse1.json", "pulse2.json"]


def cmd_simulate(args, outdir):
    pulses, _ = _protocol_pulses(args)
    traj = propagate_schrodinger(pulses, horizon=args.duration,
                                 steps=args.steps,
                                 stride=max(1, args.steps // 1000))
    traj.to_csv(outdir / "trajectory.csv")
    return ["trajectory.csv"]


def cmd_lindblad(args, outdir):
    pulses, _ = _protocol_pulses(args)
    rates = LindbladRates(gamma1=args.gamma1, gamma2=args.gamma2,
                          gamma_phi1=args.gamma_phi1,
                          gamma_phi2=args.gamma_phi2)
    traj = propagate_lindblad(pulses, rates=rates, horizon=args.duration,
                              steps=args.steps)
    traj.to_csv(outdir / "trajectory.csv")
    return ["trajectory.csv"]


def cmd_sweep(args, outdir):
    f1, f2 = reference_m1_fit(args.duration)
    pulses = fitted_pulse_pair(f1, f2)
    if args.kind == "timing-error":
        data = timing_error_sweep(pulses, args.error_range, args.points,
                                  args.duration, args.steps, jobs=args.jobs)
        x_name = "dT_over_T"
    else:
        which = 1 if args.kind == "amp1-error" else 2
        data = amplitude_error_sweep(pulses, which, args.error_range,
                                     args.points, args.duration, args.steps,
                                     jobs=args.jobs)
        x_name = f"dOmega{which}_over_Omega{which}"
    write_sweep_csv(outdir / "sweep.csv", data, x_name)
    return ["sweep.csv"]


def cmd_stirap_curve(args, outdir, filename="stirap_curve.csv"):
    amplitudes = np.linspace(args.amp_min, args.amp_max, args.points)
    data = stirap_infidelity_curve(args.t0, args.tc, args.duration,
                                   amplitudes / args.duration, args.steps,
                                   jobs=args.jobs)
    write_sweep_csv(outdir / filename, data, "Omega0_T", "infidelity")
    return [filename]


def cmd_table1(args, outdir):
    rows = table_one(args.max_m, args.fit_budget, args.duration, args.steps)
    write_table_csv(outdir / "table1.csv", rows)
    (outdir / "table1.txt").write_text(format_table(rows) + "\n")
    return ["table1.csv", "table1.txt"]


def cmd_fig1(args, outdir):
    p = design_sta(1, args.duration)
    f1, f2 = reference_m1_fit(args.duration)
    t = np.linspace(0, args.duration, 1001)
    with open(outdir / "fig1.csv", "w") as fh:
        fh.write("t_over_T,abs_Omega1,abs_Omega1_fit,Omega2,Omega2_fit\n")
        for ti, a, b, c, d in zip(t / args.duration, np.abs(p.omega1(t)),
                                  np.abs(f1(t)), p.omega2(t), f2(t)):
            fh.write(f"{ti:.12g},{a:.12g},{b:.12g},{c:.12g},{d:.12g}\n")
    return ["fig1.csv"]


def cmd_fig2(args, outdir):
    outputs = []
    for label, m in zip("abc", (1, 2, 3)):
        p = design_sta(m, args.duration)
        traj = propagate_schrodinger(sta_pulses(p), horizon=args.duration,
                                     steps=args.steps,
                                     stride=max(1, args.steps // 1000))
        name = f"fig2{label}.csv"
        traj.to_csv(outdir / name)
        outputs.append(name)
    return outputs


def cmd_fig3(args, outdir):
    args.amp_min, args.amp_max, args.points = 1.0, 80.0, 50
    args.t0 = args.tc = None
    return cmd_stirap_curve(args, outdir, filename="fig3.csv")


def cmd_fig4(args, outdir):
    f1, f2 = reference_m1_fit(args.duration)
    pulses = fitted_pulse_pair(f1, f2)
    outputs = []
    data = timing_error_sweep(pulses, 0.1, args.points, args.duration,
                              args.steps, jobs=args.jobs)
    write_sweep_csv(outdir / "fig4_timing.csv", data, "dT_over_T")
    outputs.append("fig4_timing.csv")
    for which in (1, 2):
        data = amplitude_error_sweep(pulses, which, 0.1, args.points,
                                     args.duration, args.steps,
                                     jobs=args.jobs)
        name = f"fig4_amp{which}.csv"
        write_sweep_csv(outdir / name, data,
                        f"dOmega{which}_over_Omega{which}")
        outputs.append(name)
    return outputs


def cmd_fig5(args, outdir):
    f1, f2 = reference_m1_fit(args.duration)
    pulses = fitted_pulse_pair(f1, f2)
    amp = pulse_amplitude(f1, f2, 1001, args.duration)
    outputs = []
    for label, mode, names in [("a", "relaxation", ("Gamma1", "Gamma2")),
                               ("b", "dephasing", ("Gamma_phi1", "Gamma_phi2"))]:
        ratios, grid = decoherence_map(pulses, mode, 0.01, args.grid, amp,
                                       args.duration, jobs=args.jobs)
        name = f"fig5{label}.csv"
        write_map_csv(outdir / name, ratios, grid,
                      f"{names[0]}_over_amp", f"{names[1]}_over_amp")
        outputs.append(name)
    return outputs


COMMANDS = {
    "design": cmd_design,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "lindblad": cmd_lindblad,
    "sweep": cmd_sweep,
    "stirap-curve": cmd_stirap_curve,
    "table1": cmd_table1,
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "fig4": cmd_fig4,
    "fig5": cmd_fig5,
}


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_file(args, argv)
        _validate(args)
        outdir = _resolve_outdir(args)
    except (ConfigError, InvalidParameters, InvalidWinding) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        outputs = COMMANDS[args.command](args, outdir)
    except (ConfigError, InvalidParameters, InvalidWinding) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3
    _write_manifest(outdir, args, outputs)
    for name in outputs:
        print(outdir / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
