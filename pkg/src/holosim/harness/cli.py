"""Command-line entry point: ``holosim {evolve,tomo,sweep,plot,selftest}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..engine import IntegrationError
from ..protocols import Protocol, protocol_duration
from .config import (
    ConfigError, RunConfig, build_run_config, build_sweep_spec, kappa_khz_to_per_s, load_config,
    rabi_khz_to_rad_s,
)
from .experiments import (
    SWEEP_COLUMNS, TRAJECTORY_COLUMNS, asymmetry, run_sweep, run_tomography, run_trajectory,
)
from .output import PlotError, csv_text, plot_csv, write_csv, write_json

EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _run_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, help="JSON config; flags override its keys")
    p.add_argument("--protocol", dest="protocols", help="comma list of NHQC,BNHQC,CBNHQC")
    p.add_argument("--gate", help="sqrtx | tgate | theta,phi,gamma (radians)")
    p.add_argument("--rabi-khz", dest="rabi_khz", type=float, help="Omega/2pi in kHz")
    p.add_argument("--kappa-khz", dest="kappa_khz", type=float, help="decay rate in kHz (1e3/s)")
    p.add_argument("--delta", type=float, help="detuning error in units of Omega")
    p.add_argument("--delta-omega", dest="delta_omega", type=float, help="fractional Rabi error")
    p.add_argument("--detuning-mode", dest="detuning_mode", choices=("common", "differential"))
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", dest="steps_per_segment", type=int)
    p.add_argument("--stride", dest="record_stride", type=int, help="trajectory record stride")
    p.add_argument("--initial-state", dest="initial_state", choices=("g", "e", "gx", "gy"))
    p.add_argument("--out", type=Path, help="output path (default: stdout where possible)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holosim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _run_options()
    sub.add_parser("evolve", parents=[common], help="population/fidelity trajectory CSV")
    tomo = sub.add_parser("tomo", parents=[common], help="process tomography JSON + chi CSV")
    tomo.add_argument("--chi-csv", type=Path, help="histogram CSV path (default: <out>.chi.csv)")
    sweep = sub.add_parser("sweep", parents=[common], help="fidelity sweep CSV")
    sweep.add_argument("--param", choices=("kappa", "delta", "delta_omega"))
    sweep.add_argument("--from", dest="start", type=float)
    sweep.add_argument("--to", dest="stop", type=float)
    sweep.add_argument("--points", type=int)
    sweep.add_argument("--workers", type=int, default=1)
    plot = sub.add_parser("plot", help="SVG line chart of a CSV produced by this tool")
    plot.add_argument("csv", type=Path)
    plot.add_argument("--kind", choices=("traj", "sweep"), required=True)
    plot.add_argument("--column", help="y column for sweep plots (default state_fidelity)")
    plot.add_argument("--out", type=Path)
    selftest = sub.add_parser("selftest", help="print unit conversions and gate durations")
    selftest.add_argument("--rabi-khz", dest="rabi_khz", type=float, default=47.1)
    selftest.add_argument("--kappa-khz", dest="kappa_khz", type=float, default=5.0)
    return parser


_RUN_KEYS = ("protocols", "gate", "rabi_khz", "kappa_khz", "delta", "delta_omega", "detuning_mode",
             "shots", "seed", "steps_per_segment", "record_stride", "initial_state")


def _config_from_args(args):
    base, sweep = load_config(args.config) if args.config else ({}, None)
    overrides = {k: getattr(args, k) for k in _RUN_KEYS}
    return build_run_config(base, overrides), sweep


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="")


def cmd_evolve(args) -> None:
    config, _ = _config_from_args(args)
    rows = [row for proto in config.protocols for row in run_trajectory(config, proto)]
    _emit(csv_text(rows, TRAJECTORY_COLUMNS), args.out)


def cmd_tomo(args) -> None:
    config, _ = _config_from_args(args)
    doc = {"config": config.to_dict(), "basis": ["I", "X", "Y", "Z"], "protocols": {}}
    hist = []
    for proto in config.protocols:
        res = run_tomography(config, proto)
        doc["protocols"][proto.value] = {
            "process_fidelity": res["process_fidelity"],
            "process_fidelity_projected": res["process_fidelity_projected"],
            "chi_trace": float(res["chi"].trace().real),
            "chi_real": res["chi"].real,
            "chi_imag": res["chi"].imag,
            "chi_ideal_real": res["chi_ideal"].real,
            "chi_ideal_imag": res["chi_ideal"].imag,
            "records": {k: r.as_dict() for k, r in res["records"].items()},
        }
        labels = doc["basis"]
        for i in range(4):
            for j in range(4):
                hist.append({"protocol": proto.value, "row": labels[i], "col": labels[j],
                             "re": res["chi"][i, j].real, "im": res["chi"][i, j].imag})
    columns = ("protocol", "row", "col", "re", "im")
    if args.out is None:
        import json
        from .output import rounded
        sys.stdout.write(json.dumps(rounded(doc), indent=2) + "\n")
        if args.chi_csv:
            write_csv(args.chi_csv, hist, columns)
        return
    write_json(args.out, doc)
    write_csv(args.chi_csv or args.out.with_suffix(".chi.csv"), hist, columns)


def cmd_sweep(args) -> None:
    config, sweep_doc = _config_from_args(args)
    spec = build_sweep_spec(sweep_doc, args.param, args.start, args.stop, args.points)
    if args.workers < 1:
        raise ConfigError("workers must be >= 1")
    rows = run_sweep(config, spec, workers=args.workers)
    _emit(csv_text(rows, SWEEP_COLUMNS), args.out)
    if spec.parameter in ("delta", "delta_omega"):
        asym = asymmetry(rows)
        text = csv_text(asym, ("protocol", "abs_value", "difference"))
        if args.out is not None:
            Path(args.out).with_suffix(".asymmetry.csv").write_text(text, newline="")
        print("fidelity asymmetry F(+x) - F(-x):", file=sys.stderr)
        for r in asym:
            if abs(r["abs_value"] - max(a["abs_value"] for a in asym)) < 1e-12:
                print(f"  {r['protocol']:7s} x={r['abs_value']:.4g}: {r['difference']:+.5f}", file=sys.stderr)


def cmd_plot(args) -> None:
    out = args.out or args.csv.with_suffix(".svg")
    plot_csv(args.csv, args.kind, out, args.column)


def cmd_selftest(args) -> None:
    omega = rabi_khz_to_rad_s(args.rabi_khz)
    print(f"rabi_khz  {args.rabi_khz:g} kHz -> Omega = 2*pi*1e3*f = {omega:.9g} rad/s")
    print(f"kappa_khz {args.kappa_khz:g} kHz -> kappa = 1e3*k = {kappa_khz_to_per_s(args.kappa_khz):.9g} 1/s")
    params = RunConfig(rabi_khz=args.rabi_khz).gate_params()
    for proto in Protocol:
        print(f"{proto.value:7s} sqrtx duration {protocol_duration(proto, params) * 1e6:.6f} us")


COMMANDS = {"evolve": cmd_evolve, "tomo": cmd_tomo, "sweep": cmd_sweep, "plot": cmd_plot,
            "selftest": cmd_selftest}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (ConfigError, PlotError) as exc:
        print(f"holosim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"holosim: integration failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
