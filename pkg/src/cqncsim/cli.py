"""Command-line front end.

Subcommands: spectrum, power-sweep, map2d, verify, check-cqnc, stability.
Exit codes: 0 success, 1 validation failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext

from .analysis import cqnc_check
from .core import from_config
from .oracle import build_statespace, stability
from .sweeps import (
    DEFAULT_GAIN_RATIOS,
    SweepAxis,
    SweepSpec,
    run_map2d,
    run_power_sweep,
    run_spectrum,
    run_verify,
    write_csv,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BAD_INPUT = 2


def _load_params(args):
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ValueError("config must be a JSON object")
    # CLI flags override config keys
    if getattr(args, "temperature", None) is not None:
        cfg["temperature_K"] = args.temperature
    if getattr(args, "g_over_gsql", None) is not None:
        cfg["g_over_gsql"] = args.g_over_gsql
    return from_config(cfg)


def _gain_ratios(args):
    if getattr(args, "gain_ratio", None):
        return tuple(float(x) for x in args.gain_ratio.split(","))
    return DEFAULT_GAIN_RATIOS


def _out_stream(args):
    if args.out:
        return open(args.out, "w")
    return nullcontext(sys.stdout)


def cmd_spectrum(args) -> int:
    p, drive = _load_params(args)
    axis = SweepAxis("omega_over_omega_m", args.omega_min, args.omega_max,
                     args.points, "log")
    spec = SweepSpec(axis, gain_ratios=_gain_ratios(args), temperature=p.temperature)
    header, cols, rows = run_spectrum(p, drive, spec, oracle=args.oracle)
    with _out_stream(args) as fh:
        write_csv(fh, header, cols, rows)
    return EXIT_OK


def cmd_power_sweep(args) -> int:
    p, drive = _load_params(args)
    axis = SweepAxis("g_over_gsql_sq", args.gsq_min, args.gsq_max, args.points, "log")
    spec = SweepSpec(axis, gain_ratios=_gain_ratios(args), temperature=p.temperature)
    header, cols, rows = run_power_sweep(p, drive, spec,
                                         on_resonance=not args.off_resonance,
                                         oracle=args.oracle)
    with _out_stream(args) as fh:
        write_csv(fh, header, cols, rows)
    return EXIT_OK


def cmd_map2d(args) -> int:
    p, drive = _load_params(args)
    axis1 = SweepAxis("g_over_gsql_sq", args.gsq_min, args.gsq_max, args.gsq_points, "log")
    axis2 = SweepAxis("omega_over_omega_m", args.omega_min, args.omega_max,
                      args.omega_points, "linear")
    ratios = _gain_ratios(args) if args.gain_ratio else (0.0, 0.1)
    spec = SweepSpec(axis1, axis2, gain_ratios=ratios, temperature=p.temperature)
    header, cols, rows = run_map2d(p, drive, spec)
    with _out_stream(args) as fh:
        write_csv(fh, header, cols, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(args.n, seed=args.seed)
    line = (f"verify: {report.n_sets} parameter sets x {report.n_freqs} frequencies, "
            f"max coefficient dev {report.max_coeff_dev:.3e}, "
            f"max PSD dev {report.max_psd_dev:.3e}, tolerance {report.tolerance:g}")
    out = f"{line} -> {'PASS' if report.passed else 'FAIL'}"
    print(out, file=sys.stderr if not report.passed else sys.stdout)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_check_cqnc(args) -> int:
    p, _ = _load_params(args)
    rep = cqnc_check(p)
    print(f"coupling_mismatch: {rep.coupling_mismatch:.6e}")
    print(f"damping_mismatch: {rep.damping_mismatch:.6e}")
    print(f"susceptibility_residual: {rep.susceptibility_residual:.6e}")
    print(f"ideal: {rep.ideal}")
    return EXIT_OK if rep.ideal else EXIT_VALIDATION


def cmd_stability(args) -> int:
    p, _ = _load_params(args)
    ratios = _gain_ratios(args) if args.gain_ratio else (p.G_opa / p.kappa,)
    for r in ratios:
        rep = stability(build_statespace(p.replace(G_opa=r * p.kappa)))
        parts = ",".join("%.6e" % v for v in rep.eigen_real_parts)
        print(f"G/kappa={r:g} stable={rep.stable} margin={rep.margin:.6e} "
              f"eigen_real_parts={parts}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cqncsim",
                                 description="Force-sensing noise spectra for the "
                                             "hybrid optomechanical sensor")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, oracle=True):
        sp.add_argument("--config", help="JSON config path")
        sp.add_argument("--out", help="output CSV path (default stdout)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--temperature", type=float, help="bath temperature (K)")
        sp.add_argument("--g-over-gsql", type=float, dest="g_over_gsql",
                        help="coupling in units of the resonant SQL optimum")
        sp.add_argument("--gain-ratio", help="comma list of G/kappa curve values")
        if oracle:
            sp.add_argument("--oracle", action="store_true",
                            help="add state-space oracle PSD columns")

    sp = sub.add_parser("spectrum", help="frequency sweep of all PSDs")
    common(sp)
    sp.add_argument("--omega-min", type=float, default=1e-2)
    sp.add_argument("--omega-max", type=float, default=1e2)
    sp.add_argument("--points", type=int, default=2001)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("power-sweep", help="drive-power sweep at fixed frequency")
    common(sp)
    sp.add_argument("--gsq-min", type=float, default=1e-3)
    sp.add_argument("--gsq-max", type=float, default=1e3)
    sp.add_argument("--points", type=int, default=601)
    sp.add_argument("--off-resonance", action="store_true",
                    help="probe at omega_m + 4*gamma_m instead of omega_m")
    sp.set_defaults(func=cmd_power_sweep)

    sp = sub.add_parser("map2d", help="PSD map over coupling and frequency")
    common(sp, oracle=False)
    sp.add_argument("--gsq-min", type=float, default=1e-2)
    sp.add_argument("--gsq-max", type=float, default=1e2)
    sp.add_argument("--gsq-points", type=int, default=101)
    sp.add_argument("--omega-min", type=float, default=0.5)
    sp.add_argument("--omega-max", type=float, default=1.5)
    sp.add_argument("--omega-points", type=int, default=101)
    sp.set_defaults(func=cmd_map2d)

    sp = sub.add_parser("verify", help="cross-validate closed forms against the oracle")
    sp.add_argument("--n", type=int, default=100, help="number of random parameter sets")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("check-cqnc", help="report cancellation-condition mismatches")
    common(sp, oracle=False)
    sp.set_defaults(func=cmd_check_cqnc)

    sp = sub.add_parser("stability", help="drift-matrix stability report")
    common(sp, oracle=False)
    sp.set_defaults(func=cmd_stability)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage already
        return int(e.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
