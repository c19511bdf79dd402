"""Command-line front end.

Exit codes: 0 on success, 2 for configuration or usage errors, 3 when the
engine rejects a point of the computation.
"""
from __future__ import annotations

import argparse
import sys

from .scenario import (
    REFERENCE_NAMES,
    SWEEP_PARAMETERS,
    ConfigError,
    Grid,
    Sweep,
    load_config,
    preset_config,
    run_scenario,
)
from .presets import PRESETS
from .two_photon import DomainError, HomodyneReadout

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="speedmeter", description="Quantum noise budgets of a Sagnac speed meter.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="PATH", help="JSON scenario file")
    src.add_argument("--preset", choices=sorted(PRESETS), help="builtin parameter set")
    p.add_argument("--sweep", metavar="NAME=v1,v2,...",
                   help=f"sweep one of: {', '.join(SWEEP_PARAMETERS)}")
    p.add_argument("--fmin", type=float, metavar="HZ")
    p.add_argument("--fmax", type=float, metavar="HZ")
    p.add_argument("--points", type=int)
    zeta = p.add_mutually_exclusive_group()
    zeta.add_argument("--zeta", type=float, metavar="RAD", help="homodyne angle")
    zeta.add_argument("--zeta-opt", action="store_true", help="optimise the angle per frequency")
    p.add_argument("--out", metavar="PREFIX", help="output path prefix")
    p.add_argument("--references", metavar="LIST",
                   help=f"comma-separated subset of {','.join(REFERENCE_NAMES)}")
    return p


def parse_sweep(text):
    name, sep, values = text.partition("=")
    if not sep or not values:
        raise ConfigError(f"--sweep: expected NAME=v1,v2,..., got {text!r}")
    if name not in SWEEP_PARAMETERS:
        raise ConfigError(f"--sweep: unknown parameter {name!r}")
    try:
        return Sweep(name, tuple(float(v) for v in values.split(",")))
    except ValueError:
        raise ConfigError(f"--sweep: non-numeric value in {values!r}") from None


def config_from_args(args):
    cfg = load_config(args.config) if args.config else preset_config(args.preset)
    changes = {}
    if any(v is not None for v in (args.fmin, args.fmax, args.points)):
        g = cfg.grid
        changes["grid"] = Grid(args.fmin if args.fmin is not None else g.f_min,
                               args.fmax if args.fmax is not None else g.f_max,
                               args.points if args.points is not None else g.points,
                               g.log_spaced)
    if args.sweep:
        changes["sweep"] = parse_sweep(args.sweep)
    if args.zeta is not None:
        changes["base"] = cfg.base.replace(
            readout=HomodyneReadout(args.zeta, cfg.base.readout.eta_pd))
        changes["zeta_opt"] = False
    if args.zeta_opt:
        changes["zeta_opt"] = True
    if args.out:
        changes["output_prefix"] = args.out
    if args.references is not None:
        changes["references"] = tuple(r for r in args.references.split(",") if r)
    return cfg.replace(**changes) if changes else cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_scenario(cfg)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    for run in result.runs:
        print(f"{run.label:<28} slope {run.slope:+.3f}  -> {run.path}")
    for name in result.references:
        print(f"reference {name:<18} -> {cfg.output_prefix}_ref_{name}.csv")
    print(f"summary -> {result.summary_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
