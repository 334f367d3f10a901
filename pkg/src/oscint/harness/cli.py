"""Command-line entry point.

Subcommands:

* ``run``      -- one trajectory, full diagnostic stream (CSV or JSON).
* ``conserve`` -- long-time drift of the modified invariants over a
                  (method x stepsize) grid, series files plus summary tables.
* ``converge`` -- work-precision data against a refined reference solution.
* ``drift``    -- max energy error over nested time horizons.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..diagnostics import InadmissibleStepsize
from ..integrators import Method, NoConvergence, StepDiverged
from ..kernels import CoefficientVanishes
from ..problems import PRESETS
from . import experiments
from .experiments import ConfigError, ExperimentConfig

_METHODS = {m.value: m for m in Method}

_DEFAULTS = {
    "run": dict(preset="fpu_varying", methods=("erkn",), t_end=1000.0, stride=10),
    "conserve": dict(preset="fpu_varying", methods=("erkn", "sv"), t_end=1000.0,
                     stride=10),
    "converge": dict(preset="fpu_constant", methods=("erkn", "rkn", "sv"),
                     t_end=10.0, stride=1),
    "drift": dict(preset="fpu_constant", methods=("erkn", "rkn", "sv"),
                  t_end=1000.0, stride=10),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscint",
        description="Oscillatory-Hamiltonian integrator experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "single trajectory with the full diagnostic stream"),
        ("conserve", "long-time drift of the modified action and energy"),
        ("converge", "global error versus work at t_end"),
        ("drift", "max energy error over nested time horizons"),
    ):
        p = sub.add_parser(name, help=help_text)
        d = _DEFAULTS[name]
        p.add_argument("--preset", default=d["preset"], choices=sorted(PRESETS))
        p.add_argument(
            "--method",
            action="append",
            choices=sorted(_METHODS),
            help=f"may repeat; default {'+'.join(d['methods'])}",
        )
        p.add_argument("--eps", type=float, default=0.01)
        p.add_argument(
            "--h",
            action="append",
            type=float,
            help="stepsize, may repeat; must divide t_end into whole steps",
        )
        p.add_argument("--t-end", type=float, default=d["t_end"])
        p.add_argument("--stride", type=int, default=d["stride"],
                       help="sample every this many steps")
        p.add_argument("--out", required=True,
                       help="output file (directory for conserve)")
        if name == "run":
            p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _default_h_list(command: str, eps: float) -> tuple[float, ...]:
    if command in ("run", "conserve"):
        if command == "run":
            return (eps,)
        return (eps, eps / 2.0, eps / 4.0)
    if command == "converge":
        return tuple(0.01 * 0.5 ** k for k in range(4))
    return (0.005,)  # drift


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    methods = tuple(
        _METHODS[m] for m in (args.method or _DEFAULTS[args.command]["methods"])
    )
    h_list = tuple(args.h) if args.h else _default_h_list(args.command, args.eps)
    return ExperimentConfig(
        preset=args.preset,
        methods=methods,
        eps=args.eps,
        h_list=h_list,
        t_end=args.t_end,
        sample_stride=args.stride,
        output_path=Path(args.out),
        output_format=getattr(args, "format", "csv"),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"oscint: config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "run":
            experiments.run_single(config)
        elif args.command == "conserve":
            aborted = experiments.run_conserve(config)
            if aborted:
                print(f"oscint: {aborted} run(s) aborted on divergence",
                      file=sys.stderr)
                return 3
        elif args.command == "converge":
            experiments.run_converge(config)
        else:
            experiments.run_drift(config)
    except ConfigError as exc:
        print(f"oscint: config error: {exc}", file=sys.stderr)
        return 2
    except (StepDiverged, NoConvergence, InadmissibleStepsize,
            CoefficientVanishes) as exc:
        print(f"oscint: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
