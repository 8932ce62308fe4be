"""Command-line front end.

Subcommands: ``sweep``, ``figure <fig1..fig4>``, ``transitions``, ``validate``.
Exit status is 0 on success, 1 on validation failure, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import sweep
from .statedyn import SystemParams

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

DEFAULTS = {
    "nbar": None,
    "p": None,
    "gamma": 1.0,
    "tmax": 15.0,
    "points": 1500,
    "grid": "linear",
    "partitions": "cc,rr",
    "format": "csv",
    "out": None,
    "seed": 42,
    "cases": 100,
}
_GRID_KINDS = {"linear": "linear", "logstart": "log-dense-start"}
_PARTITION_KEYS = {"cc": "cavities", "rr": "reservoirs"}


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, *names: str):
    # defaults stay None so config-file values are only overridden by explicit flags
    spec = {
        "nbar": dict(type=float, help="mean photon number per cavity"),
        "p": dict(type=float, help="weight of the even entangled coherent state"),
        "gamma": dict(type=float, help="decay rate"),
        "tmax": dict(type=float, help="end of the grid in units of gamma*t"),
        "points": dict(type=int, help="number of grid points"),
        "grid": dict(choices=sorted(_GRID_KINDS), help="grid kind"),
        "partitions": dict(help="comma-separated subset of cc,rr"),
        "format": dict(choices=["csv", "json"], help="output format"),
        "out": dict(help="output file (sweep, transitions, validate) or directory (figure)"),
        "seed": dict(type=int, help="random seed"),
        "cases": dict(type=int, help="number of random cases"),
    }
    for name in names:
        p.add_argument(f"--{name}", default=None, **spec[name])
    p.add_argument("--config", default=None, help="JSON file with default flag values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catcorr",
        description="Correlation transfer between damped entangled-coherent-state cavities and their reservoirs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="I, C, D for both partitions on a time grid")
    _add_common(p, "nbar", "p", "gamma", "tmax", "points", "grid", "partitions", "format", "out")

    p = sub.add_parser("figure", help="write the data behind one figure preset")
    p.add_argument("name", choices=["fig1", "fig2", "fig3", "fig4"])
    _add_common(p, "format", "out")

    p = sub.add_parser("transitions", help="analytic and detected characteristic times (JSON)")
    _add_common(p, "nbar", "p", "gamma", "out")

    p = sub.add_parser("validate", help="randomized invariant checks")
    _add_common(p, "seed", "cases", "out")
    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        opts.update(cfg)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def _params(opts: dict) -> SystemParams:
    if opts["nbar"] is None or opts["p"] is None:
        raise UsageError("--nbar and --p are required")
    try:
        return SystemParams(float(opts["nbar"]), float(opts["p"]), float(opts["gamma"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_sweep(opts: dict) -> int:
    params = _params(opts)
    keys = [k.strip() for k in str(opts["partitions"]).split(",") if k.strip()]
    if not keys or any(k not in _PARTITION_KEYS for k in keys):
        raise UsageError("--partitions must be a comma-separated subset of cc,rr")
    if opts["grid"] not in _GRID_KINDS:
        raise UsageError(f"unknown grid {opts['grid']!r}")
    try:
        config = sweep.SweepConfig(
            params=params,
            t_max_gamma=float(opts["tmax"]),
            n_points=int(opts["points"]),
            grid_kind=_GRID_KINDS[opts["grid"]],
            partitions=tuple(_PARTITION_KEYS[k] for k in keys),
            output_format=opts["format"],
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(sweep.render_rows(sweep.run_sweep(config), config.output_format), opts["out"])
    return EXIT_OK


def cmd_figure(name: str, opts: dict) -> int:
    if opts["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {opts['format']!r}")
    outdir = Path(opts["out"] or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    for fname, text in sweep.figure_outputs(name, opts["format"]).items():
        (outdir / fname).write_text(text)
        print(outdir / fname)
    return EXIT_OK


def cmd_transitions(opts: dict) -> int:
    _emit(sweep.to_json(sweep.run_transitions(_params(opts))), opts["out"])
    return EXIT_OK


def cmd_validate(opts: dict) -> int:
    try:
        report = sweep.run_validate(int(opts["seed"]), int(opts["cases"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))
    summary = report.to_dict()
    _emit(sweep.to_json(summary), opts["out"])
    if opts["out"] is not None:
        print(f"{summary['passed_cases']}/{summary['n_cases']} cases passed ({summary['status']})")
    return EXIT_OK if report.ok else EXIT_VALIDATION


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve_options(args)
        if args.command == "sweep":
            return cmd_sweep(opts)
        if args.command == "figure":
            return cmd_figure(args.name, opts)
        if args.command == "transitions":
            return cmd_transitions(opts)
        return cmd_validate(opts)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2


if __name__ == "__main__":
    sys.exit(main())
