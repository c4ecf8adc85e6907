"""``tensordirac`` command line.

Exit status: 0 when every check passes, 1 when any check fails, 3 when
checks only warn, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import ConfigParse
from .report import EXIT_USAGE, dumps, exit_code, render_text
from .runner import run_evolve, run_spectrum, run_verify
from .scenario import apply_tol_scale, load_config, load_preset, parse_scenario, preset_names


def _common(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", type=Path, help="scenario JSON file")
    src.add_argument("--preset", help="embedded scenario name (see --list-presets)")
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply all tolerances (default 1)")
    p.add_argument("--out", type=Path, help="directory for report and data files")
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensordirac", description=__doc__.splitlines()[0])
    parser.add_argument("--list-presets", action="store_true", help="print embedded scenario names and exit")
    sub = parser.add_subparsers(dest="command")
    for name, helptext in (
        ("verify", "run the algebraic verification checks"),
        ("spectrum", "grid spectrum plus a random-similarity twin"),
        ("evolve", "Crank-Nicolson evolution and current conservation"),
    ):
        _common(sub.add_parser(name, help=helptext))
    rep = sub.add_parser("report", help="re-render a stored report")
    rep.add_argument("path", type=Path)
    rep.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def _scenario(args):
    if args.config is not None:
        data = load_config(args.config)
    else:
        data = load_preset(args.preset or "minkowski-dirac")
    sc = parse_scenario(data, seed_override=args.seed)
    return apply_tol_scale(sc, args.tol_scale) if args.tol_scale != 1.0 else sc


def _emit(report: dict, fmt: str, out: Path | None) -> None:
    text = dumps(report) if fmt == "json" else render_text(report)
    if out is not None:
        (out / "report.json").write_text(dumps(report))
    sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    if args.list_presets:
        print("\n".join(preset_names()))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "report":
            report = json.loads(args.path.read_text())
            _emit(report, args.format, None)
            return exit_code(report)
        sc = _scenario(args)
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
        if args.command == "verify":
            report = run_verify(sc, args.tol_scale)
        elif args.command == "spectrum":
            report = run_spectrum(sc, args.out, args.tol_scale)
        else:
            report = run_evolve(sc, args.out, args.tol_scale)
    except (ConfigParse, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"tensordirac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args.format, args.out)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
