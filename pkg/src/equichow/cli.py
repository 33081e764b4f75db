"""Command-line front end.

    equichow betti --fan p2.json --d 3
    equichow chow --fan P2 --d 2 --format text
    equichow verify-paper-example

Exit codes: 0 success, 1 validation failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from . import report as rep
from .chowring import chow_structure_constants, equivariant_graded_bases
from .toricfan import F1, P1xP1, P2, Fan, FanError, load_fan

log = logging.getLogger("equichow")

COMMANDS = ("fixed-points", "subtori", "components", "relations", "equivariant-basis",
            "betti", "chow", "verify-paper-example")
BUILTIN_FANS = {"P2": P2, "P1xP1": P1xP1, "F1": F1}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fan: str | None = None
    d: int = 1
    fmt: str = "json"
    cap: int | None = None
    jobs: int = 1


def resolve_fan(source: str) -> Fan:
    path = Path(source)
    if not path.exists() and source in BUILTIN_FANS:
        return BUILTIN_FANS[source]
    try:
        return load_fan(path)
    except FileNotFoundError:
        raise InputError(f"{source}: no such file (built-in fans: {', '.join(BUILTIN_FANS)})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except FanError as exc:
        raise InputError(f"{source}: {exc}") from None


def run(config: RunConfig) -> tuple[dict, bool]:
    """Build the report for one command; returns (report, passed)."""
    if config.d < 0:
        raise InputError("--d must be non-negative")
    if config.cap is not None and config.cap < 0:
        raise InputError("--cap must be non-negative")
    if config.command == "verify-paper-example":
        from .hilb3p2 import verify_paper_example
        result = verify_paper_example(cap=6 if config.cap is None else config.cap)
        return {"command": config.command, "fan": rep.fan_section(P2), "d": 3, "verification": result}, \
            result["passed"]
    if config.fan is None:
        raise InputError(f"{config.command} needs --fan")
    fan = resolve_fan(config.fan)
    d = config.d
    cap = 2 * d if config.cap is None else config.cap
    out = {"command": config.command, "fan": rep.fan_section(fan), "d": d}
    passed = True
    if config.command == "fixed-points":
        out["fixed_points"] = rep.fixed_points_section(fan, d)
    elif config.command == "subtori":
        out["subtori"] = rep.subtori_section(fan, d)
    elif config.command == "components":
        out["subtori"] = rep.subtori_section(fan, d, generators=True)
    elif config.command == "relations":
        out["subtori"] = rep.subtori_section(fan, d, relations=True)
    elif config.command == "equivariant-basis":
        out["equivariant_basis"] = rep.equivariant_basis_section(equivariant_graded_bases(fan, d, cap, config.jobs))
    elif config.command == "betti":
        betti, gottsche = rep.betti_section(fan, d)
        out["betti"] = betti
        out["gottsche"] = gottsche
        passed = betti == gottsche
    elif config.command == "chow":
        ring = chow_structure_constants(fan, d, cap=cap, jobs=config.jobs)
        out["chow"] = rep.chow_section(ring)
    else:
        raise InputError(f"unknown command {config.command}")
    return out, passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equichow", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--fan", help="fan JSON file {\"rays\": [[1,0],...]} or one of P2, P1xP1, F1")
    parser.add_argument("--d", type=int, default=1, help="number of points (default 1)")
    parser.add_argument("--cap", type=int, default=None, help="degree cap (default 2d)")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for graded pieces")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    config = RunConfig(args.command, args.fan, args.d, args.format, args.cap, max(1, args.jobs))
    try:
        report, passed = run(config)
    except InputError as exc:
        print(f"equichow: input error: {exc}", file=sys.stderr)
        return 2
    try:
        rep.validate_report(report)
    except jsonschema.ValidationError as exc:
        print(f"equichow: report does not match schema: {exc.message}", file=sys.stderr)
        return 1
    if config.fmt == "json":
        if config.command == "betti":
            print(json.dumps(report["betti"]))
        else:
            print(json.dumps(report, indent=1, sort_keys=True))
    else:
        sys.stdout.write(rep.render_text(report))
    if not passed:
        print(f"equichow: {config.command} check failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
