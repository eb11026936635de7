"""
CLI - Main Entry Point

Parses arguments into a RunConfig and dispatches to a subcommand.
Run with ``python -m src.cli.main <subcommand> ...``.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from src import config as settings
from src.cli.commands import COMMANDS
from src.errors import InvalidPolynomialError, InvalidSequenceError, MisuseError, WeierdivError
from src.schemas import OutputSpec, RunConfig

logger = logging.getLogger(__name__)

INPUT_ERROR = 2
FAILURE = 1


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default: WEIERDIV_THREADS)")
    parser.add_argument("--seed", type=int, default=None, help="Random seed (default: WEIERDIV_SEED)")
    parser.add_argument("--json", dest="json_path", help="Write the JSON report to this path")
    parser.add_argument("--csv", dest="csv_path", help="Write raw samples as CSV")
    parser.add_argument("--svg", dest="svg_path", help="Write a diagnostic SVG plot")


def _add_domain(parser: argparse.ArgumentParser):
    parser.add_argument("--poly", required=True, help="Polynomial JSON file")
    parser.add_argument("--eta", type=float, default=0.5, help="Half-side of the parameter box")
    parser.add_argument("--delta", type=float, default=None, help="Radius of the z-disc (default: calibrated)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weierdiv",
        description="Root geometry, Lojasiewicz exponents and formal Weierstrass division",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    seq_parser = subparsers.add_parser("seq", help="Weight sequence certificates")
    seq_parser.add_argument("--seq", help="Sequence JSON file (default: Gevrey 1)")
    seq_parser.add_argument("--power", type=float, default=None, help="Exponent s for the power sequence")
    _add_common(seq_parser)

    gamma_parser = subparsers.add_parser("gamma", help="Sample the root set and its branches")
    _add_domain(gamma_parser)
    gamma_parser.add_argument("--n-radial", type=int, default=160, help="Parameter samples per ray")
    gamma_parser.add_argument("--n-angular", type=int, default=32, help="Rays in the parameter square (m = 2)")
    _add_common(gamma_parser)

    sigma_parser = subparsers.add_parser("sigma", help="Estimate the Lojasiewicz exponent")
    _add_domain(sigma_parser)
    sigma_parser.add_argument("--radii", type=int, default=24)
    sigma_parser.add_argument("--angles", type=int, default=96)
    sigma_parser.add_argument("--bins", type=int, default=32)
    sigma_parser.add_argument("--window", type=int, default=12)
    _add_common(sigma_parser)

    divide_parser = subparsers.add_parser("divide", help="Formal Weierstrass division")
    divide_parser.add_argument("--poly", required=True, help="Polynomial JSON file")
    divide_parser.add_argument("--series", help="Series JSON file (default: extremal series of --seq)")
    divide_parser.add_argument("--seq", help="Sequence JSON file for the extremal series")
    divide_parser.add_argument("--truncation", "-N", type=int, default=24, help="Truncation order N")
    divide_parser.add_argument("--k-max", type=int, default=10, help="K for the optimality probe")
    _add_common(divide_parser)

    verify_parser = subparsers.add_parser("verify", help="Run the bundled example matrix")
    verify_parser.add_argument("--eta", type=float, default=0.5)
    _add_common(verify_parser)

    report_parser = subparsers.add_parser("report", help="Summarize JSON artifacts in a directory")
    report_parser.add_argument("--report-dir", required=True)
    _add_common(report_parser)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Flags override the environment."""
    values = {
        "subcommand": args.subcommand,
        "threads": args.threads if args.threads is not None else settings.THREADS,
        "rng_seed": args.seed if args.seed is not None else settings.SEED,
        "output": OutputSpec(json_path=args.json_path, csv_path=args.csv_path, svg_path=args.svg_path),
    }
    renames = {"poly": "poly_path", "seq": "seq_path", "series": "series_path"}
    for name in (
        "poly", "seq", "series", "report_dir", "eta", "delta", "radii", "angles", "bins", "window",
        "n_radial", "n_angular", "truncation", "power", "k_max",
    ):
        value = getattr(args, name, None)
        if value is not None:
            values[renames.get(name, name)] = value
    return RunConfig(**values)


def _error(payload: dict, code: int) -> int:
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def _validation_field(exc: ValidationError) -> Optional[str]:
    errors = exc.errors()
    if not errors:
        return None
    return ".".join(str(part) for part in errors[0]["loc"])


def run(config: RunConfig) -> int:
    """Dispatch one subcommand; returns the process exit code."""
    try:
        return COMMANDS[config.subcommand](config)
    except ValidationError as exc:
        return _error({"error": "invalid_input", "detail": str(exc), "field": _validation_field(exc)}, INPUT_ERROR)
    except json.JSONDecodeError as exc:
        return _error({"error": "invalid_json", "detail": str(exc), "field": None}, INPUT_ERROR)
    except FileNotFoundError as exc:
        return _error({"error": "file_not_found", "detail": str(exc), "field": exc.filename}, INPUT_ERROR)
    except (InvalidPolynomialError, InvalidSequenceError, MisuseError) as exc:
        return _error({"field": None, **exc.to_dict()}, INPUT_ERROR)
    except WeierdivError as exc:
        logger.error("%s failed: %s", config.subcommand, exc)
        return _error({"field": None, **exc.to_dict()}, FAILURE)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=settings.LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ValidationError as exc:
        return _error({"error": "invalid_input", "detail": str(exc), "field": _validation_field(exc)}, INPUT_ERROR)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
