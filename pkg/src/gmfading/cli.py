"""Command-line driver for the fading-channel experiments.

Usage:
    gmfading <experiment> --seed <int> [--config cfg.json] [--out table.csv]
                          [--crn/--no-crn] [--json]

Experiments: det-verify, sweep-alpha, sweep-snr, conjecture, delta-limit,
theorem4, sanity.  Exit codes: 0 success, 1 validation error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .channel import ValidationError
from .determinant import FactorizationError
from .experiments import EXPERIMENTS, config_from_dict, emit_json, run


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # map usage errors to exit code 1
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gmfading",
                     description="Gauss-Markov fading information-rate experiments")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None,
                       help="JSON experiment configuration")
        p.add_argument("--seed", type=int, required=True,
                       help="base seed (required; no wall-clock default)")
        p.add_argument("--out", type=Path, default=None, help="output CSV path")
        crn = p.add_mutually_exclusive_group()
        crn.add_argument("--crn", dest="crn", action="store_true", default=None,
                         help="share random draws across the alpha grid")
        crn.add_argument("--no-crn", dest="crn", action="store_false",
                         help="independent draws per alpha grid point")
        p.add_argument("--json", action="store_true",
                       help="also write the rows as JSON next to the CSV")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        data = {}
        if args.config is not None:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        # CLI flags override config file values
        data["seed"] = args.seed
        if args.out is not None:
            data["output_path"] = str(args.out)
        if args.crn is not None:
            data["common_random_numbers"] = args.crn
        config = config_from_dict(data, args.experiment)
        result = run(config)
    except (ValidationError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FactorizationError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2

    if config.output_path and args.json:
        emit_json(result, str(Path(config.output_path).with_suffix(".json")))
    for key, verdict in result.verdicts.items():
        print(f"verdict {key}: {verdict}")
    flagged = [r for r in result.rows if not r.converged]
    print(f"{len(result.rows)} rows"
          + (f", {len(flagged)} not converged" if flagged else "")
          + (f" -> {config.output_path}" if config.output_path else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
