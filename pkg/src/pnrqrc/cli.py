"""Command-line entry point.

Subcommands: interp, classify, diagnose, show-network.  A config document
drives every run; --seed, --nsamp and --exact override the corresponding
config fields for quick experiments.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    ConfigError,
    load_config,
    run_classification,
    run_diagnostics,
    run_interpolation,
    show_network,
)


def _add_common(parser):
    parser.add_argument("--config", type=Path, help="config document (JSON)")
    parser.add_argument("--seed", type=int, help="override the sampling seed")
    parser.add_argument(
        "--out", type=Path, default=Path("results"), help="output directory"
    )
    parser.add_argument(
        "--exact", action="store_true", help="bypass sampling (exact mode)"
    )
    parser.add_argument("--nsamp", type=int, help="override detector.n_samp")


def _resolve(args) -> dict:
    config = {} if args.config is None else json.loads(args.config.read_text())
    if args.seed is not None:
        config["sampling_seed"] = args.seed
    if getattr(args, "nsamp", None) is not None:
        config.setdefault("detector", {})["n_samp"] = args.nsamp
    if getattr(args, "exact", False):
        config.setdefault("detector", {})["exact"] = True
    return load_config(config)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pnrqrc",
        description="photon number-resolving reservoir computing simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("interp", "classify", "diagnose"):
        _add_common(sub.add_parser(name))
    show = sub.add_parser("show-network")
    show.add_argument("--config", type=Path)
    show.add_argument("--seed", type=int, help="reservoir seed to display")
    args = parser.parse_args(argv)
    try:
        if args.command == "show-network":
            config = {} if args.config is None else json.loads(args.config.read_text())
            print(json.dumps(show_network(config, args.seed), indent=2, sort_keys=True))
            return 0
        config = _resolve(args)
        runner = {
            "interp": run_interpolation,
            "classify": run_classification,
            "diagnose": run_diagnostics,
        }[args.command]
        result = runner(config, args.out)
        print(json.dumps(result["cases"], indent=2, sort_keys=True))
        return 0
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
