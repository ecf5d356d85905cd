"""Command-line entry point: ``oss-forge <stage|all> --config PATH``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from .config import ConfigError, load_config
from .pipeline import STAGES, Pipeline, StageError

EXIT_OK = 0
EXIT_STAGE_FAILED = 1
EXIT_BAD_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oss-forge", description="Seed-driven instruction data pipeline.")
    parser.add_argument("stage", choices=[*STAGES, "all"])
    parser.add_argument("--config", required=True, help="pipeline config (YAML or JSON)")
    parser.add_argument("--force", action="store_true", help="re-run stages whose outputs are current")
    parser.add_argument("--stage-dir", help="artifact directory; overrides output_dir in the config")
    parser.add_argument("--concurrency", type=int, help="max in-flight teacher requests")
    parser.add_argument("--dry-run", action="store_true", help="validate the config and print the plan")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print("invalid config:", file=sys.stderr)
        for err in exc.errors:
            print(f"  {err}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    if args.concurrency is not None and args.concurrency < 1:
        print("invalid config:\n  --concurrency: must be >= 1", file=sys.stderr)
        return EXIT_BAD_CONFIG

    stages = list(STAGES) if args.stage == "all" else [args.stage]
    pipe = Pipeline(cfg, args.stage_dir, force=args.force, concurrency=args.concurrency)

    if args.dry_run:
        print(f"config ok (hash {pipe.config_hash[:16]}), output {pipe.out}")
        for s in stages:
            state = "current, would skip" if pipe.is_current(s) and not args.force else "would run"
            print(f"  {s}: {state}")
        return EXIT_OK

    try:
        pipe.run(stages)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
