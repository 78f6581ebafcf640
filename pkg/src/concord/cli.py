"""Command line entry point: ``concord run | check | stats``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from concord.dsl import ConcordSyntaxError, load_config
from concord.pipeline import EXIT_BAD_CONFIG, RunOptions, run
from concord.stats import compute_stats


def _setup_logging() -> None:
    level = os.environ.get("CONCORD_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def cmd_check(args) -> int:
    try:
        model = load_config(args.config)
    except ConcordSyntaxError as exc:
        for d in exc.errors:
            print(d, file=sys.stderr)
        return EXIT_BAD_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    for d in model.diagnostics:
        print(d, file=sys.stderr)
    if model.errors:
        return EXIT_BAD_CONFIG
    print(f"{args.config}: ok ({len(model.tasks)} tasks, {len(model.representations)} representations)")
    return 0


def cmd_run(args) -> int:
    options = RunOptions(
        granularity=args.granularity,
        baseline=args.baseline,
        jobs=args.jobs,
        labels=args.labels,
        strict=args.strict,
        stats_out=args.stats_out,
        manifest=args.manifest,
    )
    result = run(args.config, options)
    if result.stats is not None:
        print(result.stats.table(), file=sys.stderr)
        print(f"{len(result.rows)} samples, {len(result.failures)} failed files -> {result.manifest_path}", file=sys.stderr)
    return result.exit_code


def cmd_stats(args) -> int:
    try:
        stats = compute_stats(args.manifest, args.baseline)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(stats.table(), file=sys.stderr)
    if args.stats_out:
        args.stats_out.write_text(stats.to_json(), encoding="utf-8")
    else:
        sys.stdout.write(stats.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="concord", description="Build code graph datasets from a CONCORD configuration.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a configuration")
    p.add_argument("config", type=Path)
    p.add_argument("--granularity", choices=["method", "class"], default="method")
    p.add_argument("--baseline", help="representation that reductions are measured against")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--labels", type=Path, help="CSV with project,unit,label[,split] columns")
    p.add_argument("--strict", action="store_true", help="exit 1 if any file fails")
    p.add_argument("--stats-out", type=Path)
    p.add_argument("--manifest", type=Path, help="manifest path (default: <first output_dir>/manifest.csv)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="parse and validate a configuration")
    p.add_argument("config", type=Path)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("stats", help="recompute statistics from a manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--baseline")
    p.add_argument("--stats-out", type=Path)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
