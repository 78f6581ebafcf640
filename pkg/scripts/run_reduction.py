"""Build the three-representation dataset over the bundled mini-corpus and
print node/edge reductions against the unpruned representation.

    python3 scripts/run_reduction.py [--out DIR] [--jobs N]

The corpus and configuration are copied to a scratch directory so the
checked-in data stays untouched; the dataset lands in ``--out``.
"""

import argparse
import shutil
import sys
import tempfile
import time
from pathlib import Path

from concord.pipeline import RunOptions, run

DATA = Path(__file__).resolve().parents[1] / "data"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("out/reduction"))
    parser.add_argument("--jobs", type=int, default=2)
    parser.add_argument("--granularity", choices=["method", "class"], default="method")
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as scratch:
        work = Path(scratch)
        shutil.copytree(DATA, work / "data")
        start = time.perf_counter()
        result = run(
            work / "data/configs/r123.concord",
            RunOptions(baseline="r1", jobs=args.jobs, granularity=args.granularity),
        )
        elapsed = time.perf_counter() - start
        if result.exit_code != 0:
            print(f"run failed with exit code {result.exit_code}", file=sys.stderr)
            return result.exit_code
        if args.out.exists():
            shutil.rmtree(args.out)
        shutil.copytree(work / "out", args.out)

    print(result.stats.table())
    removed = {name: s.units_with_removals for name, s in result.stats.representations.items()}
    print(f"\nunits with at least one removed statement: {removed}")
    print(f"{len(result.rows)} samples, {len(result.failures)} failed files, {elapsed:.2f}s -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
