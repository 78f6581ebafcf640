"""Count edges per label over the bundled corpus for the configuration that
enables every edge family on merged AST, CFG and PDG bases.

    python3 scripts/edge_census.py [--config PATH]
"""

import argparse
import shutil
import sys
import tempfile
from collections import Counter
from pathlib import Path

from concord.pipeline import RunOptions, run
from concord.serialize import load_graph, read_manifest

DATA = Path(__file__).resolve().parents[1] / "data"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", default="full.concord", help="file name under data/configs")
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as scratch:
        work = Path(scratch)
        shutil.copytree(DATA, work / "data")
        result = run(work / "data/configs" / args.config, RunOptions())
        if result.exit_code != 0:
            return result.exit_code
        reps, rows = read_manifest(result.manifest_path)
        for rep in reps:
            labels: Counter[str] = Counter()
            kinds: Counter[str] = Counter()
            for row in rows:
                g = load_graph(result.manifest_path.parent / row.files[rep])
                labels.update(e.label.value for e in g.edges)
                kinds.update(n.kind for n in g.nodes.values())
            n = max(len(rows), 1)
            print(f"{rep}: {len(rows)} samples")
            for label, count in sorted(labels.items(), key=lambda kv: -kv[1]):
                print(f"  {label:<22}{count:>8}{count / n:>10.2f} per sample")
            print(f"  most common node kinds: {', '.join(k for k, _ in kinds.most_common(5))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
