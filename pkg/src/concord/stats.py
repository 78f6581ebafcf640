"""Per-representation size statistics over a finished run."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from concord.serialize import read_manifest


@dataclass
class RepStats:
    samples: int = 0
    avg_nodes: float = 0.0
    avg_edges: float = 0.0
    missing: int = 0
    units_with_removals: int | None = None


@dataclass
class Reduction:
    nodes_pct: float
    edges_pct: float


@dataclass
class RunStats:
    representations: dict[str, RepStats] = field(default_factory=dict)
    baseline: str | None = None
    reductions: dict[str, Reduction] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    def table(self) -> str:
        lines = [f"{'representation':<16}{'samples':>8}{'avg nodes':>12}{'avg edges':>12}{'node red.%':>12}{'edge red.%':>12}"]
        for name, s in self.representations.items():
            red = self.reductions.get(name)
            rn = f"{red.nodes_pct:.2f}" if red else "-"
            re_ = f"{red.edges_pct:.2f}" if red else "-"
            lines.append(f"{name:<16}{s.samples:>8}{s.avg_nodes:>12.2f}{s.avg_edges:>12.2f}{rn:>12}{re_:>12}")
        return "\n".join(lines)


def percent_reduction(base: float, value: float) -> float:
    if base == 0:
        return 0.0
    return (base - value) / base * 100.0


def graph_size(path: Path) -> tuple[int, int]:
    data = json.loads(path.read_text(encoding="utf-8"))
    return len(data["nodes"]), len(data["links"])


def compute_stats(manifest_path: str | Path, baseline: str | None = None) -> RunStats:
    """Average node and edge counts per representation, read back from the graph files.

    Missing or unreadable files are counted and left out of the averages.
    Reductions are ``(base - rep) / base * 100`` against ``baseline``.
    """
    manifest_path = Path(manifest_path)
    reps, rows = read_manifest(manifest_path)
    if baseline is not None and baseline not in reps:
        raise ValueError(f"baseline {baseline!r} is not one of {reps}")
    stats = RunStats(baseline=baseline)
    for rep in reps:
        nodes = edges = 0
        s = RepStats()
        for row in rows:
            path = manifest_path.parent / row.files[rep]
            try:
                n, e = graph_size(path)
            except (OSError, ValueError, KeyError):
                s.missing += 1
                continue
            s.samples += 1
            nodes += n
            edges += e
        if s.samples:
            s.avg_nodes = round(nodes / s.samples, 4)
            s.avg_edges = round(edges / s.samples, 4)
        stats.representations[rep] = s
    if baseline is not None:
        base = stats.representations[baseline]
        for rep, s in stats.representations.items():
            stats.reductions[rep] = Reduction(
                round(percent_reduction(base.avg_nodes, s.avg_nodes), 4),
                round(percent_reduction(base.avg_edges, s.avg_edges), 4),
            )
    return stats
