"""Node-link JSON graphs and the dataset manifest CSV."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from concord.dsl import BaseGraphKind
from concord.graphs import CodeGraph, EdgeLabel, GraphEdge, GraphNode

_BASE_OF_LABEL = {
    EdgeLabel.AST: BaseGraphKind.AST,
    EdgeLabel.CFG: BaseGraphKind.CFG,
    EdgeLabel.PDG_DATA: BaseGraphKind.PDG,
    EdgeLabel.PDG_CTRL: BaseGraphKind.PDG,
}


def graph_to_dict(g: CodeGraph) -> dict:
    return {
        "directed": True,
        "multigraph": True,
        "nodes": [
            {"id": n.id, "kind": n.kind, "code": n.code, "line": n.line}
            for n in sorted(g.nodes.values(), key=lambda n: n.id)
        ],
        "links": [
            {"source": e.source, "target": e.target, "label": e.label.value}
            for e in sorted(g.edges, key=lambda e: (e.source, e.target, e.label.value))
        ],
    }


def graph_to_json(g: CodeGraph) -> str:
    """Canonical text: nodes by id, links by (source, target, label), trailing newline."""
    return json.dumps(graph_to_dict(g), ensure_ascii=False) + "\n"


def serialize_graph(g: CodeGraph, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(graph_to_json(g), encoding="utf-8")
    return path


def graph_from_dict(data: dict, unit: str = "") -> CodeGraph:
    nodes = {n["id"]: GraphNode(n["id"], n["kind"], n["code"], n["line"]) for n in data["nodes"]}
    edges = [GraphEdge(e["source"], e["target"], EdgeLabel(e["label"])) for e in data["links"]]
    bases = frozenset(_BASE_OF_LABEL[e.label] for e in edges if e.label in _BASE_OF_LABEL)
    return CodeGraph(unit, nodes, edges, bases)


def load_graph(path: str | Path) -> CodeGraph:
    path = Path(path)
    return graph_from_dict(json.loads(path.read_text(encoding="utf-8")), unit=path.stem)


@dataclass
class ManifestRow:
    concord_id: int
    project: str
    baseline_file: str
    files: dict[str, str]  # representation name -> graph file
    label: int | str = 0
    split: str = "train"
    unit: str = field(default="", compare=False)


def manifest_header(representations: list[str]) -> list[str]:
    return ["concord_id", "project", "baseline_file", *(f"{r}_file" for r in representations), "label", "split"]


def write_manifest(rows: list[ManifestRow], path: str | Path, representations: list[str]) -> Path:
    for row in rows:
        if list(row.files) != list(representations):
            raise ValueError(f"row {row.concord_id} has columns {list(row.files)}, expected {representations}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\r\n")
        writer.writerow(manifest_header(representations))
        for row in rows:
            writer.writerow(
                [row.concord_id, row.project, row.baseline_file, *row.files.values(), row.label, row.split]
            )
    return path


def read_manifest(path: str | Path) -> tuple[list[str], list[ManifestRow]]:
    """Representation names and rows of a manifest written by :func:`write_manifest`."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or header[:3] != ["concord_id", "project", "baseline_file"] or header[-2:] != ["label", "split"]:
            raise ValueError(f"{path}: not a manifest (header {header})")
        reps = [h.removesuffix("_file") for h in header[3:-2]]
        rows = []
        for rec in reader:
            if not rec:
                continue
            files = dict(zip(reps, rec[3:-2]))
            rows.append(ManifestRow(int(rec[0]), rec[1], rec[2], files, rec[-2], rec[-1]))
    return reps, rows
