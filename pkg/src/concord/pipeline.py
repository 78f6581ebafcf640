"""End-to-end execution of a configuration over a set of repositories.

Every source file is handled by one worker across all representations:
prune, re-parse, build bases, augment, serialize to text. Workers only
return data. A single writer then sorts the results, assigns concord ids
and writes graphs, shadow files, the manifest and the stats, so the output
does not depend on worker scheduling.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from concord.augment import UnitContext, apply_task
from concord.dsl import ConcordModel, ConcordSyntaxError, RepresentationSpec, Task, load_config
from concord.graphs import CodeGraph, build_bases, merge_class
from concord.pruner import prune_source
from concord.serialize import ManifestRow, graph_to_json, write_manifest
from concord.stats import RunStats, compute_stats
from concord.subject import parse_subject
from concord.subject.nodes import AstNodeKind as K
from concord.subject.nodes import SubjectAst

log = logging.getLogger(__name__)

SOURCE_SUFFIXES = frozenset({".java", ".c", ".h", ".cc", ".cpp", ".cxx", ".hpp", ".hh"})

EXIT_OK = 0
EXIT_FILE_FAILURES = 1
EXIT_BAD_CONFIG = 2
EXIT_BAD_REPO_LIST = 3


@dataclass
class RunOptions:
    granularity: str = "method"  # method | class
    baseline: str | None = None
    jobs: int = 1
    labels: Path | None = None
    strict: bool = False
    stats_out: Path | None = None
    manifest: Path | None = None

    def __post_init__(self):
        if self.granularity not in ("method", "class"):
            raise ValueError(f"granularity must be 'method' or 'class', not {self.granularity!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass
class RunResult:
    exit_code: int
    stats: RunStats | None = None
    manifest_path: Path | None = None
    rows: list[ManifestRow] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class RepoListError(OSError):
    pass


# ---------------------------------------------------------------- inputs

def read_repo_list(path: Path) -> list[Path]:
    """Repository directories listed in a one-column CSV (header optional)."""
    try:
        with open(path, newline="", encoding="utf-8") as f:
            records = [r for r in csv.reader(f) if r and r[0].strip()]
    except (OSError, UnicodeDecodeError) as exc:
        raise RepoListError(f"cannot read repository list {path}: {exc}") from exc
    if records and records[0][0].strip() == "repo_path":
        records = records[1:]
    return [(path.parent / r[0].strip()).resolve() for r in records]


def source_files(repo: Path) -> list[Path]:
    return sorted(p for p in repo.rglob("*") if p.is_file() and p.suffix in SOURCE_SUFFIXES)


def read_labels(path: Path) -> dict[tuple[str, str], tuple[str, str | None]]:
    """``(project, unit) -> (label, split)`` from a CSV with project,unit,label[,split] columns."""
    out = {}
    with open(path, newline="", encoding="utf-8") as f:
        for rec in csv.DictReader(f):
            out[(rec["project"], rec["unit"])] = (rec["label"], rec.get("split") or None)
    return out


def _safe_name(name: str) -> str:
    return re.sub(r"[^\w.-]", "_", name) or "unit"


# ---------------------------------------------------------------- per-file work

@dataclass(frozen=True)
class RepJob:
    name: str
    base: tuple
    tasks: tuple[Task, ...]

    @property
    def prune_plan(self):
        return [(t.remove_targets, t.conditions) for t in self.tasks if t.remove_targets]


@dataclass(frozen=True)
class FileJob:
    project: str
    repo: Path
    relpath: str
    reps: tuple[RepJob, ...]
    granularity: str


@dataclass
class Unit:
    ordinal: int
    name: str
    methods: list[int]
    line: int
    code: str


@dataclass
class UnitResult:
    ordinal: int
    name: str
    baseline_code: str
    graphs: dict[str, str]
    removals: dict[str, int]


@dataclass
class FileResult:
    job: FileJob
    units: list[UnitResult] = field(default_factory=list)
    pruned: dict[str, tuple[bytes, dict]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    error: str | None = None


def code_units(ast: SubjectAst, granularity: str, file_stem: str) -> list[Unit]:
    """Methods, or methods grouped by their innermost enclosing type."""
    if granularity == "method":
        return [
            Unit(i, ast.method_name(m), [m], ast[m].line, ast[m].code)
            for i, m in enumerate(ast.methods)
        ]
    groups: dict[int | None, list[int]] = {}
    for m in ast.methods:
        owner = ast.enclosing(m, K.TYPE_DECL)
        groups.setdefault(owner.id if owner else None, []).append(m)
    units = []
    for i, (owner, methods) in enumerate(groups.items()):
        if owner is None:
            code = "\n\n".join(ast[m].code for m in methods)
            units.append(Unit(i, file_stem, methods, ast[methods[0]].line, code))
        else:
            name = ast.child(owner, "name")
            units.append(Unit(i, name.code if name else file_stem, methods, ast[owner].line, ast[owner].code))
    return units


def build_method_graph(ast: SubjectAst, method: int, base, tasks) -> CodeGraph:
    g, cfg = build_bases(ast, method, base)
    ctx = UnitContext(ast, method, cfg)
    for task in tasks:
        g = apply_task(g, task, ctx)
    return g


def build_unit_graph(ast: SubjectAst, unit: Unit, base, tasks, granularity: str) -> CodeGraph:
    graphs = [build_method_graph(ast, m, base, tasks) for m in unit.methods]
    if granularity == "class":
        return merge_class(graphs, unit.name, unit.line)
    return graphs[0]


def process_file(job: FileJob) -> FileResult:
    """Produce every representation of every unit in one file. Never raises."""
    result = FileResult(job)
    try:
        text = (job.repo / job.relpath).read_bytes()
        original = parse_subject(text, job.relpath)
        result.warnings.extend(f"{job.relpath}: {w}" for w in original.warnings)
        stem = Path(job.relpath).stem
        units = code_units(original, job.granularity, stem)
        spans = {u.ordinal: [original[m].span for m in u.methods] for u in units}
        per_rep: dict[str, dict[tuple[int, str], str]] = {}
        removals: dict[str, dict[int, int]] = {}
        for rep in job.reps:
            ast = original
            counts = {u.ordinal: 0 for u in units}
            if rep.prune_plan:
                pruned, report = prune_source(original, rep.prune_plan)
                result.pruned[rep.name] = (pruned, report.to_json())
                for s in report.removed:
                    for u in units:
                        if any(lo <= s.span[0] and s.span[1] <= hi for lo, hi in spans[u.ordinal]):
                            counts[u.ordinal] += 1
                ast = parse_subject(pruned, job.relpath) if report.removed else original
            removals[rep.name] = counts
            rep_units = code_units(ast, job.granularity, stem)
            per_rep[rep.name] = {
                (u.ordinal, u.name): graph_to_json(build_unit_graph(ast, u, rep.base, rep.tasks, job.granularity))
                for u in rep_units
            }
        for u in units:
            key = (u.ordinal, u.name)
            if not all(key in per_rep[r.name] for r in job.reps):
                result.warnings.append(f"{job.relpath}: unit {u.name} not recovered in every representation")
                continue
            result.units.append(
                UnitResult(
                    u.ordinal,
                    u.name,
                    u.code,
                    {r.name: per_rep[r.name][key] for r in job.reps},
                    {r.name: removals[r.name][u.ordinal] for r in job.reps},
                )
            )
    except Exception as exc:  # crash isolation: one bad file never sinks the run
        result.units = []
        result.pruned = {}
        result.error = f"{type(exc).__name__}: {exc}"
    return result


# ---------------------------------------------------------------- run

def _resolve(base_dir: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else (base_dir / p)


def plan_jobs(
    model: ConcordModel, config_dir: Path, granularity: str
) -> tuple[list[FileJob], list[str]]:
    """File jobs for every source file listed by every representation."""
    warnings: list[str] = []
    reps = list(model.representations)
    rep_jobs = {r.name: RepJob(r.name, r.base, tuple(model.tasks_for(r))) for r in reps}
    covered: dict[tuple[str, Path, str], list[str]] = {}
    for rep in reps:
        repos = read_repo_list(_resolve(config_dir, rep.repo_list_path))
        if not repos:
            warnings.append(f"representation {rep.name}: repository list is empty")
        for repo in repos:
            if not repo.is_dir():
                warnings.append(f"repository {repo} does not exist; skipped")
                continue
            for f in source_files(repo):
                key = (repo.name, repo, f.relative_to(repo).as_posix())
                covered.setdefault(key, []).append(rep.name)
    jobs = []
    for key in sorted(covered):
        names = covered[key]
        if sorted(set(names)) != sorted(r.name for r in reps):
            warnings.append(f"{key[0]}/{key[2]} is not listed for every representation; skipped")
            continue
        jobs.append(FileJob(key[0], key[1], key[2], tuple(rep_jobs[r.name] for r in reps), granularity))
    return jobs, warnings


def _write(path: Path, data: bytes | str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    path.write_bytes(data)


def _relative(path: Path, start: Path) -> str:
    return Path(os.path.relpath(path, start)).as_posix()


def run(config_path: str | Path, options: RunOptions | None = None) -> RunResult:
    options = options or RunOptions()
    config_path = Path(config_path)
    config_dir = config_path.resolve().parent
    try:
        model = load_config(config_path)
    except ConcordSyntaxError as exc:
        for d in exc.errors:
            log.error("%s", d)
        return RunResult(EXIT_BAD_CONFIG)
    except OSError as exc:
        log.error("cannot read %s: %s", config_path, exc)
        return RunResult(EXIT_BAD_CONFIG)
    for d in model.diagnostics:
        (log.error if d in model.errors else log.warning)("%s", d)
    if model.errors:
        return RunResult(EXIT_BAD_CONFIG)
    if not model.representations:
        log.error("%s: no representations to build", config_path)
        return RunResult(EXIT_BAD_CONFIG)
    reps: list[RepresentationSpec] = list(model.representations)
    rep_names = [r.name for r in reps]
    if options.baseline is not None and options.baseline not in rep_names:
        log.error("baseline %r is not a representation of %s", options.baseline, config_path)
        return RunResult(EXIT_BAD_CONFIG)

    try:
        jobs, warnings = plan_jobs(model, config_dir, options.granularity)
    except RepoListError as exc:
        log.error("%s", exc)
        return RunResult(EXIT_BAD_REPO_LIST)
    for w in warnings:
        log.warning("%s", w)

    out_dirs = {r.name: _resolve(config_dir, r.output_dir) for r in reps}
    manifest_path = (options.manifest or out_dirs[reps[0].name] / "manifest.csv").resolve()
    manifest_dir = manifest_path.parent
    labels = read_labels(options.labels) if options.labels else {}

    if options.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            results = list(pool.map(process_file, jobs, chunksize=4))
    else:
        results = [process_file(job) for job in jobs]

    result = RunResult(EXIT_OK, manifest_path=manifest_path, warnings=warnings)
    units_with_removals = {r: 0 for r in rep_names}
    next_id = 1
    for fr in results:
        job = fr.job
        for w in fr.warnings:
            log.warning("%s", w)
            result.warnings.append(w)
        if fr.error is not None:
            log.error("%s/%s failed: %s", job.project, job.relpath, fr.error)
            result.failures.append((f"{job.project}/{job.relpath}", fr.error))
            continue
        for rep_name, (pruned, report) in fr.pruned.items():
            shadow = out_dirs[rep_name] / "_pruned" / rep_name / job.project / job.relpath
            _write(shadow, pruned)
            _write(shadow.with_name(shadow.name + ".prune.json"), json.dumps(report, indent=2) + "\n")
        for unit in fr.units:
            cid = next_id
            next_id += 1
            stem = f"{_safe_name(unit.name)}_{cid}"
            baseline = manifest_dir / "baseline" / job.project / f"{stem}.code"
            _write(baseline, unit.baseline_code + "\n")
            files = {}
            for rep_name in rep_names:
                path = out_dirs[rep_name] / rep_name / job.project / f"{stem}.json"
                _write(path, unit.graphs[rep_name])
                files[rep_name] = _relative(path, manifest_dir)
                if unit.removals[rep_name]:
                    units_with_removals[rep_name] += 1
            label, split = labels.get((job.project, unit.name), (0, None))
            result.rows.append(
                ManifestRow(cid, job.project, _relative(baseline, manifest_dir), files, label, split or "train", unit.name)
            )

    write_manifest(result.rows, manifest_path, rep_names)
    stats = compute_stats(manifest_path, options.baseline)
    for name, count in units_with_removals.items():
        stats.representations[name].units_with_removals = count
    result.stats = stats
    _write(options.stats_out or manifest_dir / "stats.json", stats.to_json())
    if result.failures and options.strict:
        result.exit_code = EXIT_FILE_FAILURES
    return result
