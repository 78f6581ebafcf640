"""Edge-addition operations layered on top of a merged base graph.

Edge directions: NEXT_TOKEN and NEXT_SIBLING point forward in source order,
LAST_READ/LAST_WRITE and LAST_LEXICAL_USE point from an occurrence back to
earlier ones, COMPUTED_FROM points from a right-hand-side leaf to the
assigned variable, RETURNS_TO from a return to its method and GUARDED_BY
from a guarded use to the condition.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from concord.dsl import BaseGraphKind, EdgeKind, Task
from concord.graphs import Cfg, CodeGraph, EdgeLabel, GraphEdge, MissingBaseError
from concord.subject.nodes import AstNodeKind as K
from concord.subject.nodes import SubjectAst, is_variable, is_write, leaves_in_order


class Access(str, enum.Enum):
    READ = "read"
    WRITE = "write"


@dataclass(frozen=True)
class Occurrence:
    node: int
    access: Access
    statement: int


@dataclass
class OccurrenceTable:
    """Variable occurrences of one method, per name, in source order."""

    by_var: dict[str, list[Occurrence]] = field(default_factory=dict)

    def all(self) -> list[Occurrence]:
        return [o for occs in self.by_var.values() for o in occs]

    def at(self, statement: int) -> dict[str, list[Occurrence]]:
        out: dict[str, list[Occurrence]] = {}
        for var, occs in self.by_var.items():
            here = [o for o in occs if o.statement == statement]
            if here:
                out[var] = here
        return out


def build_occurrences(ast: SubjectAst, cfg: Cfg) -> OccurrenceTable:
    """Classify every variable IDENTIFIER of the unit and attach it to its CFG node.

    Assignment targets and declared names are writes, everything else is a
    read. Parameters belong to the CFG entry.
    """
    owner: dict[int, int] = {}
    for n in cfg.statement_nodes:
        for sub in ast.walk(n):
            owner.setdefault(sub.id, n)
    for param in ast.children_with(cfg.exit, "param"):
        for sub in ast.walk(param.id):
            owner[sub.id] = cfg.entry
    found: list[tuple[int, int, str, Occurrence]] = []
    for node_id, stmt in owner.items():
        node = ast[node_id]
        if is_variable(node):
            access = Access.WRITE if is_write(node) else Access.READ
            found.append((node.span[0], node.id, node.code, Occurrence(node.id, access, stmt)))
    table = OccurrenceTable()
    for _, _, var, occ in sorted(found):
        table.by_var.setdefault(var, []).append(occ)
    return table


@dataclass
class FlowFacts:
    """``in`` facts per CFG node: variable -> last read / last written occurrence ids."""

    last_reads: dict[int, dict[str, frozenset[int]]]
    last_writes: dict[int, dict[str, frozenset[int]]]


def _merge(into: dict[str, set[int]], facts: dict[str, frozenset[int]]) -> None:
    for var, ids in facts.items():
        into.setdefault(var, set()).update(ids)


def compute_flow_facts(cfg: Cfg, occ: OccurrenceTable) -> FlowFacts:
    """Forward may-analysis of last reads and last writes over the CFG."""
    nodes = cfg.all_nodes()
    preds = cfg.predecessors()
    reads_at: dict[int, dict[str, frozenset[int]]] = {n: {} for n in nodes}
    writes_at: dict[int, dict[str, frozenset[int]]] = {n: {} for n in nodes}
    for var, occs in occ.by_var.items():
        for o in occs:
            target = reads_at if o.access is Access.READ else writes_at
            target[o.statement][var] = target[o.statement].get(var, frozenset()) | {o.node}

    empty: dict[str, frozenset[int]] = {}
    in_r = {n: empty for n in nodes}
    in_w = {n: empty for n in nodes}
    out_r = {n: empty for n in nodes}
    out_w = {n: empty for n in nodes}
    work = deque(nodes)
    queued = set(nodes)
    while work:
        n = work.popleft()
        queued.discard(n)
        acc_r: dict[str, set[int]] = {}
        acc_w: dict[str, set[int]] = {}
        for p in preds[n]:
            _merge(acc_r, out_r[p])
            _merge(acc_w, out_w[p])
        in_r[n] = {v: frozenset(s) for v, s in acc_r.items()}
        in_w[n] = {v: frozenset(s) for v, s in acc_w.items()}
        new_r = {**in_r[n], **reads_at[n]}
        new_w = {**in_w[n], **writes_at[n]}
        if new_r != out_r[n] or new_w != out_w[n]:
            out_r[n], out_w[n] = new_r, new_w
            for s in cfg.successors.get(n, ()):
                if s not in queued:
                    queued.add(s)
                    work.append(s)
    return FlowFacts(in_r, in_w)


# ---------------------------------------------------------------- edge families

def _require_ast(g: CodeGraph, what: str) -> None:
    if BaseGraphKind.AST not in g.bases:
        raise MissingBaseError(f"{what} requires the AST base")


def add_next_token(g: CodeGraph, leaves: list[int]) -> CodeGraph:
    _require_ast(g, "next_token")
    return g.with_edges(GraphEdge(a, b, EdgeLabel.NEXT_TOKEN) for a, b in zip(leaves, leaves[1:]))


def add_next_sibling(g: CodeGraph) -> CodeGraph:
    _require_ast(g, "next_sibling")
    new = []
    for _, kids in sorted(g.ast_children().items()):
        new.extend(GraphEdge(a, b, EdgeLabel.NEXT_SIBLING) for a, b in zip(kids, kids[1:]))
    return g.with_edges(new)


def add_last_read_write(g: CodeGraph, facts: FlowFacts, occ: OccurrenceTable) -> CodeGraph:
    _require_ast(g, "last_read_write")
    new = []
    for var, occs in occ.by_var.items():
        for o in occs:
            for r in sorted(facts.last_reads[o.statement].get(var, ())):
                new.append(GraphEdge(o.node, r, EdgeLabel.LAST_READ))
            for w in sorted(facts.last_writes[o.statement].get(var, ())):
                new.append(GraphEdge(o.node, w, EdgeLabel.LAST_WRITE))
    return g.with_edges(new)


def add_last_lexical_use(g: CodeGraph, occ: OccurrenceTable) -> CodeGraph:
    _require_ast(g, "last_lexical_use")
    new = []
    for occs in occ.by_var.values():
        new.extend(GraphEdge(b.node, a.node, EdgeLabel.LAST_LEXICAL_USE) for a, b in zip(occs, occs[1:]))
    return g.with_edges(new)


def _assigned_variable(ast: SubjectAst, assignment: int) -> int | None:
    lhs = ast.child(assignment, "lhs")
    if lhs is None:
        return None
    if lhs.kind is K.IDENTIFIER:
        return lhs.id
    if lhs.kind is K.FIELD_ACCESS:
        member = ast.child(lhs.id, "member")
        return member.id if member else None
    return None


def add_computed_from(g: CodeGraph, ast: SubjectAst) -> CodeGraph:
    _require_ast(g, "computed_from")
    new = []
    for node_id in sorted(g.nodes):
        if ast[node_id].kind is not K.ASSIGNMENT:
            continue
        target = _assigned_variable(ast, node_id)
        rhs = ast.child(node_id, "rhs")
        if target is None or rhs is None:
            continue
        for leaf in ast.walk(rhs.id):
            if leaf.children:
                continue
            if (leaf.kind is K.LITERAL and not leaf.recovered) or is_variable(leaf):
                new.append(GraphEdge(leaf.id, target, EdgeLabel.COMPUTED_FROM))
    return g.with_edges(new)


def add_returns_to(g: CodeGraph, ast: SubjectAst) -> CodeGraph:
    new = []
    for node_id in sorted(g.nodes):
        if ast[node_id].kind is K.RETURN_STMT:
            method = ast.enclosing(node_id, K.METHOD_DECL)
            if method is not None and method.id in g.nodes:
                new.append(GraphEdge(node_id, method.id, EdgeLabel.RETURNS_TO))
    return g.with_edges(new)


def _guarded_uses(ast: SubjectAst, subtree: int, names: set[str]) -> list[int]:
    return [n.id for n in ast.walk(subtree) if is_variable(n) and n.code in names]


def add_guarded_by(g: CodeGraph, ast: SubjectAst) -> CodeGraph:
    _require_ast(g, "guarded_by")
    new = []
    for node_id in sorted(g.nodes):
        if ast[node_id].kind is not K.IF_STMT:
            continue
        cond = ast.child(node_id, "cond")
        names = {n.code for n in ast.walk(cond.id) if is_variable(n)}
        then = ast.child(node_id, "then")
        if then is not None:
            new.extend(GraphEdge(u, cond.id, EdgeLabel.GUARDED_BY) for u in _guarded_uses(ast, then.id, names))
        else_clause = ast.child(node_id, "else")
        else_body = ast.child(else_clause.id, "body") if else_clause else None
        if else_body is not None:
            new.extend(
                GraphEdge(u, cond.id, EdgeLabel.GUARDED_BY_NEGATION)
                for u in _guarded_uses(ast, else_body.id, names)
            )
    return g.with_edges(new)


_LOOPS = {
    "while": (K.WHILE_STMT, EdgeLabel.WHILE_EXEC, EdgeLabel.WHILE_NEXT),
    "for": (K.FOR_STMT, EdgeLabel.FOR_EXEC, EdgeLabel.FOR_NEXT),
}


def add_loop_cfg(g: CodeGraph, ast: SubjectAst, kind: str) -> CodeGraph:
    """EXEC edge condition -> body and NEXT edge body -> condition per loop.

    A ``for`` without a condition uses the FOR_STMT node in its place; a loop
    with an empty-statement body gets no edges.
    """
    _require_ast(g, f"{kind}_cfg")
    loop_kind, exec_label, next_label = _LOOPS[kind]
    new = []
    for node_id in sorted(g.nodes):
        if ast[node_id].kind is not loop_kind:
            continue
        body = ast.child(node_id, "body")
        if body is None:
            continue
        cond = ast.child(node_id, "cond")
        head = cond.id if cond is not None else node_id
        new.append(GraphEdge(head, body.id, exec_label))
        new.append(GraphEdge(body.id, head, next_label))
    return g.with_edges(new)


# ---------------------------------------------------------------- tasks

@dataclass
class UnitContext:
    """Per-method analysis artifacts, computed on first use."""

    ast: SubjectAst
    unit: int
    cfg: Cfg

    @cached_property
    def leaves(self) -> list[int]:
        return leaves_in_order(self.ast, self.unit)

    @cached_property
    def occurrences(self) -> OccurrenceTable:
        return build_occurrences(self.ast, self.cfg)

    @cached_property
    def facts(self) -> FlowFacts:
        return compute_flow_facts(self.cfg, self.occurrences)


def apply_edge_op(g: CodeGraph, op: EdgeKind, ctx: UnitContext) -> CodeGraph:
    if op is EdgeKind.NEXT_TOKEN:
        return add_next_token(g, ctx.leaves)
    if op is EdgeKind.NEXT_SIBLING:
        return add_next_sibling(g)
    if op is EdgeKind.LAST_READ_WRITE:
        _require_ast(g, "last_read_write")
        return add_last_read_write(g, ctx.facts, ctx.occurrences)
    if op is EdgeKind.LAST_LEXICAL_USE:
        _require_ast(g, "last_lexical_use")
        return add_last_lexical_use(g, ctx.occurrences)
    if op is EdgeKind.COMPUTED_FROM:
        return add_computed_from(g, ctx.ast)
    if op is EdgeKind.RETURNS_TO:
        return add_returns_to(g, ctx.ast)
    if op is EdgeKind.GUARDED_BY:
        return add_guarded_by(g, ctx.ast)
    if op is EdgeKind.WHILE_CFG:
        return add_loop_cfg(g, ctx.ast, "while")
    if op is EdgeKind.FOR_CFG:
        return add_loop_cfg(g, ctx.ast, "for")
    raise ValueError(f"unknown edge operation {op!r}")


def apply_task(g: CodeGraph, task: Task, ctx: UnitContext) -> CodeGraph:
    """Apply a task's edge additions in declaration order.

    Node removals are not handled here; they happen on the source file
    before parsing.
    """
    for op in task.edge_ops:
        g = apply_edge_op(g, op, ctx)
    return g
