"""Base graph representations (AST, CFG, PDG) and their merging.

CFG and PDG nodes reuse the ids of the AST statement nodes they stand for,
so merging several bases is a plain union of labelled edges. The method
body BLOCK doubles as the CFG entry and the METHOD_DECL as its exit.
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from concord.dsl import BaseGraphKind
from concord.subject.nodes import AstNodeKind as K
from concord.subject.nodes import SubjectAst, SubjectAstNode, is_variable

log = logging.getLogger(__name__)


class EdgeLabel(str, enum.Enum):
    AST = "AST"
    CFG = "CFG"
    PDG_DATA = "PDG_DATA"
    PDG_CTRL = "PDG_CTRL"
    NEXT_TOKEN = "NEXT_TOKEN"
    NEXT_SIBLING = "NEXT_SIBLING"
    LAST_READ = "LAST_READ"
    LAST_WRITE = "LAST_WRITE"
    LAST_LEXICAL_USE = "LAST_LEXICAL_USE"
    COMPUTED_FROM = "COMPUTED_FROM"
    RETURNS_TO = "RETURNS_TO"
    GUARDED_BY = "GUARDED_BY"
    GUARDED_BY_NEGATION = "GUARDED_BY_NEGATION"
    WHILE_EXEC = "WHILE_EXEC"
    WHILE_NEXT = "WHILE_NEXT"
    FOR_EXEC = "FOR_EXEC"
    FOR_NEXT = "FOR_NEXT"


BASE_LABELS = frozenset({EdgeLabel.AST, EdgeLabel.CFG, EdgeLabel.PDG_DATA, EdgeLabel.PDG_CTRL})


@dataclass(frozen=True)
class GraphNode:
    id: int
    kind: str
    code: str
    line: int


@dataclass(frozen=True, order=True)
class GraphEdge:
    source: int
    target: int
    label: EdgeLabel


@dataclass
class CodeGraph:
    """Directed labelled multigraph; at most one edge per (source, target, label)."""

    unit: str
    nodes: dict[int, GraphNode] = field(default_factory=dict)
    edges: list[GraphEdge] = field(default_factory=list)
    bases: frozenset[BaseGraphKind] = frozenset()
    directed: bool = True

    def __post_init__(self):
        seen: set[GraphEdge] = set()
        unique = []
        for e in self.edges:
            if e.source not in self.nodes or e.target not in self.nodes:
                raise ValueError(f"edge {e} has an endpoint outside the graph")
            if e not in seen:
                seen.add(e)
                unique.append(e)
        self.edges = unique

    def with_edges(self, extra: Iterable[GraphEdge]) -> "CodeGraph":
        return CodeGraph(self.unit, dict(self.nodes), self.edges + list(extra), self.bases)

    def edges_with(self, *labels: EdgeLabel) -> list[GraphEdge]:
        return [e for e in self.edges if e.label in labels]

    def ast_children(self) -> dict[int, list[int]]:
        """Ordered AST children per node; child order equals id order."""
        children: dict[int, list[int]] = {}
        for e in self.edges:
            if e.label is EdgeLabel.AST:
                children.setdefault(e.source, []).append(e.target)
        return {k: sorted(v) for k, v in children.items()}

    def __eq__(self, other):
        if not isinstance(other, CodeGraph):
            return NotImplemented
        return self.nodes == other.nodes and sorted(self.edges) == sorted(other.edges)


class MissingBaseError(ValueError):
    pass


def _graph_node(n: SubjectAstNode) -> GraphNode:
    return GraphNode(n.id, n.kind.value, n.code, n.line)


def _require_method(ast: SubjectAst, unit: int) -> SubjectAstNode:
    node = ast[unit]
    if node.kind is not K.METHOD_DECL:
        raise KeyError(f"node {unit} is not a METHOD_DECL")
    return node


def build_ast_graph(ast: SubjectAst, unit: int) -> CodeGraph:
    method = _require_method(ast, unit)
    nodes: dict[int, GraphNode] = {}
    edges: list[GraphEdge] = []
    for n in ast.walk(unit):
        nodes[n.id] = _graph_node(n)
        edges.extend(GraphEdge(n.id, c, EdgeLabel.AST) for c in n.children)
    return CodeGraph(ast.method_name(method.id), nodes, edges, frozenset({BaseGraphKind.AST}))


# ---------------------------------------------------------------- CFG

@dataclass
class Cfg:
    entry: int
    exit: int
    statement_nodes: list[int]
    successors: dict[int, list[int]]
    warnings: list[str] = field(default_factory=list)

    def predecessors(self) -> dict[int, list[int]]:
        preds: dict[int, list[int]] = {n: [] for n in self.all_nodes()}
        for src, succs in self.successors.items():
            for dst in succs:
                preds[dst].append(src)
        return preds

    def all_nodes(self) -> list[int]:
        return [self.entry] + self.statement_nodes + [self.exit]

    def edges(self) -> list[GraphEdge]:
        return [
            GraphEdge(src, dst, EdgeLabel.CFG)
            for src in sorted(self.successors)
            for dst in self.successors[src]
        ]


@dataclass(frozen=True)
class _Ctx:
    brk: int | None = None
    cont: int | None = None
    catches: tuple[int, ...] = ()


class _CfgBuilder:
    def __init__(self, ast: SubjectAst, exit_id: int):
        self.ast = ast
        self.exit = exit_id
        self.succ: dict[int, list[int]] = {}
        self._placeholder = -1

    def link(self, node: int, targets: Iterable[int]) -> None:
        out = self.succ.setdefault(node, [])
        for t in targets:
            if t not in out:
                out.append(t)

    def seq(self, stmts: list[SubjectAstNode], follow: int, ctx: _Ctx) -> int:
        for stmt in reversed(stmts):
            follow = self.stmt(stmt, follow, ctx)
        return follow

    def simple(self, node: int, targets: Iterable[int], ctx: _Ctx) -> int:
        self.link(node, list(targets) + list(ctx.catches))
        return node

    def stmt(self, node: SubjectAstNode | None, follow: int, ctx: _Ctx) -> int:
        if node is None:
            return follow
        ast = self.ast
        kind = node.kind
        if kind is K.BLOCK:
            return self.seq(ast.children(node.id), follow, ctx)
        if kind is K.RETURN_STMT:
            return self.simple(node.id, [self.exit], ctx)
        if kind is K.EXPR_STMT:
            head = ast[node.children[0]]
            if head.kind is K.OPERATOR and head.operator == "break":
                return self.simple(node.id, [ctx.brk if ctx.brk is not None else follow], ctx)
            if head.kind is K.OPERATOR and head.operator == "continue":
                return self.simple(node.id, [ctx.cont if ctx.cont is not None else follow], ctx)
            if head.kind is K.OPERATOR and head.operator == "throw":
                self.link(node.id, list(ctx.catches) or [self.exit])
                return node.id
            return self.simple(node.id, [follow], ctx)
        if kind is K.IF_STMT:
            cond = ast.child(node.id, "cond")
            then_head = self.branch(ast.child(node.id, "then"), node.id, follow, ctx)
            else_clause = ast.child(node.id, "else")
            if else_clause is not None:
                else_head = self.branch(ast.child(else_clause.id, "body"), else_clause.id, follow, ctx)
            else:
                else_head = follow
            self.link(cond.id, [then_head, else_head])
            return cond.id
        if kind is K.WHILE_STMT:
            cond = ast.child(node.id, "cond")
            body_head = self.stmt(ast.child(node.id, "body"), cond.id, _Ctx(follow, cond.id, ctx.catches))
            self.link(cond.id, [body_head, follow])
            return cond.id
        if kind is K.FOR_STMT:
            return self.for_stmt(node, follow, ctx)
        if kind is K.TRY_STMT:
            finally_block = ast.child(node.id, "finally")
            after = self.stmt(finally_block, follow, ctx)
            catches = ast.children_with(node.id, "catch")
            for c in catches:
                self.link(c.id, [self.stmt(ast.child(c.id, "body"), after, ctx)])
            inner = _Ctx(ctx.brk, ctx.cont, tuple(c.id for c in catches) + ctx.catches)
            head = self.stmt(ast.child(node.id, "body"), after, inner)
            for res in reversed(ast.children_with(node.id, "resource")):
                head = self.simple(res.id, [head], inner)
            return head
        # LOCAL_DECL, recovered regions and anything statement-like
        return self.simple(node.id, [follow], ctx)

    def branch(self, stmt: SubjectAstNode | None, owner: int, follow: int, ctx: _Ctx) -> int:
        """Head of an if/else branch; an empty branch becomes a no-op node.

        Without the no-op both outgoing edges of the condition would
        collapse into one.
        """
        head = self.stmt(stmt, follow, ctx)
        if head != follow:
            return head
        nop = stmt.id if stmt is not None else owner
        self.link(nop, [follow])
        return nop

    def for_stmt(self, node: SubjectAstNode, follow: int, ctx: _Ctx) -> int:
        ast = self.ast
        cond = ast.child(node.id, "cond")
        placeholder = self._placeholder
        self._placeholder -= 1
        top = cond.id if cond else placeholder
        cont = top
        for upd in reversed(ast.children_with(node.id, "update")):
            cont = self.simple(upd.id, [cont], ctx)
        body_head = self.stmt(ast.child(node.id, "body"), cont, _Ctx(follow, cont, ctx.catches))
        if cond:
            self.link(cond.id, [body_head, follow])
        else:
            resolved = follow if body_head == placeholder else body_head
            for src, succs in self.succ.items():
                self.succ[src] = [resolved if s == placeholder else s for s in succs]
            top = resolved
        head = top
        for init in reversed(ast.children_with(node.id, "init")):
            head = self.simple(init.id, [head], ctx)
        return head


def _reachable(start: int, edges: dict[int, list[int]]) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        for nxt in edges.get(queue.popleft(), ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def build_cfg(ast: SubjectAst, unit: int) -> Cfg:
    """Statement-level intraprocedural control flow graph of a method."""
    _require_method(ast, unit)
    body = ast.method_body(unit)
    if body is None:
        raise KeyError(f"method {unit} has no body")
    builder = _CfgBuilder(ast, unit)
    first = builder.seq(ast.children(body.id), unit, _Ctx())
    builder.link(body.id, [first])
    succ = builder.succ
    statements = sorted(n for n in succ if n != body.id)
    for n in statements:
        for s in succ[n]:
            if s not in succ and s != unit:
                raise AssertionError(f"dangling CFG successor {s}")
    cfg = Cfg(body.id, unit, statements, succ)

    reached = _reachable(body.id, succ)
    for n in statements:
        if n not in reached:
            cfg.warnings.append(f"unreachable statement at line {ast[n].line} attached to entry")
            builder.link(body.id, [n])
            reached |= _reachable(n, succ)
    preds: dict[int, list[int]] = {}
    for src, succs in succ.items():
        for dst in succs:
            preds.setdefault(dst, []).append(src)
    reaches_exit = _reachable(unit, preds)
    for n in reversed(statements):
        if n not in reaches_exit:
            cfg.warnings.append(f"statement at line {ast[n].line} cannot reach exit; attached to exit")
            builder.link(n, [unit])
            preds.setdefault(unit, []).append(n)
            reaches_exit = _reachable(unit, preds)
    return cfg


# ---------------------------------------------------------------- def/use

def _cfg_owner(ast: SubjectAst, cfg: Cfg) -> dict[int, int]:
    """Map every AST node below a CFG node to that CFG node."""
    owner: dict[int, int] = {}
    for n in cfg.statement_nodes:
        for sub in ast.walk(n):
            owner.setdefault(sub.id, n)
    method = cfg.exit
    for param in ast.children_with(method, "param"):
        for sub in ast.walk(param.id):
            owner[sub.id] = cfg.entry
    return owner


def _defines(ast: SubjectAst, ident: SubjectAstNode) -> bool:
    if ident.field in ("lhs", "target"):
        return True
    if ident.field == "decl":
        parent = ast[ident.parent]
        # `int x;` declares without defining
        return not (parent.kind is K.LOCAL_DECL and parent.field != "decl")
    return False


def _uses(ident: SubjectAstNode) -> bool:
    return ident.field not in ("lhs", "decl")


def def_use(ast: SubjectAst, cfg: Cfg) -> tuple[dict[int, set[str]], dict[int, set[str]]]:
    """Variables defined and used by each CFG node (entry defines parameters)."""
    defs: dict[int, set[str]] = {n: set() for n in cfg.all_nodes()}
    uses: dict[int, set[str]] = {n: set() for n in cfg.all_nodes()}
    for node_id, owner in _cfg_owner(ast, cfg).items():
        node = ast[node_id]
        if not is_variable(node):
            continue
        if _defines(ast, node):
            defs[owner].add(node.code)
        if _uses(node):
            uses[owner].add(node.code)
    return defs, uses


def reaching_definitions(ast: SubjectAst, cfg: Cfg) -> dict[int, set[tuple[int, str]]]:
    """``in`` sets of the classic gen/kill reaching-definitions fixed point."""
    defs, _ = def_use(ast, cfg)
    nodes = cfg.all_nodes()
    preds = cfg.predecessors()
    out: dict[int, set[tuple[int, str]]] = {n: set() for n in nodes}
    inn: dict[int, set[tuple[int, str]]] = {n: set() for n in nodes}
    work = deque(nodes)
    queued = set(nodes)
    while work:
        n = work.popleft()
        queued.discard(n)
        new_in: set[tuple[int, str]] = set()
        for p in preds[n]:
            new_in |= out[p]
        inn[n] = new_in
        killed = defs[n]
        new_out = {d for d in new_in if d[1] not in killed} | {(n, v) for v in defs[n]}
        if new_out != out[n]:
            out[n] = new_out
            for s in cfg.successors.get(n, ()):
                if s not in queued:
                    queued.add(s)
                    work.append(s)
    return inn


def _governing_predicate(ast: SubjectAst, node_id: int) -> int | None:
    prev = ast[node_id]
    for anc in ast.ancestors(node_id):
        if anc.kind is K.IF_STMT and prev.field in ("then", "else"):
            return ast.child(anc.id, "cond").id
        if anc.kind in (K.WHILE_STMT, K.FOR_STMT) and prev.field in ("body", "update"):
            cond = ast.child(anc.id, "cond")
            if cond is not None:
                return cond.id
        if anc.kind is K.CATCH_CLAUSE and prev.field == "body":
            return anc.id
        if anc.kind is K.METHOD_DECL:
            return None
        prev = anc
    return None


def build_pdg(ast: SubjectAst, cfg: Cfg) -> list[GraphEdge]:
    """Data (reaching definitions) and control (syntactic governance) dependence edges."""
    _, uses = def_use(ast, cfg)
    reaching = reaching_definitions(ast, cfg)
    edges: set[GraphEdge] = set()
    for u in cfg.all_nodes():
        for d, var in reaching[u]:
            if var in uses[u]:
                edges.add(GraphEdge(d, u, EdgeLabel.PDG_DATA))
    for n in cfg.statement_nodes:
        pred = _governing_predicate(ast, n)
        if pred is not None and pred != n:
            edges.add(GraphEdge(pred, n, EdgeLabel.PDG_CTRL))
    return sorted(edges)


# ---------------------------------------------------------------- merging

def merge_bases(
    ast: SubjectAst,
    unit: int,
    selection,
    ast_graph: CodeGraph | None = None,
    cfg: Cfg | None = None,
    pdg_edges: list[GraphEdge] | None = None,
) -> CodeGraph:
    """Union the selected base graphs of one method over shared node ids."""
    selection = frozenset(BaseGraphKind(s) for s in selection)
    if not selection:
        raise ValueError("empty base selection")
    if BaseGraphKind.AST in selection and ast_graph is None:
        raise MissingBaseError("AST selected but not built")
    if BaseGraphKind.CFG in selection and cfg is None:
        raise MissingBaseError("CFG selected but not built")
    if BaseGraphKind.PDG in selection and (pdg_edges is None or cfg is None):
        raise MissingBaseError("PDG selected but not built")
    if BaseGraphKind.AST in selection:
        nodes = dict(ast_graph.nodes)
        edges = list(ast_graph.edges)
    else:
        if BaseGraphKind.CFG in selection:
            keep = set(cfg.all_nodes())
        else:
            keep = {cfg.entry, cfg.exit}
            keep.update(n for e in pdg_edges for n in (e.source, e.target))
        nodes = {n: _graph_node(ast[n]) for n in sorted(keep)}
        edges = []
    if BaseGraphKind.CFG in selection:
        edges += cfg.edges()
    if BaseGraphKind.PDG in selection:
        edges += pdg_edges
    return CodeGraph(ast.method_name(unit), nodes, edges, selection)


def build_bases(ast: SubjectAst, unit: int, selection) -> tuple[CodeGraph, Cfg]:
    """Build every selected base for ``unit`` and merge them."""
    selection = frozenset(BaseGraphKind(s) for s in selection)
    cfg = build_cfg(ast, unit)
    ast_graph = build_ast_graph(ast, unit) if BaseGraphKind.AST in selection else None
    pdg = build_pdg(ast, cfg) if BaseGraphKind.PDG in selection else None
    return merge_bases(ast, unit, selection, ast_graph, cfg, pdg), cfg


def merge_class(method_graphs: list[CodeGraph], class_name: str, line: int = 0) -> CodeGraph:
    """Disjoint union of method graphs under a synthetic TYPE_DECL root.

    Ids are renumbered: the TYPE_DECL gets 0, then each graph's nodes in
    ascending original id order.
    """
    if not method_graphs:
        raise ValueError("merge_class needs at least one method graph")
    nodes = {0: GraphNode(0, K.TYPE_DECL.value, class_name, line)}
    edges: list[GraphEdge] = []
    bases: frozenset[BaseGraphKind] = frozenset()
    next_id = 1
    for g in method_graphs:
        mapping = {}
        for old in sorted(g.nodes):
            mapping[old] = next_id
            n = g.nodes[old]
            nodes[next_id] = GraphNode(next_id, n.kind, n.code, n.line)
            next_id += 1
        edges.extend(GraphEdge(mapping[e.source], mapping[e.target], e.label) for e in g.edges)
        edges.append(GraphEdge(0, mapping[_root_of(g)], EdgeLabel.AST))
        bases |= g.bases
    return CodeGraph(class_name, nodes, edges, bases)


def _root_of(g: CodeGraph) -> int:
    methods = sorted(n.id for n in g.nodes.values() if n.kind == K.METHOD_DECL.value)
    if methods:
        return methods[0]
    targets = {e.target for e in g.edges_with(EdgeLabel.AST)}
    roots = [n for n in sorted(g.nodes) if n not in targets]
    return roots[0]
