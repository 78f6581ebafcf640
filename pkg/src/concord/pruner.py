"""Statement-level pruning of source files.

Removable statements are located on the syntax tree, filtered by the task's
code conditions and then cut out of the original bytes by replacing each
statement span with the empty string. Nothing outside a span is touched, so
brackets and for-header separators survive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from concord.dsl import BlockKind, CodeCondition, ConditionAction, NodeKind
from concord.subject.nodes import ALLOWED_OPERATOR_CLASSES, AstNodeKind as K
from concord.subject.nodes import SubjectAst, SubjectAstNode, enclosing_blocks

PRINT_CALLEES = frozenset(
    {
        "System.out.println",
        "System.out.print",
        "System.err.println",
        "System.err.print",
        "printf",
        "print",
        "println",
        "puts",
    }
)
LOGGING_METHODS = frozenset({"trace", "debug", "info", "warn", "error", "fatal", "log"})
EXIT_CALLEES = frozenset({"System.exit", "exit", "abort", "Runtime.getRuntime().halt"})


@dataclass(frozen=True)
class StatementSpan:
    kind: NodeKind
    file: str
    span: tuple[int, int]
    line: int
    enclosing: frozenset[BlockKind] = frozenset()
    in_for_init: bool = False

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "file": self.file,
            "span": list(self.span),
            "line": self.line,
            "enclosing": sorted(b.value for b in self.enclosing),
            "in_for_init": self.in_for_init,
        }


@dataclass
class PruneReport:
    removed: list[StatementSpan] = field(default_factory=list)
    exempted: list[tuple[StatementSpan, BlockKind | None]] = field(default_factory=list)
    rewritten_bytes: int = 0

    def to_json(self) -> dict:
        return {
            "removed": [s.to_json() for s in self.removed],
            "exempted": [
                dict(s.to_json(), reason=reason.value if reason else None) for s, reason in self.exempted
            ],
            "rewritten_bytes": self.rewritten_bytes,
        }


# ---------------------------------------------------------------- matchers

def is_simple_assignment(ast: SubjectAst, node_id: int) -> bool:
    """Whether ``node_id`` assigns a literal-only expression to a lone identifier.

    The right-hand side may combine literals with arithmetic, bitwise,
    logical and relational operators, so ``int a = 1*7+(1-7)`` qualifies but
    ``int a = b + 1`` does not.
    """
    node = ast[node_id]
    if node.kind is not K.ASSIGNMENT:
        return False
    lhs = ast.child(node_id, "lhs")
    rhs = ast.child(node_id, "rhs")
    if lhs is None or rhs is None:
        return False
    left = list(ast.walk(lhs.id))
    if len(left) != 1 or left[0].kind is not K.IDENTIFIER:
        return False
    for n in ast.walk(rhs.id):
        if n.children:
            if n.kind is not K.OPERATOR or n.operator_class not in ALLOWED_OPERATOR_CLASSES:
                return False
        elif n.kind is not K.LITERAL or n.recovered:
            return False
    return True


def _normalise(code: str) -> str:
    return re.sub(r"\s+", "", code)


def _statement_call(ast: SubjectAst, stmt: SubjectAstNode) -> SubjectAstNode | None:
    if stmt.kind is not K.EXPR_STMT or len(stmt.children) != 1:
        return None
    call = ast[stmt.children[0]]
    return call if call.kind is K.CALL and call.operator != "new" else None


def callee_name(ast: SubjectAst, call: SubjectAstNode) -> str:
    callee = ast.child(call.id, "callee")
    return _normalise(callee.code) if callee else ""


def _matches_call(ast: SubjectAst, stmt: SubjectAstNode, kind: NodeKind) -> bool:
    call = _statement_call(ast, stmt)
    if call is None:
        return False
    name = callee_name(ast, call)
    if kind is NodeKind.PRINT:
        return name in PRINT_CALLEES
    if kind is NodeKind.SYS_EXIT:
        return name in EXIT_CALLEES
    if kind is NodeKind.LOGGING:
        callee = ast.child(call.id, "callee")
        if callee is None or callee.kind is not K.FIELD_ACCESS:
            return False
        receiver = ast.child(callee.id, "object")
        member = ast.child(callee.id, "member")
        return (
            member is not None
            and member.code in LOGGING_METHODS
            and receiver is not None
            and "log" in receiver.code.lower()
        )
    return False


def statement_span(stmt: SubjectAstNode) -> tuple[int, int]:
    """Bytes to delete for a whole statement.

    A statement that is the unbraced body of an if/else/loop keeps its ``;``
    so the construct still has a (now empty) body after removal.
    """
    lo, hi = stmt.span
    if stmt.field in ("then", "body") and stmt.code.endswith(";"):
        hi -= 1
    return lo, hi


def _simple_assignment_span(ast: SubjectAst, stmt: SubjectAstNode) -> tuple[tuple[int, int], bool] | None:
    """Span to delete if ``stmt`` is a simple assignment statement or for-init."""
    in_for_init = stmt.field == "init"
    if stmt.kind is K.LOCAL_DECL:
        declarators = [c for c in ast.children(stmt.id) if c.field != "type"]
        if len(declarators) == 1 and is_simple_assignment(ast, declarators[0].id):
            return (stmt.span if in_for_init else statement_span(stmt)), in_for_init
        return None
    if stmt.kind is K.EXPR_STMT and len(stmt.children) == 1:
        if is_simple_assignment(ast, stmt.children[0]):
            return statement_span(stmt), False
        return None
    if stmt.kind is K.ASSIGNMENT and in_for_init and is_simple_assignment(ast, stmt.id):
        # `for (i = 0, j = 0; ...)`: removing one initializer would strand a comma.
        if len(ast.children_with(stmt.parent, "init")) == 1:
            return stmt.span, True
    return None


def collect_statements(ast: SubjectAst, targets) -> list[StatementSpan]:
    """Locate every statement of the requested kinds, in source order."""
    targets = frozenset(targets)
    out: list[StatementSpan] = []
    if not targets:
        return out
    for method in ast.methods:
        for node in ast.walk(method):
            if node.kind not in (K.LOCAL_DECL, K.EXPR_STMT, K.ASSIGNMENT):
                continue
            if node.kind is K.LOCAL_DECL and node.field not in ("stmt", "init", "then", "body"):
                continue
            if node.kind is K.ASSIGNMENT and node.field != "init":
                continue
            for kind in (NodeKind.SIMPLE_ASSIGNMENT, NodeKind.PRINT, NodeKind.LOGGING, NodeKind.SYS_EXIT):
                if kind not in targets:
                    continue
                if kind is NodeKind.SIMPLE_ASSIGNMENT:
                    found = _simple_assignment_span(ast, node)
                    if found is None:
                        continue
                    span, in_for_init = found
                elif _matches_call(ast, node, kind):
                    span, in_for_init = statement_span(node), False
                else:
                    continue
                out.append(
                    StatementSpan(kind, ast.file_path, span, node.line, enclosing_blocks(ast, node.id), in_for_init)
                )
                break
    out.sort(key=lambda s: s.span)
    return out


def apply_conditions(
    spans: list[StatementSpan], conditions
) -> tuple[list[StatementSpan], list[tuple[StatementSpan, BlockKind | None]]]:
    """Split ``spans`` into those still to be removed and those exempted.

    ``exclude`` exempts statements inside any excluded block kind; ``include``
    restricts removal to statements inside an included kind. Exclusion wins
    when both apply. The exemption reason is the offending block kind, or
    None when a statement is exempted for lying outside every included kind.
    """
    conditions = list(conditions)
    excluded = [c.block for c in conditions if c.action is ConditionAction.EXCLUDE]
    included = [c.block for c in conditions if c.action is ConditionAction.INCLUDE]
    keep: list[StatementSpan] = []
    exempt: list[tuple[StatementSpan, BlockKind | None]] = []
    for span in spans:
        hit = next((b for b in excluded if b in span.enclosing), None)
        if hit is not None:
            exempt.append((span, hit))
        elif included and not any(b in span.enclosing for b in included):
            exempt.append((span, None))
        else:
            keep.append(span)
    return keep, exempt


def outermost(spans: list[StatementSpan]) -> list[StatementSpan]:
    """Drop spans nested inside (or identical to) an earlier-starting span."""
    out: list[StatementSpan] = []
    for span in sorted(spans, key=lambda s: (s.span[0], -s.span[1])):
        if out and span.span[1] <= out[-1].span[1]:
            continue
        if out and span.span[0] < out[-1].span[1]:
            raise ValueError(f"overlapping spans {out[-1].span} and {span.span}")
        out.append(span)
    return out


def rewrite_file(text: bytes, spans: list[StatementSpan]) -> tuple[bytes, PruneReport]:
    """Replace every (outermost) span of ``text`` with the empty string."""
    survivors = outermost(spans)
    pieces: list[bytes] = []
    pos = 0
    removed = 0
    for s in survivors:
        lo, hi = s.span
        if lo < 0 or hi > len(text) or lo >= hi:
            raise ValueError(f"span {s.span} out of bounds for a {len(text)}-byte file")
        pieces.append(text[pos:lo])
        removed += hi - lo
        pos = hi
    pieces.append(text[pos:])
    return b"".join(pieces), PruneReport(removed=survivors, rewritten_bytes=removed)


def prune_source(
    ast: SubjectAst, plan: list[tuple[frozenset[NodeKind], tuple[CodeCondition, ...]]]
) -> tuple[bytes, PruneReport]:
    """Prune one parsed file according to ``plan``.

    ``plan`` holds one ``(targets, conditions)`` pair per task, so each task's
    conditions only govern its own removals.
    """
    keep: list[StatementSpan] = []
    exempt: list[tuple[StatementSpan, BlockKind | None]] = []
    for targets, conditions in plan:
        k, e = apply_conditions(collect_statements(ast, targets), conditions)
        keep.extend(k)
        exempt.extend(e)
    kept_spans = {s.span for s in keep}
    exempt = [(s, r) for s, r in exempt if s.span not in kept_spans]
    new_text, report = rewrite_file(ast.source, list({s.span: s for s in keep}.values()))
    seen: set[tuple[int, int]] = set()
    for s, reason in sorted(exempt, key=lambda p: p[0].span):
        if s.span not in seen:
            seen.add(s.span)
            report.exempted.append((s, reason))
    return new_text, report
