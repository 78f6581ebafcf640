import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concord.dsl import BlockKind, CodeCondition, ConditionAction, NodeKind
from concord.pruner import (
    StatementSpan,
    apply_conditions,
    collect_statements,
    is_simple_assignment,
    outermost,
    prune_source,
    rewrite_file,
)
from concord.subject import parse_subject
from concord.subject.nodes import AstNodeKind as K
from generators import oracle_simple_assignment, random_initializer, random_method

GOLDEN = Path(__file__).resolve().parents[1] / "data" / "golden"
SA = frozenset({NodeKind.SIMPLE_ASSIGNMENT})
PRINT = frozenset({NodeKind.PRINT})


def exclude(*blocks):
    return tuple(CodeCondition(ConditionAction.EXCLUDE, b) for b in blocks)


def include(*blocks):
    return tuple(CodeCondition(ConditionAction.INCLUDE, b) for b in blocks)


def prune(src: bytes, targets, conditions=()):
    return prune_source(parse_subject(src), [(targets, conditions)])


def first_assignment(src: bytes):
    ast = parse_subject(src)
    node = next(n for n in ast.walk() if n.kind is K.ASSIGNMENT)
    return ast, node.id


def test_for_init_golden():
    out, report = prune((GOLDEN / "for_init.java").read_bytes(), SA)
    assert out == (GOLDEN / "for_init.pruned.java").read_bytes()
    (removed,) = report.removed
    assert removed.in_for_init
    assert removed.enclosing == {BlockKind.FOR}


@pytest.mark.parametrize(
    "stmt, expected",
    [
        ("int a = 1*7+(1-7);", True),
        ("int a = 0;", True),
        ("a = -1;", True),
        ("flag = !true && (1 < 2);", True),
        ("mask = ~0 ^ (3 << 2) | 0xff;", True),
        ('s = "x";', True),
        ("int a = b + 1;", False),
        ("int a = f(1);", False),
        ("int a = c ? 1 : 2;", False),
        ("int a = 1 >>> 2;", False),
        ("this.a = 1;", False),
        ("xs[0] = 1;", False),
        ("Foo f = new Foo();", False),
    ],
)
def test_is_simple_assignment(stmt, expected):
    ast, node = first_assignment(f"void f() {{ {stmt} }}".encode())
    assert is_simple_assignment(ast, node) is expected


def test_non_assignments_are_not_simple():
    ast = parse_subject(b"void f() { x += 1; x++; g(); }")
    assert not any(is_simple_assignment(ast, n.id) for n in ast.walk())


def test_removal_targets():
    src = b"""void f() {
    int a = 1;
    int b = a;
    System.out.println(b);
    log.info("x");
    LOGGER.debug("y");
    list.add(3);
    System.exit(1);
}"""
    ast = parse_subject(src)
    found = {k: [s.line for s in collect_statements(ast, {k})] for k in NodeKind}
    assert found[NodeKind.SIMPLE_ASSIGNMENT] == [2]
    assert found[NodeKind.PRINT] == [4]
    assert found[NodeKind.LOGGING] == [5, 6]
    assert found[NodeKind.SYS_EXIT] == [8]


def test_exclude_conditions():
    src = b"void f() {\n  int a = 1;\n  if (c) { int b = 2; } else { int e = 3; }\n  while (c) { int d = 4; }\n}\n"
    out, report = prune(src, SA, exclude(BlockKind.WHILE, BlockKind.IF))
    assert out == b"void f() {\n  \n  if (c) { int b = 2; } else {  }\n  while (c) { int d = 4; }\n}\n"
    assert sorted(reason for _, reason in report.exempted) == [BlockKind.IF, BlockKind.WHILE]


def test_include_conditions():
    src = b"void f() {\n  int a = 1;\n  while (c) { int d = 4; }\n}\n"
    out, report = prune(src, SA, include(BlockKind.WHILE))
    assert out == b"void f() {\n  int a = 1;\n  while (c) {  }\n}\n"
    assert [reason for _, reason in report.exempted] == [None]


def test_exclude_wins_over_include():
    src = b"void f() { while (c) { if (d) { int x = 1; } } }"
    out, _ = prune(src, SA, include(BlockKind.WHILE) + exclude(BlockKind.IF))
    assert out == src


def test_unbraced_body_keeps_semicolon():
    src = b"void f() { if (c) System.out.println(1); else x = 2; while (c) y = 3; }"
    out, _ = prune(src, SA | PRINT)
    assert out == b"void f() { if (c) ; else ; while (c) ; }"
    assert parse_subject(out).warnings == []


def test_multi_declarators_are_kept():
    src = b"void f() { int a = 1, b = 2; }"
    assert prune(src, SA)[0] == src


def test_for_init_assignment_forms():
    assert prune(b"void f() { for (i = 0; i < n; i++) { } }", SA)[0] == b"void f() { for (; i < n; i++) { } }"
    both = b"void f() { for (i = 0, j = 0; i < n; i++) { } }"
    assert prune(both, SA)[0] == both


def test_nested_spans_collapse_to_outermost():
    a = StatementSpan(NodeKind.PRINT, "f", (0, 10), 1)
    b = StatementSpan(NodeKind.PRINT, "f", (2, 5), 1)
    c = StatementSpan(NodeKind.PRINT, "f", (12, 14), 1)
    assert outermost([c, b, a]) == [a, c]
    with pytest.raises(ValueError):
        outermost([a, StatementSpan(NodeKind.PRINT, "f", (5, 12), 1)])


def test_rewrite_bounds_checked():
    with pytest.raises(ValueError):
        rewrite_file(b"abc", [StatementSpan(NodeKind.PRINT, "f", (1, 9), 1)])


def test_no_targets_is_identity():
    src = b"void f() { int a = 1; }"
    out, report = prune(src, frozenset())
    assert out == src and report.removed == [] and report.rewritten_bytes == 0


def test_per_task_conditions():
    src = b"void f() { if (c) { int a = 1; System.out.println(a); } }"
    plan = [(SA, exclude(BlockKind.IF)), (PRINT, ())]
    out, report = prune_source(parse_subject(src), plan)
    assert out == b"void f() { if (c) { int a = 1;  } }"
    assert len(report.exempted) == 1


def test_report_json():
    _, report = prune(b"void f() {\n  int a = 1;\n}", SA)
    data = report.to_json()
    assert data["removed"][0]["kind"] == "simple_assignment"
    assert data["removed"][0]["line"] == 2
    assert data["rewritten_bytes"] == len("int a = 1;")


def test_apply_conditions_partition():
    spans = [
        StatementSpan(NodeKind.PRINT, "f", (i, i + 1), 1, frozenset(kinds))
        for i, kinds in enumerate([(), (BlockKind.IF,), (BlockKind.WHILE, BlockKind.IF), (BlockKind.CATCH,)])
    ]
    keep, exempt = apply_conditions(spans, exclude(BlockKind.IF) + include(BlockKind.CATCH, BlockKind.IF))
    assert [s.span[0] for s in keep] == [3]
    assert sorted(s.span[0] for s, _ in exempt) == [0, 1, 2]


def test_initializer_oracle_fixed_seed():
    rng = random.Random(7)
    for _ in range(300):
        init = random_initializer(rng)
        ast, node = first_assignment(f"void m() {{ {init.text} }}".encode())
        assert is_simple_assignment(ast, node) == oracle_simple_assignment(init), init.text


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_pruning_is_deletion_only(rng):
    src = random_method(rng).encode()
    ast = parse_subject(src)
    targets = frozenset(rng.sample(list(NodeKind), rng.randrange(1, 5)))
    out, report = prune_source(ast, [(targets, ())])
    # the output is the input with the reported spans cut out, in order
    rebuilt = bytearray()
    pos = 0
    for s in report.removed:
        rebuilt += src[pos:s.span[0]]
        pos = s.span[1]
    rebuilt += src[pos:]
    assert bytes(rebuilt) == out
    assert len(src) - len(out) == report.rewritten_bytes
    assert out.count(b"{") == src.count(b"{") and out.count(b"}") == src.count(b"}")
    again = parse_subject(out)
    assert len(again.methods) == 1
    assert not any(n.recovered for n in again.walk())
    # pruning is idempotent
    assert prune_source(again, [(targets, ())])[0] == out
