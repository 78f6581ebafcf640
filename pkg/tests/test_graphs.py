import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concord.dsl import BaseGraphKind as B
from concord.graphs import (
    CodeGraph,
    EdgeLabel,
    GraphEdge,
    GraphNode,
    build_ast_graph,
    build_bases,
    build_cfg,
    build_pdg,
    def_use,
    merge_bases,
    merge_class,
    reaching_definitions,
)
from concord.subject import parse_subject
from concord.subject.nodes import AstNodeKind as K
from generators import random_flow_method, random_method
from oracles import enumerate_reaching_definitions

GUARDED_DECL = b"void foo(int x) {\n\tint a = 0;\n\tif (a < MIN) {\n\t   int b = a*MIN;\n\t}\n}\n"


def parse(src: bytes):
    ast = parse_subject(src)
    return ast, ast.methods[0]


def by_code(ast, code, kind=None):
    return next(n.id for n in ast.walk() if n.code == code and (kind is None or n.kind is kind))


def cfg_edges(ast, cfg):
    return {(ast[s].code, ast[d].code) for s, ds in cfg.successors.items() for d in ds}


def test_ast_graph_is_a_tree():
    ast, m = parse(GUARDED_DECL)
    g = build_ast_graph(ast, m)
    assert len(g.nodes) == len(list(ast.walk(m)))
    assert len(g.edges) == len(g.nodes) - 1
    assert all(e.label is EdgeLabel.AST for e in g.edges)
    targets = [e.target for e in g.edges]
    assert len(set(targets)) == len(targets) and m not in targets


def test_ast_graph_of_empty_method():
    ast, m = parse(b"void f(int a) { }")
    g = build_ast_graph(ast, m)
    assert {n.kind for n in g.nodes.values()} == {"METHOD_DECL", "TYPE_NAME", "IDENTIFIER", "PARAM", "BLOCK"}
    assert len(g.edges) == len(g.nodes) - 1


def test_unknown_unit():
    ast, m = parse(GUARDED_DECL)
    with pytest.raises(KeyError):
        build_ast_graph(ast, ast.root)
    with pytest.raises(KeyError):
        build_cfg(ast, 999)


def test_guarded_decl_cfg():
    ast, m = parse(GUARDED_DECL)
    cfg = build_cfg(ast, m)
    decl_a = by_code(ast, "int a = 0;")
    cond = by_code(ast, "a < MIN", K.CONDITION)
    decl_b = by_code(ast, "int b = a*MIN;")
    assert cfg.successors[cfg.entry] == [decl_a]
    assert cfg.successors[decl_a] == [cond]
    assert cfg.successors[cond] == [decl_b, m]
    assert cfg.successors[decl_b] == [m]
    assert cfg.exit == m
    assert cfg.statement_nodes == [decl_a, cond, decl_b]


def test_straight_line_cfg_is_a_path():
    ast, m = parse(b"void f() { a(); b(); c(); d(); }")
    cfg = build_cfg(ast, m)
    path = [cfg.entry]
    while path[-1] != cfg.exit:
        (nxt,) = cfg.successors[path[-1]]
        path.append(nxt)
    assert path[1:-1] == cfg.statement_nodes


def test_while_cfg():
    ast, m = parse(b"void f() { while (c) { b(); } }")
    assert cfg_edges(ast, build_cfg(ast, m)) == {
        ("{ while (c) { b(); } }", "c"),
        ("c", "b();"),
        ("b();", "c"),
        ("c", ast[m].code),
    }


def test_for_cfg():
    ast, m = parse(b"void f() { for (i = 0; i < n; i++) { b(); } }")
    edges = cfg_edges(ast, build_cfg(ast, m))
    assert {("i = 0", "i < n"), ("i < n", "b();"), ("b();", "i++"), ("i++", "i < n")} <= edges
    assert ("i < n", ast[m].code) in edges


def test_for_without_condition_and_break():
    ast, m = parse(b"void f() { for (;;) { if (d) break; g(); } h(); }")
    cfg = build_cfg(ast, m)
    edges = cfg_edges(ast, cfg)
    assert ("break;", "h();") in edges
    assert ("g();", "d") in edges
    assert cfg.warnings == []


def test_continue_return_throw():
    src = b"int f() { while (c) { if (d) continue; if (e) return 1; if (g) throw new X(); } return 0; }"
    ast, m = parse(src)
    edges = cfg_edges(ast, build_cfg(ast, m))
    assert ("continue;", "c") in edges
    assert ("return 1;", ast[m].code) in edges
    assert ("throw new X();", ast[m].code) in edges


def test_try_catch_edges():
    src = b"void f() { try { a(); b(); } catch (E e) { c(); } finally { d(); } }"
    ast, m = parse(src)
    cfg = build_cfg(ast, m)
    catch = next(n.id for n in ast.walk() if n.kind is K.CATCH_CLAUSE)
    a, b, c, d = (by_code(ast, s) for s in ["a();", "b();", "c();", "d();"])
    assert catch in cfg.successors[a] and catch in cfg.successors[b]
    assert cfg.successors[catch] == [c]
    assert cfg.successors[c] == [d]
    assert cfg.successors[b][0] == d


def test_unreachable_code_is_attached():
    ast, m = parse(b"int f() { return 1; g(); }")
    cfg = build_cfg(ast, m)
    assert cfg.warnings and "unreachable" in cfg.warnings[0]
    assert by_code(ast, "g();") in cfg.successors[cfg.entry]


def test_infinite_loop_reaches_exit():
    ast, m = parse(b"void f() { while (true) { g(); } }")
    cfg = build_cfg(ast, m)
    assert cfg.exit in cfg.successors[by_code(ast, "true", K.CONDITION)]
    ast, m = parse(b"void f() { for (;;) { g(); } }")
    cfg = build_cfg(ast, m)
    assert any("cannot reach exit" in w for w in cfg.warnings)


def test_guarded_decl_pdg():
    ast, m = parse(GUARDED_DECL)
    edges = {(ast[e.source].code, ast[e.target].code, e.label) for e in build_pdg(ast, build_cfg(ast, m))}
    assert edges == {
        ("int a = 0;", "a < MIN", EdgeLabel.PDG_DATA),
        ("int a = 0;", "int b = a*MIN;", EdgeLabel.PDG_DATA),
        ("a < MIN", "int b = a*MIN;", EdgeLabel.PDG_CTRL),
    }


def test_pdg_merge_point():
    ast, m = parse(b"void f() { x=1; if(c){x=2;} y=x; }")
    edges = {(ast[e.source].code, ast[e.target].code) for e in build_pdg(ast, build_cfg(ast, m))
             if e.label is EdgeLabel.PDG_DATA}
    assert ("x=1;", "y=x;") in edges and ("x=2;", "y=x;") in edges


def test_pdg_without_variables():
    ast, m = parse(b"void f() { g(); h(1); }")
    assert [e for e in build_pdg(ast, build_cfg(ast, m)) if e.label is EdgeLabel.PDG_DATA] == []


def test_parameters_are_defined_at_entry():
    ast, m = parse(b"int f(int p) { int q; return p; }")
    cfg = build_cfg(ast, m)
    defs, uses = def_use(ast, cfg)
    assert defs[cfg.entry] == {"p"}
    assert defs[by_code(ast, "int q;")] == set()
    pdg = build_pdg(ast, cfg)
    assert GraphEdge(cfg.entry, by_code(ast, "return p;"), EdgeLabel.PDG_DATA) in pdg


def test_merge_single_base_equals_builder():
    ast, m = parse(GUARDED_DECL)
    assert merge_bases(ast, m, {B.AST}, ast_graph=build_ast_graph(ast, m)) == build_ast_graph(ast, m)


def test_merge_ast_cfg_keeps_nodes():
    ast, m = parse(GUARDED_DECL)
    merged, cfg = build_bases(ast, m, {B.AST, B.CFG})
    assert set(merged.nodes) == set(build_ast_graph(ast, m).nodes)
    assert len(merged.edges_with(EdgeLabel.CFG)) == sum(len(v) for v in cfg.successors.values())


def test_merge_cfg_only_nodes():
    ast, m = parse(GUARDED_DECL)
    merged, cfg = build_bases(ast, m, {B.CFG})
    assert set(merged.nodes) == set(cfg.statement_nodes) | {cfg.entry, cfg.exit}


def test_merge_requires_selection_and_bases():
    ast, m = parse(GUARDED_DECL)
    with pytest.raises(ValueError):
        merge_bases(ast, m, set())
    with pytest.raises(ValueError):
        merge_bases(ast, m, {B.CFG})


def test_parallel_edges_with_distinct_labels():
    ast, m = parse(b"void f() { if (c) { g(); } }")
    merged, _ = build_bases(ast, m, {B.CFG, B.PDG})
    cond, call = by_code(ast, "c", K.CONDITION), by_code(ast, "g();")
    labels = {e.label for e in merged.edges if (e.source, e.target) == (cond, call)}
    assert labels == {EdgeLabel.CFG, EdgeLabel.PDG_CTRL}


def test_code_graph_rejects_dangling_and_duplicate_edges():
    nodes = {1: GraphNode(1, "X", "", 1), 2: GraphNode(2, "Y", "", 1)}
    g = CodeGraph("u", nodes, [GraphEdge(1, 2, EdgeLabel.AST), GraphEdge(1, 2, EdgeLabel.AST)])
    assert len(g.edges) == 1
    with pytest.raises(ValueError):
        CodeGraph("u", nodes, [GraphEdge(1, 3, EdgeLabel.AST)])


def test_merge_class():
    ast = parse_subject(b"class C { void f() { a(); } int g(int x) { return x; } }")
    f, g = (build_ast_graph(ast, m) for m in ast.methods)
    merged = merge_class([f, g], "C")
    assert len(merged.nodes) == len(f.nodes) + len(g.nodes) + 1
    assert len(merged.edges) == len(f.edges) + len(g.edges) + 2
    assert merged.nodes[0].kind == "TYPE_DECL"
    single = merge_class([f], "C")
    assert (len(single.nodes), len(single.edges)) == (len(f.nodes) + 1, len(f.edges) + 1)
    # the same graph twice: ids collide in the input but not in the output
    twice = merge_class([f, f], "C")
    assert len(twice.nodes) == 2 * len(f.nodes) + 1
    with pytest.raises(ValueError):
        merge_class([], "C")


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False))
def test_cfg_well_formed(rng):
    ast, m = parse(random_method(rng).encode())
    cfg = build_cfg(ast, m)
    for n in cfg.statement_nodes + [cfg.entry]:
        assert cfg.successors.get(n), n
    for n in cfg.statement_nodes:
        node = ast[n]
        if node.kind is K.CONDITION and ast[node.parent].kind in (K.IF_STMT, K.WHILE_STMT, K.FOR_STMT):
            assert len(cfg.successors[n]) == 2
    forward = {cfg.entry}
    stack = [cfg.entry]
    while stack:
        for s in cfg.successors.get(stack.pop(), ()):
            if s not in forward:
                forward.add(s)
                stack.append(s)
    assert set(cfg.statement_nodes) <= forward
    preds = cfg.predecessors()
    backward = {cfg.exit}
    stack = [cfg.exit]
    while stack:
        for p in preds[stack.pop()]:
            if p not in backward:
                backward.add(p)
                stack.append(p)
    assert set(cfg.statement_nodes) <= backward


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False))
def test_merge_is_label_partitioned(rng):
    ast, m = parse(random_method(rng).encode())
    merged, _ = build_bases(ast, m, {B.AST, B.CFG, B.PDG})
    ast_only = CodeGraph(merged.unit, merged.nodes, merged.edges_with(EdgeLabel.AST))
    assert ast_only == build_ast_graph(ast, m)


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_reaching_definitions_match_paths(rng):
    ast, m = parse(random_flow_method(rng).encode())
    cfg = build_cfg(ast, m)
    defs, _ = def_use(ast, cfg)
    assert reaching_definitions(ast, cfg) == enumerate_reaching_definitions(cfg, defs)
