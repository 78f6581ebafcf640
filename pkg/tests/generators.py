"""Random program and configuration generators shared by the test suite.

Every generator takes a ``random.Random`` so the same code serves fixed-seed
acceptance suites and hypothesis (via ``st.randoms``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from concord.dsl import BaseGraphKind, BlockKind, EdgeKind, NodeKind

# ---------------------------------------------------------------- configs

_WORDS = ["task", "edges", "prune", "rep", "graph", "alpha", "beta", "r", "t", "x"]


def _ident(rng: random.Random, taken: set[str]) -> str:
    while True:
        name = rng.choice(_WORDS) + ("" if rng.random() < 0.3 else str(rng.randrange(100)))
        if rng.random() < 0.2:
            name = name + "_" + rng.choice("abcxyz")
        if name not in taken:
            taken.add(name)
            return name


def _ws(rng: random.Random) -> str:
    return rng.choice([" ", "\n", "\n    ", "\t", "  ", " /* c */ ", " // note\n"])


def _string(rng: random.Random) -> str:
    chars = rng.choices(list("abc/._-") + ['\\"', "\\\\", " "], k=rng.randrange(0, 12))
    return '"' + "".join(chars) + '"'


@dataclass
class GeneratedConfig:
    text: str
    n_tasks: int
    n_reps: int
    ops: dict[str, list[tuple[str, str]]] = field(default_factory=dict)


def random_config(rng: random.Random) -> GeneratedConfig:
    """A grammar-valid, well-typed configuration with resolvable task references."""
    taken: set[str] = set()
    tasks: dict[str, list[tuple[str, str]]] = {}
    parts: list[str] = []
    w = lambda: _ws(rng)  # noqa: E731
    n_tasks = rng.randrange(0, 4)
    n_reps = rng.randrange(0, 3) if n_tasks else 0
    if n_tasks == 0 and n_reps == 0:
        n_tasks = 1
    if n_tasks:
        parts.append("Tasks" + w() + "{")
        for _ in range(n_tasks):
            name = _ident(rng, taken)
            ops = []
            body = [name, "{"]
            for _ in range(rng.randrange(0, 6)):
                if rng.random() < 0.6:
                    op = ("Edge", "add", rng.choice(list(EdgeKind)).value)
                else:
                    op = (rng.choice(["Node", "Edge"]), "remove", rng.choice(list(NodeKind)).value)
                ops.append(op)
                body.extend(op)
            if rng.random() < 0.5:
                body += ["Conditions", "{"]
                for _ in range(rng.randrange(0, 4)):
                    body += [rng.choice(["exclude", "include"]), rng.choice(list(BlockKind)).token]
                body.append("}")
            body.append("}")
            parts.append(w().join(body))
            tasks[name] = [(o[1], o[2]) for o in ops]
        parts.append("}")
    if n_reps:
        parts.append("Representations" + w() + "{")
        for _ in range(n_reps):
            name = _ident(rng, taken)
            bases = rng.sample(list(BaseGraphKind), rng.randrange(1, 4))
            refs = rng.choices(sorted(tasks), k=rng.randrange(1, 4))
            body = [name, "{", _string(rng), _string(rng), *(b.value for b in bases), *refs, "}"]
            parts.append(w().join(body))
        parts.append("}")
    return GeneratedConfig(w().join(parts) + rng.choice(["", "\n"]), n_tasks, n_reps, tasks)


# ---------------------------------------------------------------- expressions

ALLOWED_BINARY = {
    "arithmetic": ["+", "-", "*", "/", "%"],
    "bitwise": ["&", "|", "^", "<<", ">>"],
    "logical": ["&&", "||"],
    "relational": ["==", "!=", "<", ">", "<=", ">="],
}
OTHER_BINARY = [">>>"]
ALLOWED_UNARY = ["-", "+", "!", "~"]
LITERALS = ["0", "1", "7", "42", "3.5", "0x1f", "'c'", '"s"', "true", "false", "null", "10L"]
NAMES = ["a", "b", "n", "count", "value"]


@dataclass
class Expr:
    """Generator-side expression tree; ``allowed`` is the oracle's verdict for it."""

    kind: str  # lit, ident, binary, unary, paren, call, ternary, index, field
    text: str
    children: list["Expr"] = field(default_factory=list)
    op_allowed: bool = True


def random_expr(rng: random.Random, depth: int = 4, p_plain: float = 0.85) -> Expr:
    """Expression of nesting depth <= ``depth``; mostly literal-and-operator shaped."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < p_plain:
            lit = rng.choice(LITERALS)
            return Expr("lit", lit)
        return Expr("ident", rng.choice(NAMES))
    roll = rng.random()
    if roll < 0.6:
        if rng.random() < 0.93:
            cls = rng.choice(sorted(ALLOWED_BINARY))
            op = rng.choice(ALLOWED_BINARY[cls])
            allowed = True
        else:
            op = rng.choice(OTHER_BINARY)
            allowed = False
        left = random_expr(rng, depth - 1, p_plain)
        right = random_expr(rng, depth - 1, p_plain)
        return Expr("binary", f"({left.text}) {op} ({right.text})", [left, right], allowed)
    if roll < 0.72:
        op = rng.choice(ALLOWED_UNARY)
        inner = random_expr(rng, depth - 1, p_plain)
        # `- -1` would lex as `--`
        return Expr("unary", f"{op}({inner.text})", [inner])
    if roll < 0.8:
        inner = random_expr(rng, depth - 1, p_plain)
        return Expr("paren", f"({inner.text})", [inner])
    if roll < 0.88:
        args = [random_expr(rng, depth - 1, p_plain) for _ in range(rng.randrange(0, 3))]
        return Expr("call", f"f({', '.join(a.text for a in args)})", args, False)
    if roll < 0.94:
        c, t, e = (random_expr(rng, depth - 1, p_plain) for _ in range(3))
        return Expr("ternary", f"({c.text}) ? ({t.text}) : ({e.text})", [c, t, e], False)
    inner = random_expr(rng, depth - 1, p_plain)
    return Expr("index", f"arr[{inner.text}]", [inner], False)


@dataclass
class Initializer:
    text: str
    lhs_kind: str  # ident, field, index
    rhs: Expr
    declared: bool


def random_initializer(rng: random.Random) -> Initializer:
    rhs = random_expr(rng, rng.randrange(0, 5))
    lhs_kind = rng.choices(["ident", "field", "index"], weights=[8, 1, 1])[0]
    lhs = {"ident": "x", "field": "this.x", "index": "xs[0]"}[lhs_kind]
    declared = lhs_kind == "ident" and rng.random() < 0.6
    if declared:
        text = f"{rng.choice(['int', 'long', 'double', 'boolean', 'var'])} {lhs} = {rhs.text};"
    else:
        text = f"{lhs} = {rhs.text};"
    return Initializer(text, lhs_kind, rhs, declared)


def oracle_simple_assignment(init: Initializer) -> bool:
    """The four conditions, decided on the generator's own tree.

    1. it is an assignment (always, by construction);
    2. the left-hand side is a single identifier;
    3. every non-leaf of the right-hand side is an allowed-class operator;
    4. every leaf of the right-hand side is a literal.
    """
    if init.lhs_kind != "ident":
        return False

    def ok(e: Expr) -> bool:
        if e.kind == "lit":
            return True
        if e.kind == "ident":
            return False
        if e.kind in ("binary", "unary", "paren"):
            return e.op_allowed and all(ok(c) for c in e.children)
        return False  # calls, ternaries and indexing are not operator/literal shaped

    return ok(init.rhs)


# ---------------------------------------------------------------- methods

VARS = ["x", "y", "z"]


def _cond(rng: random.Random, names: list[str]) -> str:
    a, b = rng.choice(names), rng.choice(names + ["1", "10"])
    return f"{a} {rng.choice(['<', '>', '!=', '=='])} {b}"


def random_method(rng: random.Random, max_depth: int = 3, max_stmts: int = 12) -> str:
    """A Java method mixing declarations, assignments, calls, prints and control flow."""
    budget = [max_stmts]
    names = list(VARS)

    def expr() -> str:
        return rng.choice(
            [
                rng.choice(names),
                str(rng.randrange(10)),
                f"{rng.choice(names)} + {rng.randrange(5)}",
                f"{rng.choice(names)} * {rng.choice(names)}",
                f"g({rng.choice(names)}, {rng.randrange(3)})",
                f"{rng.randrange(3)} << {rng.randrange(3)}",
            ]
        )

    def stmt(depth: int, ind: str) -> list[str]:
        budget[0] -= 1
        v = rng.choice(names)
        kinds = ["assign", "assign", "compound", "incr", "call", "print", "log", "lit"]
        if depth < max_depth:
            kinds += ["if", "ifelse", "while", "for", "foreach", "try"]
        kind = rng.choice(kinds)
        if kind == "assign":
            return [f"{ind}{v} = {expr()};"]
        if kind == "lit":
            return [f"{ind}int {v}{rng.randrange(9)} = {rng.randrange(9)} + {rng.randrange(9)};"]
        if kind == "compound":
            return [f"{ind}{v} += {expr()};"]
        if kind == "incr":
            return [f"{ind}{v}++;"]
        if kind == "call":
            return [f"{ind}h({v});"]
        if kind == "print":
            return [f"{ind}System.out.println({v});"]
        if kind == "log":
            return [f'{ind}logger.info("v=" + {v});']
        if kind in ("if", "ifelse"):
            out = [f"{ind}if ({_cond(rng, names)}) {{", *block(depth + 1, ind + "    ")]
            if kind == "ifelse":
                out += [f"{ind}}} else {{", *block(depth + 1, ind + "    ")]
            return out + [f"{ind}}}"]
        if kind == "while":
            return [f"{ind}while ({_cond(rng, names)}) {{", *block(depth + 1, ind + "    "), f"{ind}}}"]
        if kind == "for":
            i = f"i{depth}"
            return [
                f"{ind}for (int {i} = 0; {i} < {rng.choice(names)}; {i}++) {{",
                *block(depth + 1, ind + "    "),
                f"{ind}}}",
            ]
        if kind == "foreach":
            return [f"{ind}for (int e{depth} : items) {{", *block(depth + 1, ind + "    "), f"{ind}}}"]
        return [
            f"{ind}try {{",
            *block(depth + 1, ind + "    "),
            f"{ind}}} catch (Exception ex{depth}) {{",
            *block(depth + 1, ind + "    "),
            f"{ind}}}",
        ]

    def block(depth: int, ind: str) -> list[str]:
        out: list[str] = []
        for _ in range(rng.randrange(1, 4)):
            if budget[0] <= 0:
                break
            out += stmt(depth, ind)
        return out

    lines = ["int m(int x, int y) {", "    int z = 0;", *block(0, "    ")]
    if rng.random() < 0.7:
        lines.append(f"    return {rng.choice(names)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def random_flow_method(rng: random.Random, max_stmts: int = 8) -> str:
    """Sequence / if / if-else / while over at most three variables.

    The CFG of the result has at most ``max_stmts`` statement and condition
    nodes, which keeps exhaustive path enumeration cheap.
    """
    names = VARS[: rng.randrange(1, 4)]
    budget = [max_stmts]

    def simple(ind: str) -> str:
        v, w = rng.choice(names), rng.choice(names)
        return ind + rng.choice([f"{v} = {w};", f"{v} = 1;", f"use({v});", f"{v} = {v} + {w};"])

    def stmts(ind: str, depth: int) -> list[str]:
        out: list[str] = []
        for _ in range(rng.randrange(1, 4)):
            if budget[0] <= 0:
                break
            roll = rng.random()
            if depth < 2 and budget[0] >= 2 and roll < 0.45:
                budget[0] -= 1
                kind = rng.choice(["if", "ifelse", "while"])
                head = "while" if kind == "while" else "if"
                body = stmts(ind + "    ", depth + 1) or [ind + "    ;"]
                out.append(f"{ind}{head} ({_cond(rng, names)}) {{")
                out.extend(body)
                if kind == "ifelse" and budget[0] > 0:
                    out.append(f"{ind}}} else {{")
                    out.extend(stmts(ind + "    ", depth + 1) or [ind + "    ;"])
                out.append(f"{ind}}}")
            else:
                budget[0] -= 1
                out.append(simple(ind))
        return out

    return "void m() {\n" + "\n".join(stmts("    ", 0)) + "\n}\n"
