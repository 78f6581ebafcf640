"""Typed syntax tree for subject-language source files."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

from concord.dsl import BlockKind


class AstNodeKind(str, enum.Enum):
    FILE = "FILE"
    TYPE_DECL = "TYPE_DECL"
    METHOD_DECL = "METHOD_DECL"
    PARAM = "PARAM"
    BLOCK = "BLOCK"
    IF_STMT = "IF_STMT"
    ELSE_CLAUSE = "ELSE_CLAUSE"
    WHILE_STMT = "WHILE_STMT"
    FOR_STMT = "FOR_STMT"
    TRY_STMT = "TRY_STMT"
    CATCH_CLAUSE = "CATCH_CLAUSE"
    RETURN_STMT = "RETURN_STMT"
    LOCAL_DECL = "LOCAL_DECL"
    ASSIGNMENT = "ASSIGNMENT"
    EXPR_STMT = "EXPR_STMT"
    CALL = "CALL"
    FIELD_ACCESS = "FIELD_ACCESS"
    IDENTIFIER = "IDENTIFIER"
    LITERAL = "LITERAL"
    OPERATOR = "OPERATOR"
    TYPE_NAME = "TYPE_NAME"
    CONDITION = "CONDITION"


class OperatorClass(str, enum.Enum):
    ARITHMETIC = "arithmetic"
    BITWISE = "bitwise"
    LOGICAL = "logical"
    RELATIONAL = "relational"
    OTHER = "other"


ALLOWED_OPERATOR_CLASSES = frozenset(
    {OperatorClass.ARITHMETIC, OperatorClass.BITWISE, OperatorClass.LOGICAL, OperatorClass.RELATIONAL}
)

LEAF_KINDS = frozenset(
    {AstNodeKind.IDENTIFIER, AstNodeKind.LITERAL, AstNodeKind.OPERATOR, AstNodeKind.TYPE_NAME}
)

# Identifier roles (the ``field`` of an IDENTIFIER) that name something other
# than a variable.
NAME_FIELDS = frozenset({"name", "member", "callee", "label"})
# Identifier roles that write the variable.
WRITE_FIELDS = frozenset({"lhs", "decl", "target"})


@dataclass
class SubjectAstNode:
    id: int
    kind: AstNodeKind
    code: str
    span: tuple[int, int]
    line: int
    children: list[int] = field(default_factory=list)
    operator_class: OperatorClass | None = None
    # Abstract operator name (``add``, ``lessThan``, ``assign`` ...).
    operator: str | None = None
    # Role of this node inside its parent (``cond``, ``then``, ``lhs`` ...).
    field: str | None = None
    # Byte span of the operator symbol for internal OPERATOR nodes.
    token: tuple[int, int] | None = None
    parent: int | None = None
    recovered: bool = False

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def token_start(self) -> int:
        return self.token[0] if self.token else self.span[0]


@dataclass
class SubjectAst:
    file_path: str
    root: int
    nodes: dict[int, SubjectAstNode]
    methods: list[int]
    source: bytes = b""
    warnings: list[str] = field(default_factory=list)

    def __getitem__(self, node_id: int) -> SubjectAstNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise KeyError(f"unknown node id {node_id}") from None

    def children(self, node_id: int) -> list[SubjectAstNode]:
        return [self.nodes[c] for c in self[node_id].children]

    def child(self, node_id: int, role: str) -> SubjectAstNode | None:
        for c in self.children(node_id):
            if c.field == role:
                return c
        return None

    def children_with(self, node_id: int, role: str) -> list[SubjectAstNode]:
        return [c for c in self.children(node_id) if c.field == role]

    def walk(self, node_id: int | None = None) -> Iterator[SubjectAstNode]:
        """Pre-order traversal of the subtree rooted at ``node_id``."""
        stack = [self.root if node_id is None else node_id]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.children))

    def leaves(self, node_id: int) -> list[SubjectAstNode]:
        return [n for n in self.walk(node_id) if n.is_leaf]

    def ancestors(self, node_id: int) -> Iterator[SubjectAstNode]:
        parent = self[node_id].parent
        while parent is not None:
            node = self.nodes[parent]
            yield node
            parent = node.parent

    def enclosing(self, node_id: int, kind: AstNodeKind) -> SubjectAstNode | None:
        for anc in self.ancestors(node_id):
            if anc.kind is kind:
                return anc
        return None

    def is_within(self, node_id: int, ancestor_id: int) -> bool:
        return node_id == ancestor_id or any(a.id == ancestor_id for a in self.ancestors(node_id))

    def method_name(self, method_id: int) -> str:
        name = self.child(method_id, "name")
        return name.code if name else f"method{method_id}"

    def method_body(self, method_id: int) -> SubjectAstNode | None:
        return self.child(method_id, "body")


def is_variable(node: SubjectAstNode) -> bool:
    """Whether an IDENTIFIER node refers to a variable (not a method, field or type)."""
    if node.kind is not AstNodeKind.IDENTIFIER or node.field in NAME_FIELDS:
        return False
    if node.code in ("this", "super"):
        return False
    # `Math.max`, `System.out`: capitalised receivers are class references.
    if node.field == "object" and node.code[:1].isupper():
        return False
    return True


def is_write(node: SubjectAstNode) -> bool:
    return node.field in WRITE_FIELDS


def leaves_in_order(ast: SubjectAst, method: int) -> list[int]:
    """Terminal tokens of a method in source order.

    Terminal tokens are the leaf nodes plus the internal OPERATOR nodes, which
    stand for their operator symbol and are positioned at it. The result is
    sorted by token offset and contains no duplicates.
    """
    node = ast[method]
    if node.kind is not AstNodeKind.METHOD_DECL:
        raise KeyError(f"node {method} is not a METHOD_DECL")
    tokens = [
        n for n in ast.walk(method)
        if n.is_leaf or (n.kind is AstNodeKind.OPERATOR and n.token is not None)
    ]
    tokens.sort(key=lambda n: (n.token_start, n.id))
    return [n.id for n in tokens]


def enclosing_blocks(ast: SubjectAst, node_id: int) -> frozenset[BlockKind]:
    """Block kinds of all control-structure ancestors of ``node_id``.

    An IF_STMT counts only for nodes in its then-branch; the else-branch is
    reported as ``else`` via its ELSE_CLAUSE.
    """
    ast[node_id]
    kinds: set[BlockKind] = set()
    prev = node_id
    for anc in ast.ancestors(node_id):
        if anc.kind is AstNodeKind.IF_STMT:
            if ast[prev].field == "then":
                kinds.add(BlockKind.IF)
        elif anc.kind is AstNodeKind.ELSE_CLAUSE:
            kinds.add(BlockKind.ELSE)
        elif anc.kind is AstNodeKind.WHILE_STMT:
            kinds.add(BlockKind.WHILE)
        elif anc.kind is AstNodeKind.FOR_STMT:
            kinds.add(BlockKind.FOR)
        elif anc.kind is AstNodeKind.CATCH_CLAUSE:
            kinds.add(BlockKind.CATCH)
        prev = anc.id
    return frozenset(kinds)
