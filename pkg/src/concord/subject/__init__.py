"""Subject-language front end: tokenizer, parser and tree queries."""

from concord.subject.nodes import (
    AstNodeKind,
    OperatorClass,
    SubjectAst,
    SubjectAstNode,
    enclosing_blocks,
    is_variable,
    is_write,
    leaves_in_order,
)
from concord.subject.parser import parse_subject

__all__ = [
    "AstNodeKind",
    "OperatorClass",
    "SubjectAst",
    "SubjectAstNode",
    "enclosing_blocks",
    "is_variable",
    "is_write",
    "leaves_in_order",
    "parse_subject",
]
