"""Error-tolerant recursive-descent parser for the subject language.

The accepted language is a C/Java-like subset: type declarations used as
method containers, methods with typed parameters, the usual structured
statements and an expression grammar with C precedence. Anything the parser
does not understand inside a method body is skipped up to the next ``;`` or
balanced ``}`` and kept as an opaque LITERAL leaf, so truncated or pruned code
still yields a usable tree.
"""

from __future__ import annotations

import bisect
import logging

from concord.subject.lexer import KEYWORDS, MODIFIERS, PRIMITIVE_TYPES, Token, tokenize
from concord.subject.nodes import AstNodeKind as K
from concord.subject.nodes import OperatorClass, SubjectAst, SubjectAstNode

log = logging.getLogger(__name__)

ARITH, BITWISE, LOGICAL, REL, OTHER = (
    OperatorClass.ARITHMETIC,
    OperatorClass.BITWISE,
    OperatorClass.LOGICAL,
    OperatorClass.RELATIONAL,
    OperatorClass.OTHER,
)

# symbol -> (precedence, operator name, class)
BINARY_OPS = {
    "||": (1, "or", LOGICAL),
    "&&": (2, "and", LOGICAL),
    "|": (3, "or", BITWISE),
    "^": (4, "xor", BITWISE),
    "&": (5, "and", BITWISE),
    "==": (6, "equals", REL),
    "!=": (6, "notEquals", REL),
    "<": (7, "lessThan", REL),
    ">": (7, "greaterThan", REL),
    "<=": (7, "lessEqualsThan", REL),
    ">=": (7, "greaterEqualsThan", REL),
    "instanceof": (7, "instanceOf", OTHER),
    "<<": (8, "shiftLeft", BITWISE),
    ">>": (8, "shiftRight", BITWISE),
    ">>>": (8, "unsignedShiftRight", OTHER),
    "+": (9, "add", ARITH),
    "-": (9, "sub", ARITH),
    "*": (10, "mult", ARITH),
    "/": (10, "div", ARITH),
    "%": (10, "mod", ARITH),
    "**": (11, "exp", ARITH),
}
RIGHT_ASSOC = {"**"}

# Sign operators share the name and class of their binary counterparts.
UNARY_OPS = {
    "-": ("sub", ARITH),
    "+": ("add", ARITH),
    "!": ("not", LOGICAL),
    "~": ("not", BITWISE),
}

COMPOUND_ASSIGN = {
    "+=": "assignPlus",
    "-=": "assignMinus",
    "*=": "assignMult",
    "/=": "assignDiv",
    "%=": "assignMod",
    "&=": "assignAnd",
    "|=": "assignOr",
    "^=": "assignXor",
    "<<=": "assignShiftLeft",
    ">>=": "assignShiftRight",
    ">>>=": "assignUnsignedShiftRight",
}

_TYPE_QUALIFIERS = {"const", "volatile", "struct", "union", "enum", "unsigned", "signed", "final"}
_TYPE_DECL_WORDS = {"class", "interface", "enum", "record", "struct", "union"}
_CAST_FOLLOW_KINDS = {"ident", "number", "string", "char"}


class ParseFail(Exception):
    pass


class _N:
    """Mutable node used while parsing; frozen into SubjectAstNode afterwards."""

    __slots__ = ("kind", "start", "end", "children", "field", "operator", "operator_class", "token", "recovered")

    def __init__(self, kind, start, end, children=(), field=None, operator=None, operator_class=None,
                 token=None, recovered=False):
        self.kind = kind
        self.start = start
        self.end = end
        self.children = [c for c in children if c is not None]
        self.field = field
        self.operator = operator
        self.operator_class = operator_class
        self.token = token
        self.recovered = recovered


def _as(node: _N | None, role: str) -> _N | None:
    if node is not None:
        node.field = role
    return node


class _Parser:
    def __init__(self, source: bytes):
        self.src = source
        self.toks = tokenize(source)
        self.i = 0
        self.warnings: list[str] = []

    # ------------------------------------------------------------ helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    @property
    def prev_end(self) -> int:
        return self.toks[self.i - 1].end if self.i else 0

    def take(self) -> Token:
        tok = self.tok
        if tok.kind == "eof":
            raise ParseFail("unexpected end of input")
        self.i += 1
        return tok

    def expect_op(self, text: str) -> Token:
        if not self.tok.is_op(text):
            raise ParseFail(f"expected {text!r}, found {self.tok.text!r}")
        return self.take()

    def expect_ident(self) -> Token:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise ParseFail(f"expected identifier, found {tok.text!r}")
        return self.take()

    def leaf(self, kind: K, tok: Token, field=None, **kw) -> _N:
        return _N(kind, tok.start, tok.end, field=field, **kw)

    def skip_balanced(self) -> None:
        """Skip a bracketed group starting at the current opening token."""
        opener = self.take()
        closer = {"(": ")", "[": "]", "{": "}", "<": ">"}[opener.text]
        depth = 1
        while depth:
            tok = self.take()
            if tok.is_op(opener.text):
                depth += 1
            elif tok.is_op(closer):
                depth -= 1

    def skip_modifiers(self) -> None:
        while True:
            tok = self.tok
            if tok.kind == "ident" and tok.text in MODIFIERS and not self.peek().is_op("(", "=", ";", ".", ","):
                self.i += 1
            elif tok.is_op("@") and not self.peek().is_word("interface"):
                self.i += 1
                self.expect_ident()
                while self.tok.is_op(".") and self.peek().kind == "ident":
                    self.i += 2
                if self.tok.is_op("("):
                    self.skip_balanced()
            else:
                return

    def skip_region(self) -> tuple[int, int]:
        """Skip to the next ``;`` or balanced ``}``; returns the byte span skipped."""
        start = self.tok.start
        first = self.tok
        depth = 0
        while True:
            tok = self.tok
            if tok.kind == "eof":
                break
            if tok.is_op("(", "[", "{"):
                depth += 1
            elif tok.is_op(")", "]", "}"):
                if depth == 0:
                    if tok.is_op("}"):
                        break
                    # stray closer: consume it so the region makes progress
                    self.i += 1
                    continue
                depth -= 1
                if depth == 0 and tok.is_op("}"):
                    self.i += 1
                    if first.is_word("do") and self.tok.is_word("while"):
                        continue
                    if self.tok.is_op(";"):
                        self.i += 1
                    break
            elif tok.is_op(";") and depth == 0:
                self.i += 1
                break
            self.i += 1
        if self.prev_end <= start and self.tok.kind != "eof":
            self.i += 1
        return start, max(start, self.prev_end)

    # ------------------------------------------------------------ file level

    def parse_file(self) -> _N:
        children = self.members(in_body=False)
        if self.tok.kind != "eof":
            self.warnings.append("trailing tokens ignored")
        return _N(K.FILE, 0, len(self.src), children)

    def members(self, in_body: bool) -> list[_N]:
        out: list[_N] = []
        while True:
            tok = self.tok
            if tok.kind == "eof":
                if in_body:
                    self.warnings.append(f"unbalanced braces: missing '}}' at end of file (offset {tok.start})")
                return out
            if tok.is_op("}"):
                if in_body:
                    return out
                self.warnings.append(f"unbalanced braces: stray '}}' at offset {tok.start}")
                self.i += 1
                continue
            if tok.is_op(";"):
                self.i += 1
                continue
            node = self.member()
            if node is not None:
                out.append(node)

    def member(self) -> _N | None:
        start_i = self.i
        if self.tok.is_word("package", "import", "typedef", "using", "namespace"):
            self.skip_region()
            return None
        try:
            self.skip_modifiers()
            if self.tok.is_op("@") and self.peek().is_word("interface"):
                self.i += 1
            if self.tok.kind == "ident" and self.tok.text in _TYPE_DECL_WORDS and self._is_type_decl():
                return self.type_decl(start_i)
            if self.tok.is_op("{"):
                self.skip_balanced()
                return None
            if self.tok.is_op("<"):
                self.skip_balanced()
            return self.method(start_i)
        except ParseFail:
            self.i = start_i
            self.skip_region()
            return None

    def _is_type_decl(self) -> bool:
        j = self.i + 1
        if self.toks[j].kind != "ident":
            return False
        depth = 0
        while self.toks[j].kind != "eof":
            tok = self.toks[j]
            if tok.is_op("(", "<"):
                depth += 1
            elif tok.is_op(")", ">"):
                depth -= 1
            elif tok.is_op(">>"):
                depth -= 2
            elif depth <= 0 and tok.is_op("{"):
                return True
            elif depth <= 0 and tok.is_op(";", "=", "*"):
                return False
            elif tok.is_op("(") and depth == 0:
                return False
            j += 1
        return False

    def type_decl(self, start_i: int) -> _N:
        start = self.toks[start_i].start
        keyword = self.take()
        name = self.expect_ident()
        while not self.tok.is_op("{"):
            if self.tok.is_op("(", "<"):
                self.skip_balanced()
            else:
                self.take()
        self.take()
        if keyword.text == "enum":
            self._skip_enum_constants()
        members = self.members(in_body=True)
        if self.tok.is_op("}"):
            self.i += 1
        return _N(K.TYPE_DECL, start, self.prev_end,
                  [self.leaf(K.IDENTIFIER, name, "name")] + [_as(m, "member") for m in members])

    def _skip_enum_constants(self) -> None:
        while not self.tok.is_op(";", "}") and self.tok.kind != "eof":
            if self.tok.is_op("(", "{"):
                self.skip_balanced()
            else:
                self.i += 1
        if self.tok.is_op(";"):
            self.i += 1

    def method(self, start_i: int) -> _N:
        start = self.toks[start_i].start
        ret = None
        if self.tok.kind == "ident" and self.peek().is_op("("):
            name = self.expect_ident()
        else:
            ret = self.parse_type()
            name = self.expect_ident()
        self.expect_op("(")
        params_start = self.i
        try:
            params = self.params()
            self.expect_op(")")
        except ParseFail:
            self.i = params_start - 1
            self.skip_balanced()
            if not (self.tok.is_op("{") or self.tok.is_word("throws")):
                raise
            lo = self.toks[params_start].start
            hi = self.toks[self.i - 1].start
            params = [_N(K.LITERAL, lo, hi, field="param", operator_class=OTHER, recovered=True)] if hi > lo else []
        while self.tok.is_op("[") and self.peek().is_op("]"):
            self.i += 2
        while self.tok.is_word("const", "override", "noexcept"):
            self.i += 1
        if self.tok.is_word("throws"):
            while not self.tok.is_op("{", ";") and self.tok.kind != "eof":
                self.take()
        body = None
        if self.tok.is_op("{"):
            body = _as(self.block(), "body")
        elif self.tok.is_op(";"):
            self.take()
        else:
            raise ParseFail("expected method body")
        children = [_as(ret, "type"), self.leaf(K.IDENTIFIER, name, "name")]
        children += [_as(p, "param") for p in params]
        children.append(body)
        return _N(K.METHOD_DECL, start, self.prev_end, children)

    def params(self) -> list[_N]:
        out: list[_N] = []
        if self.tok.is_op(")"):
            return out
        if self.tok.is_word("void") and self.peek().is_op(")"):
            self.take()
            return out
        while True:
            out.append(self.param())
            if not self.tok.is_op(","):
                return out
            self.take()

    def param(self) -> _N:
        self.skip_modifiers()
        start = self.tok.start
        typ = self.parse_type()
        if self.tok.is_op("..."):
            self.take()
            typ.end = self.prev_end
        name = self.expect_ident()
        while self.tok.is_op("[") and self.peek().is_op("]"):
            self.i += 2
        return _N(K.PARAM, start, self.prev_end, [_as(typ, "type"), self.leaf(K.IDENTIFIER, name, "decl")])

    # ------------------------------------------------------------ types

    def parse_type(self) -> _N:
        start = self.tok.start
        while (
            self.tok.kind == "ident"
            and (
                self.tok.text in _TYPE_QUALIFIERS
                or (self.tok.text in ("long", "short") and self.peek().text in ("int", "long", "double", "char"))
            )
            and self.peek().kind == "ident"
            and self.peek().text not in KEYWORDS
        ):
            self.i += 1
        self.expect_ident()
        while True:
            if self.tok.is_op(".") and self.peek().kind == "ident" and self.peek().text not in KEYWORDS:
                self.i += 2
            elif self.tok.is_op("<"):
                self.skip_type_args()
            else:
                break
        while True:
            if self.tok.is_op("[") and self.peek().is_op("]"):
                self.i += 2
            elif self.tok.is_op("*"):
                self.i += 1
                while self.tok.is_word("const"):
                    self.i += 1
            else:
                break
        return _N(K.TYPE_NAME, start, self.prev_end)

    def skip_type_args(self) -> None:
        depth = 0
        while True:
            tok = self.tok
            if tok.is_op("<"):
                depth += 1
            elif tok.is_op(">"):
                depth -= 1
            elif tok.is_op(">>"):
                depth -= 2
            elif tok.is_op(">>>"):
                depth -= 3
            elif not (tok.kind == "ident" or tok.is_op(".", ",", "?", "[", "]", "&")):
                raise ParseFail("malformed type arguments")
            self.i += 1
            if depth < 0:
                raise ParseFail("malformed type arguments")
            if depth == 0:
                return

    def looks_like_decl(self) -> bool:
        save = self.i
        try:
            self.skip_modifiers()
            self.parse_type()
            tok = self.tok
            if tok.kind != "ident" or tok.text in KEYWORDS:
                return False
            return self.peek().is_op("=", ";", ",", "[", ":")
        except ParseFail:
            return False
        finally:
            self.i = save

    # ------------------------------------------------------------ statements

    def block(self) -> _N:
        start = self.expect_op("{").start
        stmts: list[_N] = []
        while not self.tok.is_op("}"):
            if self.tok.kind == "eof":
                self.warnings.append(f"unbalanced braces: missing '}}' at end of file (offset {self.tok.start})")
                return _N(K.BLOCK, start, self.prev_end, stmts)
            stmt = self.statement()
            if stmt is not None:
                stmts.append(_as(stmt, "stmt"))
        self.take()
        return _N(K.BLOCK, start, self.prev_end, stmts)

    def statement(self) -> _N | None:
        start_i = self.i
        try:
            return self._statement()
        except ParseFail:
            self.i = start_i
            lo, hi = self.skip_region()
            if hi <= lo:
                return None
            leaf = _N(K.LITERAL, lo, hi, operator_class=OTHER, recovered=True)
            return _N(K.EXPR_STMT, lo, hi, [leaf], recovered=True)

    def _statement(self) -> _N | None:
        tok = self.tok
        if tok.is_op("{"):
            return self.block()
        if tok.is_op(";"):
            self.take()
            return None
        if tok.kind == "ident":
            word = tok.text
            if word == "if":
                return self.if_stmt()
            if word == "while":
                return self.while_stmt()
            if word == "for":
                return self.for_stmt()
            if word == "try":
                return self.try_stmt()
            if word == "return":
                self.take()
                value = None if self.tok.is_op(";") else self.expression()
                self.expect_op(";")
                return _N(K.RETURN_STMT, tok.start, self.prev_end, [_as(value, "value")])
            if word in ("break", "continue"):
                self.take()
                children = [self.leaf(K.OPERATOR, tok, operator=word, operator_class=OTHER)]
                if self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
                    children.append(self.leaf(K.IDENTIFIER, self.take(), "label"))
                self.expect_op(";")
                return _N(K.EXPR_STMT, tok.start, self.prev_end, children)
            if word == "throw":
                self.take()
                value = self.expression()
                op = _N(K.OPERATOR, tok.start, value.end, [_as(value, "operand")], operator="throw",
                        operator_class=OTHER, token=(tok.start, tok.end))
                self.expect_op(";")
                return _N(K.EXPR_STMT, tok.start, self.prev_end, [op])
            if word in ("do", "switch", "synchronized", "class", "interface", "enum", "else", "case",
                        "default", "goto", "catch", "finally"):
                raise ParseFail(f"unsupported statement {word!r}")
            if word not in KEYWORDS and self.peek().is_op(":"):
                self.i += 2
                return self._statement()
        if self.looks_like_decl():
            node = self.local_decl()
            self.expect_op(";")
            node.end = self.prev_end
            return node
        expr = self.expression()
        self.expect_op(";")
        return _N(K.EXPR_STMT, expr.start, self.prev_end, [expr])

    def local_decl(self) -> _N:
        self.skip_modifiers()
        start = self.tok.start
        typ = self.parse_type()
        children: list[_N] = [_as(typ, "type")]
        while True:
            name = self.expect_ident()
            ident = self.leaf(K.IDENTIFIER, name)
            while self.tok.is_op("["):
                # `int a[]` and C's `int a[4]`; the dimension is not kept
                self.take()
                if not self.tok.is_op("]"):
                    self.expression()
                self.expect_op("]")
            if self.tok.is_op("="):
                children.append(self._assignment(_as(ident, "lhs"), self.take(), "declarator"))
            else:
                children.append(_as(ident, "decl"))
            if not self.tok.is_op(","):
                break
            self.take()
        return _N(K.LOCAL_DECL, start, self.prev_end, children)

    def _assignment(self, lhs: _N, op: Token, role: str | None = None) -> _N:
        rhs = self.array_init() if self.tok.is_op("{") else self.assignment()
        eq = self.leaf(K.OPERATOR, op, "op", operator="assign", operator_class=OTHER)
        return _N(K.ASSIGNMENT, lhs.start, rhs.end, [lhs, eq, _as(rhs, "rhs")], field=role)

    def if_stmt(self) -> _N:
        start = self.take().start
        cond = self.condition()
        then = self.statement()
        children = [cond, _as(then, "then")]
        if self.tok.is_word("else"):
            else_tok = self.take()
            body = self.statement()
            children.append(_N(K.ELSE_CLAUSE, else_tok.start, self.prev_end, [_as(body, "body")], field="else"))
        return _N(K.IF_STMT, start, self.prev_end, children)

    def condition(self) -> _N:
        self.expect_op("(")
        expr = self.expression()
        self.expect_op(")")
        return _N(K.CONDITION, expr.start, expr.end, [_as(expr, "operand")], field="cond")

    def while_stmt(self) -> _N:
        start = self.take().start
        cond = self.condition()
        body = self.statement()
        return _N(K.WHILE_STMT, start, self.prev_end, [cond, _as(body, "body")])

    def for_stmt(self) -> _N:
        start = self.take().start
        self.expect_op("(")
        save = self.i
        if self.looks_like_decl():
            decl_start = self.tok.start
            self.skip_modifiers()
            typ = self.parse_type()
            name = self.expect_ident()
            if self.tok.is_op(":"):
                self.take()
                iterable = self.expression()
                self.expect_op(")")
                decl = _N(K.LOCAL_DECL, decl_start, name.end,
                          [_as(typ, "type"), self.leaf(K.IDENTIFIER, name, "decl")], field="decl")
                cond = _N(K.CONDITION, decl_start, iterable.end, [decl, _as(iterable, "iter")], field="cond")
                body = self.statement()
                return _N(K.FOR_STMT, start, self.prev_end, [cond, _as(body, "body")])
            self.i = save
        children: list[_N | None] = []
        if not self.tok.is_op(";"):
            if self.looks_like_decl():
                children.append(_as(self.local_decl(), "init"))
            else:
                children.extend(_as(e, "init") for e in self.expression_list())
        self.expect_op(";")
        if not self.tok.is_op(";"):
            expr = self.expression()
            children.append(_N(K.CONDITION, expr.start, expr.end, [_as(expr, "operand")], field="cond"))
        self.expect_op(";")
        if not self.tok.is_op(")"):
            children.extend(_as(e, "update") for e in self.expression_list())
        self.expect_op(")")
        children.append(_as(self.statement(), "body"))
        return _N(K.FOR_STMT, start, self.prev_end, children)

    def expression_list(self) -> list[_N]:
        out = [self.expression()]
        while self.tok.is_op(","):
            self.take()
            out.append(self.expression())
        return out

    def try_stmt(self) -> _N:
        start = self.take().start
        children: list[_N] = []
        if self.tok.is_op("("):
            self.take()
            while not self.tok.is_op(")"):
                if self.looks_like_decl():
                    children.append(_as(self.local_decl(), "resource"))
                else:
                    children.append(_as(self.expression(), "resource"))
                if self.tok.is_op(";"):
                    self.take()
            self.take()
        children.append(_as(self.block(), "body"))
        while self.tok.is_word("catch"):
            catch_start = self.take().start
            self.expect_op("(")
            self.skip_modifiers()
            param_start = self.tok.start
            typ = self.parse_type()
            while self.tok.is_op("|"):
                self.take()
                typ = self.parse_type()
            typ.start = param_start
            name = self.expect_ident()
            param = _N(K.PARAM, param_start, name.end, [_as(typ, "type"), self.leaf(K.IDENTIFIER, name, "decl")],
                       field="param")
            self.expect_op(")")
            body = _as(self.block(), "body")
            children.append(_N(K.CATCH_CLAUSE, catch_start, self.prev_end, [param, body], field="catch"))
        if self.tok.is_word("finally"):
            self.take()
            children.append(_as(self.block(), "finally"))
        return _N(K.TRY_STMT, start, self.prev_end, children)

    # ------------------------------------------------------------ expressions

    def expression(self) -> _N:
        return self.assignment()

    def assignment(self) -> _N:
        lhs = self.ternary()
        tok = self.tok
        if tok.is_op("="):
            self.take()
            return self._assignment(_as(lhs, "lhs"), tok)
        if tok.kind == "op" and tok.text in COMPOUND_ASSIGN:
            self.take()
            rhs = self.assignment()
            return _N(K.OPERATOR, lhs.start, rhs.end, [_as(lhs, "target"), _as(rhs, "operand")],
                      operator=COMPOUND_ASSIGN[tok.text], operator_class=OTHER, token=(tok.start, tok.end))
        return lhs

    def ternary(self) -> _N:
        cond = self.binary(1)
        if not self.tok.is_op("?"):
            return cond
        q = self.take()
        yes = self.assignment()
        self.expect_op(":")
        no = self.ternary()
        return _N(K.OPERATOR, cond.start, no.end, [_as(cond, "operand"), _as(yes, "operand"), _as(no, "operand")],
                  operator="conditional", operator_class=OTHER, token=(q.start, q.end))

    def binary(self, min_prec: int) -> _N:
        left = self.unary()
        while True:
            tok = self.tok
            key = tok.text if tok.kind == "op" or tok.is_word("instanceof") else None
            if key not in BINARY_OPS:
                return left
            prec, name, cls = BINARY_OPS[key]
            if prec < min_prec:
                return left
            self.take()
            if key == "instanceof":
                self.skip_modifiers()
                right = self.parse_type()
                if self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
                    self.take()  # pattern binding
            else:
                right = self.binary(prec if key in RIGHT_ASSOC else prec + 1)
            left = _N(K.OPERATOR, left.start, right.end, [_as(left, "operand"), _as(right, "operand")],
                      operator=name, operator_class=cls, token=(tok.start, tok.end))

    def unary(self) -> _N:
        tok = self.tok
        if tok.kind == "op" and tok.text in UNARY_OPS:
            self.take()
            operand = self.unary()
            name, cls = UNARY_OPS[tok.text]
            return _N(K.OPERATOR, tok.start, operand.end, [_as(operand, "operand")], operator=name,
                      operator_class=cls, token=(tok.start, tok.end))
        if tok.is_op("++", "--"):
            self.take()
            operand = self.unary()
            name = "preIncrement" if tok.text == "++" else "preDecrement"
            return _N(K.OPERATOR, tok.start, operand.end, [_as(operand, "target")], operator=name,
                      operator_class=OTHER, token=(tok.start, tok.end))
        if tok.is_op("("):
            cast = self.try_cast()
            if cast is not None:
                return cast
        return self.postfix(self.primary())

    def try_cast(self) -> _N | None:
        save = self.i
        lparen = self.take()
        try:
            typ = self.parse_type()
            self.expect_op(")")
        except ParseFail:
            self.i = save
            return None
        words = self.src[typ.start:typ.end].split()
        primitive = len(words) >= 1 and words[-1].rstrip(b"[]*").decode() in PRIMITIVE_TYPES
        nxt = self.tok
        follows = (
            (nxt.kind in _CAST_FOLLOW_KINDS and not nxt.is_word("instanceof"))
            or nxt.is_op("(", "!", "~")
        )
        if not (primitive and (follows or nxt.is_op("-", "+", "++", "--")) or follows):
            self.i = save
            return None
        try:
            operand = self.unary()
        except ParseFail:
            self.i = save
            return None
        return _N(K.OPERATOR, lparen.start, operand.end, [_as(typ, "type"), _as(operand, "operand")],
                  operator="cast", operator_class=OTHER, token=(lparen.start, lparen.end))

    def postfix(self, node: _N) -> _N:
        while True:
            tok = self.tok
            if tok.is_op(".") and self.peek().kind == "ident":
                self.take()
                member = self.leaf(K.IDENTIFIER, self.take(), "member")
                access = _N(K.FIELD_ACCESS, node.start, member.end, [_as(node, "object"), member])
                if self.tok.is_op("("):
                    args = self.arguments()
                    node = _N(K.CALL, node.start, self.prev_end, [_as(access, "callee")] + args)
                else:
                    node = access
            elif tok.is_op("["):
                self.take()
                index = self.expression()
                self.expect_op("]")
                node = _N(K.OPERATOR, node.start, self.prev_end, [_as(node, "operand"), _as(index, "operand")],
                          operator="index", operator_class=OTHER, token=(tok.start, tok.end))
            elif tok.is_op("++", "--"):
                self.take()
                name = "postIncrement" if tok.text == "++" else "postDecrement"
                node = _N(K.OPERATOR, node.start, tok.end, [_as(node, "target")], operator=name,
                          operator_class=OTHER, token=(tok.start, tok.end))
            elif tok.is_op("::", "->"):
                raise ParseFail("lambdas and method references are not supported")
            else:
                return node

    def arguments(self) -> list[_N]:
        self.expect_op("(")
        args: list[_N] = []
        if not self.tok.is_op(")"):
            args = [_as(a, "arg") for a in self.expression_list()]
        self.expect_op(")")
        return args

    def array_init(self) -> _N:
        lbrace = self.expect_op("{")
        elems: list[_N] = []
        while not self.tok.is_op("}"):
            elems.append(_as(self.array_init() if self.tok.is_op("{") else self.expression(), "operand"))
            if not self.tok.is_op(","):
                break
            self.take()
        self.expect_op("}")
        return _N(K.OPERATOR, lbrace.start, self.prev_end, elems, operator="arrayInit", operator_class=OTHER,
                  token=(lbrace.start, lbrace.end))

    def primary(self) -> _N:
        tok = self.tok
        if tok.kind in ("number", "string", "char"):
            return self.leaf(K.LITERAL, self.take())
        if tok.kind == "ident":
            if tok.text in ("true", "false", "null"):
                return self.leaf(K.LITERAL, self.take())
            if tok.text == "new":
                return self.creator()
            if tok.text in ("this", "super"):
                self.take()
                if self.tok.is_op("("):
                    args = self.arguments()
                    return _N(K.CALL, tok.start, self.prev_end, [self.leaf(K.IDENTIFIER, tok, "callee")] + args)
                return self.leaf(K.IDENTIFIER, tok)
            if tok.text in KEYWORDS:
                raise ParseFail(f"unexpected keyword {tok.text!r}")
            self.take()
            if self.tok.is_op("->"):
                raise ParseFail("lambdas are not supported")
            if self.tok.is_op("("):
                args = self.arguments()
                return _N(K.CALL, tok.start, self.prev_end, [self.leaf(K.IDENTIFIER, tok, "callee")] + args)
            return self.leaf(K.IDENTIFIER, tok)
        if tok.is_op("("):
            self.take()
            inner = self.expression()
            self.expect_op(")")
            if self.tok.is_op("->"):
                raise ParseFail("lambdas are not supported")
            return inner
        if tok.is_op("{"):
            return self.array_init()
        raise ParseFail(f"unexpected token {tok.text!r}")

    def creator(self) -> _N:
        new = self.take()
        start = self.tok.start
        self.expect_ident()
        while True:
            if self.tok.is_op(".") and self.peek().kind == "ident":
                self.i += 2
            elif self.tok.is_op("<"):
                self.skip_type_args()
            else:
                break
        typ = _N(K.TYPE_NAME, start, self.prev_end, field="callee")
        if self.tok.is_op("("):
            args = self.arguments()
            if self.tok.is_op("{"):
                self.skip_balanced()
            return _N(K.CALL, new.start, self.prev_end, [typ] + args, operator="new")
        dims: list[_N] = []
        while self.tok.is_op("["):
            self.take()
            if not self.tok.is_op("]"):
                dims.append(_as(self.expression(), "operand"))
            self.expect_op("]")
        if not dims and not self.tok.is_op("{"):
            raise ParseFail("malformed creator")
        typ.field = "type"
        if self.tok.is_op("{"):
            dims.append(_as(self.array_init(), "operand"))
        return _N(K.OPERATOR, new.start, self.prev_end, [typ] + dims, operator="newArray", operator_class=OTHER,
                  token=(new.start, new.end))


def _freeze(root: _N, source: bytes, path: str, warnings: list[str]) -> SubjectAst:
    line_starts = [0] + [i + 1 for i, b in enumerate(source) if b == 0x0A]
    nodes: dict[int, SubjectAstNode] = {}
    methods: list[int] = []
    counter = 0
    stack: list[tuple[_N, int | None]] = [(root, None)]
    while stack:
        n, parent = stack.pop()
        node_id = counter
        counter += 1
        node = SubjectAstNode(
            id=node_id,
            kind=n.kind,
            code=source[n.start:n.end].decode("utf-8", "replace"),
            span=(n.start, n.end),
            line=bisect.bisect_right(line_starts, n.start),
            operator_class=n.operator_class,
            operator=n.operator,
            field=n.field,
            token=n.token,
            parent=parent,
            recovered=n.recovered,
        )
        nodes[node_id] = node
        if parent is not None:
            nodes[parent].children.append(node_id)
        if n.kind is K.METHOD_DECL and any(c.field == "body" for c in n.children):
            methods.append(node_id)
        for child in reversed(n.children):
            stack.append((child, node_id))
    return SubjectAst(path, 0, nodes, methods, source, warnings)


def parse_subject(text: bytes | str, path: str = "<memory>") -> SubjectAst:
    """Parse a subject-language source file into a SubjectAst.

    Never raises on malformed input; unparseable regions become recovered
    LITERAL leaves and are reported in ``ast.warnings``.
    """
    source = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    parser = _Parser(source)
    root = parser.parse_file()
    ast = _freeze(root, source, path, parser.warnings)
    if not ast.methods:
        ast.warnings.append("no methods recovered")
    for w in ast.warnings:
        log.debug("%s: %s", path, w)
    return ast
