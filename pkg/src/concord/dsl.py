"""Lexer, parser, validator and renderer for CONCORD configuration files.

A configuration has two top-level blocks::

    Tasks {
        task2 {
            Edge add next_token
            Node remove simple_assignment
            Conditions {
                exclude while_block
            }
        }
    }
    Representations {
        r2 {
            "/dir/repos_list.csv"
            "output_dir"
            AST
            task2
        }
    }

The parser is a hand-written recursive-descent parser with ordered
alternatives and no backtracking across rule boundaries.
"""

from __future__ import annotations

import dataclasses
import enum
import re
from dataclasses import dataclass, field


class EdgeKind(str, enum.Enum):
    NEXT_TOKEN = "next_token"
    NEXT_SIBLING = "next_sibling"
    FOR_CFG = "for_cfg"
    WHILE_CFG = "while_cfg"
    LAST_READ_WRITE = "last_read_write"
    GUARDED_BY = "guarded_by"
    RETURNS_TO = "returns_to"
    COMPUTED_FROM = "computed_from"
    LAST_LEXICAL_USE = "last_lexical_use"


class NodeKind(str, enum.Enum):
    PRINT = "print"
    LOGGING = "logging"
    SYS_EXIT = "sys_exit"
    SIMPLE_ASSIGNMENT = "simple_assignment"


class BaseGraphKind(str, enum.Enum):
    AST = "AST"
    CFG = "CFG"
    PDG = "PDG"


class BlockKind(str, enum.Enum):
    CATCH = "catch"
    FOR = "for"
    WHILE = "while"
    IF = "if"
    ELSE = "else"

    @property
    def token(self) -> str:
        return f"{self.value}_block"


class OpType(str, enum.Enum):
    ADD = "add"
    REMOVE = "remove"


class ConditionAction(str, enum.Enum):
    EXCLUDE = "exclude"
    INCLUDE = "include"


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


# Edge operations whose endpoints are AST nodes other than statements.
AST_EDGE_OPS = frozenset(EdgeKind) - {EdgeKind.RETURNS_TO}

_STRUCTURAL_KEYWORDS = frozenset(
    {"Tasks", "Representations", "Conditions", "Node", "Edge"}
    | {b.value for b in BaseGraphKind}
)


@dataclass(frozen=True)
class Location:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Operation:
    op_type: OpType
    target: EdgeKind | NodeKind
    # The `Node`/`Edge` keyword as written; informational only.
    element: str = field(default="", compare=False)
    loc: Location | None = field(default=None, compare=False)

    @property
    def is_well_typed(self) -> bool:
        if self.op_type is OpType.ADD:
            return isinstance(self.target, EdgeKind)
        return isinstance(self.target, NodeKind)

    def __str__(self) -> str:
        element = self.element or ("Edge" if isinstance(self.target, EdgeKind) else "Node")
        return f"{element} {self.op_type.value} {self.target.value}"


@dataclass(frozen=True)
class CodeCondition:
    action: ConditionAction
    block: BlockKind


@dataclass(frozen=True)
class Task:
    name: str
    operations: tuple[Operation, ...] = ()
    conditions: tuple[CodeCondition, ...] = ()
    loc: Location | None = field(default=None, compare=False)

    @property
    def edge_ops(self) -> list[EdgeKind]:
        """Edge additions in declaration order, duplicates dropped."""
        seen: list[EdgeKind] = []
        for op in self.operations:
            if op.op_type is OpType.ADD and isinstance(op.target, EdgeKind) and op.target not in seen:
                seen.append(op.target)
        return seen

    @property
    def remove_targets(self) -> frozenset[NodeKind]:
        return frozenset(
            op.target
            for op in self.operations
            if op.op_type is OpType.REMOVE and isinstance(op.target, NodeKind)
        )


@dataclass(frozen=True)
class RepresentationSpec:
    name: str
    repo_list_path: str
    output_dir: str
    base: tuple[BaseGraphKind, ...]
    tasks: tuple[str, ...]
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    loc: Location | None = None
    file: str = "<config>"

    def __str__(self) -> str:
        loc = self.loc or Location(1, 1)
        return f"{self.severity.value}: {self.file}:{loc.line}:{loc.col}: {self.message}"


@dataclass(frozen=True)
class ConcordModel:
    tasks: dict[str, Task] = field(default_factory=dict)
    representations: tuple[RepresentationSpec, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.WARNING]

    @property
    def executable(self) -> bool:
        return not self.errors

    def tasks_for(self, rep: RepresentationSpec) -> list[Task]:
        return [self.tasks[name] for name in rep.tasks if name in self.tasks]


class ConcordSyntaxError(Exception):
    """Raised when a configuration does not conform to the grammar."""

    def __init__(self, errors: list[Diagnostic]):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


# ---------------------------------------------------------------- lexing

@dataclass(frozen=True)
class _Token:
    kind: str  # ID, STRING, LBRACE, RBRACE, EOF
    text: str
    loc: Location


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*(?:.|\n)*?\*/)
  | (?P<open_comment>/\*)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<open_string>")
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<lbrace>\{)
  | (?P<rbrace>\})
    """,
    re.VERBOSE,
)


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", r"\1", body)


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def tokenize(text: str, file: str = "<config>") -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        loc = Location(line, pos - line_start + 1)
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ConcordSyntaxError(
                [Diagnostic(Severity.ERROR, f"unexpected character {text[pos]!r}", loc, file)]
            )
        kind = m.lastgroup
        if kind == "open_comment":
            raise ConcordSyntaxError([Diagnostic(Severity.ERROR, "unterminated block comment", loc, file)])
        if kind == "open_string":
            raise ConcordSyntaxError([Diagnostic(Severity.ERROR, "unterminated string literal", loc, file)])
        lexeme = m.group()
        if kind == "string":
            tokens.append(_Token("STRING", _unescape(lexeme[1:-1]), loc))
        elif kind == "id":
            tokens.append(_Token("ID", lexeme, loc))
        elif kind == "lbrace":
            tokens.append(_Token("LBRACE", lexeme, loc))
        elif kind == "rbrace":
            tokens.append(_Token("RBRACE", lexeme, loc))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("EOF", "", Location(line, pos - line_start + 1)))
    return tokens


# ---------------------------------------------------------------- parsing

_EDGE_VALUES = {k.value: k for k in EdgeKind}
_NODE_VALUES = {k.value: k for k in NodeKind}
_BASE_VALUES = {k.value: k for k in BaseGraphKind}
_BLOCK_TOKENS = {k.token: k for k in BlockKind}


def _describe(tok: _Token) -> str:
    if tok.kind == "EOF":
        return "end of input"
    if tok.kind == "STRING":
        return f'string "{tok.text}"'
    return repr(tok.text)


class _Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0
        self.diagnostics: list[Diagnostic] = []

    @property
    def tok(self) -> _Token:
        return self.toks[self.i]

    def fail(self, expected: str) -> None:
        raise ConcordSyntaxError(
            [
                Diagnostic(
                    Severity.ERROR,
                    f"expected {expected}, found {_describe(self.tok)}",
                    self.tok.loc,
                    self.file,
                )
            ]
        )

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def take(self) -> _Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> _Token:
        if not self.at(kind, text):
            self.fail(what or repr(text or kind))
        return self.take()

    def name(self, what: str) -> _Token:
        if not self.at("ID") or self.tok.text in _STRUCTURAL_KEYWORDS:
            self.fail(what)
        return self.take()

    def model(self) -> ConcordModel:
        tasks: dict[str, Task] = {}
        reps: list[RepresentationSpec] = []
        seen_block = False
        if self.at("ID", "Tasks"):
            self.tasks_block(tasks)
            seen_block = True
        if self.at("ID", "Representations"):
            self.reps_block(reps)
            seen_block = True
        if not seen_block:
            self.fail("Tasks or Representations")
        if not self.at("EOF"):
            self.fail("Representations or end of input" if not reps else "end of input")
        return ConcordModel(tasks, tuple(reps), tuple(self.diagnostics))

    def tasks_block(self, tasks: dict[str, Task]) -> None:
        self.take()
        self.expect("LBRACE", "{")
        while not self.at("RBRACE"):
            task = self.task()
            if task.name in tasks:
                self.diagnostics.append(
                    Diagnostic(Severity.ERROR, f"duplicate task name '{task.name}'", task.loc, self.file)
                )
                continue
            tasks[task.name] = task
        self.take()

    def task(self) -> Task:
        name = self.name("task name or '}'")
        self.expect("LBRACE", "{")
        ops: list[Operation] = []
        conditions: tuple[CodeCondition, ...] = ()
        while self.at("ID", "Node") or self.at("ID", "Edge"):
            ops.append(self.operation())
        if self.at("ID", "Conditions"):
            conditions = self.conditions()
        if not self.at("RBRACE"):
            self.fail("'Node', 'Edge', 'Conditions' or '}'")
        self.take()
        return Task(name.text, tuple(ops), conditions, name.loc)

    def operation(self) -> Operation:
        element = self.take()
        if not (self.at("ID", "add") or self.at("ID", "remove")):
            self.fail("operation type 'add' or 'remove'")
        op_type = OpType(self.take().text)
        if not self.at("ID"):
            self.fail("edge or node type")
        text = self.tok.text
        target = _EDGE_VALUES.get(text) or _NODE_VALUES.get(text)
        if target is None:
            self.fail(
                "edge type ("
                + "|".join(_EDGE_VALUES)
                + ") or node type ("
                + "|".join(_NODE_VALUES)
                + ")"
            )
        self.take()
        return Operation(op_type, target, element.text, element.loc)

    def conditions(self) -> tuple[CodeCondition, ...]:
        self.take()
        self.expect("LBRACE", "{")
        out: list[CodeCondition] = []
        while not self.at("RBRACE"):
            if not (self.at("ID", "exclude") or self.at("ID", "include")):
                self.fail("'exclude', 'include' or '}'")
            action = ConditionAction(self.take().text)
            if not self.at("ID") or self.tok.text not in _BLOCK_TOKENS:
                self.fail("code block (" + "|".join(_BLOCK_TOKENS) + ")")
            out.append(CodeCondition(action, _BLOCK_TOKENS[self.take().text]))
        self.take()
        return tuple(out)

    def reps_block(self, reps: list[RepresentationSpec]) -> None:
        self.take()
        self.expect("LBRACE", "{")
        while not self.at("RBRACE"):
            rep = self.representation()
            if any(r.name == rep.name for r in reps):
                self.diagnostics.append(
                    Diagnostic(Severity.ERROR, f"duplicate representation name '{rep.name}'", rep.loc, self.file)
                )
                continue
            reps.append(rep)
        self.take()

    def representation(self) -> RepresentationSpec:
        name = self.name("representation name or '}'")
        self.expect("LBRACE", "{")
        repo_list = self.expect("STRING", what="string literal with the repository list path").text
        output_dir = self.expect("STRING", what="string literal with the output directory").text
        bases: list[BaseGraphKind] = []
        while self.at("ID") and self.tok.text in _BASE_VALUES:
            kind = _BASE_VALUES[self.take().text]
            if kind not in bases:
                bases.append(kind)
        if not bases:
            self.fail("base graph type (AST|CFG|PDG)")
        refs: list[str] = []
        while self.at("ID") and self.tok.text not in _STRUCTURAL_KEYWORDS:
            refs.append(self.take().text)
        if not refs:
            self.fail("task reference")
        self.expect("RBRACE", "}", what="task reference or '}'")
        return RepresentationSpec(name.text, repo_list, output_dir, tuple(bases), tuple(refs), name.loc)


def parse_config(text: str | bytes, file: str = "<config>") -> ConcordModel:
    """Parse configuration source into a model.

    Raises ConcordSyntaxError (carrying line/column diagnostics) if the text
    does not conform to the grammar.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text, file).model()


def validate_semantics(model: ConcordModel, file: str = "<config>") -> ConcordModel:
    """Return a copy of ``model`` with semantic diagnostics appended."""
    found: list[Diagnostic] = []
    for task in model.tasks.values():
        seen: set[Operation] = set()
        for op in task.operations:
            if not op.is_well_typed:
                kind = "an edge type" if isinstance(op.target, EdgeKind) else "a node type"
                allowed = "added" if op.op_type is OpType.REMOVE else "removed"
                found.append(
                    Diagnostic(
                        Severity.ERROR,
                        f"'{op}' in task '{task.name}' is invalid: {op.target.value} is {kind} "
                        f"and can only be {allowed}",
                        op.loc,
                        file,
                    )
                )
            elif op in seen:
                found.append(
                    Diagnostic(
                        Severity.WARNING,
                        f"duplicate operation '{op}' in task '{task.name}'",
                        op.loc,
                        file,
                    )
                )
            seen.add(op)
    for rep in model.representations:
        for ref in rep.tasks:
            if ref not in model.tasks:
                found.append(
                    Diagnostic(
                        Severity.ERROR,
                        f"representation '{rep.name}' references undeclared task '{ref}'",
                        rep.loc,
                        file,
                    )
                )
        if BaseGraphKind.AST in rep.base:
            continue
        for task in model.tasks_for(rep):
            for kind in task.edge_ops:
                if kind in AST_EDGE_OPS:
                    found.append(
                        Diagnostic(
                            Severity.WARNING,
                            f"{kind.value} requires AST base (representation '{rep.name}', task '{task.name}')",
                            rep.loc,
                            file,
                        )
                    )
    return dataclasses.replace(model, diagnostics=model.diagnostics + tuple(found))


def load_config(path, validate: bool = True) -> ConcordModel:
    """Read, parse and (optionally) validate a configuration file."""
    with open(path, "rb") as fh:
        data = fh.read()
    model = parse_config(data, str(path))
    return validate_semantics(model, str(path)) if validate else model


def render_config(model: ConcordModel, indent: str = "    ") -> str:
    """Emit canonical concrete syntax for ``model``."""
    if model.errors:
        raise ValueError("cannot render a model with error diagnostics")
    lines: list[str] = []
    if model.tasks or not model.representations:
        lines.append("Tasks {")
        for task in model.tasks.values():
            lines.append(f"{indent}{task.name} {{")
            for op in task.operations:
                element = "Edge" if isinstance(op.target, EdgeKind) else "Node"
                lines.append(f"{indent * 2}{element} {op.op_type.value} {op.target.value}")
            if task.conditions:
                lines.append(f"{indent * 2}Conditions {{")
                for cond in task.conditions:
                    lines.append(f"{indent * 3}{cond.action.value} {cond.block.token}")
                lines.append(f"{indent * 2}}}")
            lines.append(f"{indent}}}")
        lines.append("}")
    if model.representations:
        lines.append("Representations {")
        for rep in model.representations:
            lines.append(f"{indent}{rep.name} {{")
            lines.append(f'{indent * 2}"{_escape(rep.repo_list_path)}"')
            lines.append(f'{indent * 2}"{_escape(rep.output_dir)}"')
            for base in rep.base:
                lines.append(f"{indent * 2}{base.value}")
            for ref in rep.tasks:
                lines.append(f"{indent * 2}{ref}")
            lines.append(f"{indent}}}")
        lines.append("}")
    return "\n".join(lines) + "\n"
