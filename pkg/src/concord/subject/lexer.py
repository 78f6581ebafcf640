"""Byte-level tokenizer for the C/Java-like subject language."""

from __future__ import annotations

import re
from dataclasses import dataclass

# Longest operators first so the alternation is greedy.
_OPERATORS = sorted(
    """
    >>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= %= &= |= ^= << >> **
    + - * / % & | ^ ! ~ < > = ? : ; , . ( ) { } [ ] @
    """.split(),
    key=len,
    reverse=True,
)

_TOKEN_RE = re.compile(
    rb"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<comment>//[^\n]*|/\*.*?(?:\*/|\Z))
  | (?P<pp>\#[^\n]*)
  | (?P<string>"(?:\\.|[^"\\\n])*(?:"|(?=\n)|\Z))
  | (?P<char>'(?:\\.|[^'\\\n])*(?:'|(?=\n)|\Z))
  | (?P<number>0[xX][0-9a-fA-F_]+[lLuU]*|(?:\d[\d_]*(?:\.[\d_]*)?|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdDlLuU]*)
  | (?P<ident>[A-Za-z_$\x80-\xff][A-Za-z0-9_$\x80-\xff]*)
  | (?P<op>"""
    + b"|".join(re.escape(op.encode()) for op in _OPERATORS)
    + rb""")
  | (?P<other>.)
    """,
    re.VERBOSE | re.DOTALL,
)

KEYWORDS = frozenset(
    """
    if else while for do try catch finally return break continue throw new switch case
    default class interface enum struct record true false null this super instanceof
    synchronized goto typedef union
    """.split()
)

MODIFIERS = frozenset(
    """
    public private protected static final abstract native synchronized transient volatile
    strictfp default extern inline register const sealed
    """.split()
)

PRIMITIVE_TYPES = frozenset(
    "void boolean byte char short int long float double unsigned signed var bool size_t".split()
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, string, char, op, other, eof
    text: str
    start: int
    end: int

    def is_op(self, *texts: str) -> bool:
        return self.kind == "op" and self.text in texts

    def is_word(self, *texts: str) -> bool:
        return self.kind == "ident" and self.text in texts


def tokenize(source: bytes) -> list[Token]:
    """Split ``source`` into tokens, dropping whitespace, comments and preprocessor lines."""
    tokens: list[Token] = []
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        kind = m.lastgroup
        if kind not in ("ws", "comment", "pp"):
            tokens.append(Token(kind, m.group().decode("utf-8", "replace"), m.start(), m.end()))
        pos = m.end()
    tokens.append(Token("eof", "", n, n))
    return tokens
