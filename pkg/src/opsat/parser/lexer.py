"""Tokenizer for the LaTeX-style modeling language.

Spacing commands (``\\quad``, ``\\space``, ``\\,`` ...), ``\\label{...}``,
``\\left``/``\\right`` and ``%`` comments are skipped like whitespace, so the
concatenation of token lexemes and skipped text is the original source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import StrayCharacter, UnknownCommand

COMMAND = "command"
LETTER = "letter"
DIGITS = "digits"
PUNCT = "punct"
GROUPING = "grouping"
EOF = "eof"

GREEK = frozenset("""
Alpha Beta Gamma Delta Epsilon Zeta Eta Theta Iota Kappa Lambda Mu Nu Xi Omicron Pi Rho
Sigma Tau Upsilon Phi Chi Psi Omega alpha beta gamma delta epsilon zeta eta theta iota
kappa lambda mu nu xi omicron pi rho sigma tau upsilon phi chi psi omega varepsilon
vartheta varkappa varpi varrho varsigma varphi
""".split())

COMMANDS = frozenset("""
max min forall in notin not subset subseteq subsetneq le ge leq geq neq ne lt gt
cdot times frac sum prod vert lfloor rfloor lceil rceil cup cap setminus backslash
bigcup bigcap set dots cdots ldots emptyset mathcal mathbf boldsymbol
""".split()) | GREEK

SPACING = frozenset("space quad qquad nonumber notag left right displaystyle".split())

_SKIP_RE = re.compile(
    r"""
    (?: \s+
      | %[^\n]*
      | \\label\s*\{[^{}]*\}
      | \\tag\s*\{[^{}]*\}
      | \\[,;:!\ ]
    )
    """,
    re.VERBOSE,
)
_ENV_RE = re.compile(r"\\(begin|end)\s*\{\s*(align\*?)\s*\}")
_BB_RE = re.compile(r"\\mathbb\s*\{\s*([A-Za-z])\s*\}")
_NUM_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?")
_CMD_RE = re.compile(r"\\([A-Za-z]+)")

_PUNCT = ["&&", "...", "\\\\", "&", "_", "^", ",", "=", "<", ">", "+", "-", "*", "/",
          "|", "'", ":", ";", "!", "."]
_GROUP = {"{", "}", "(", ")", "[", "]"}


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    span: tuple = field(default=(0, 0, 0), compare=False)

    def is_(self, *lexemes) -> bool:
        return self.lexeme in lexemes

    def __repr__(self) -> str:
        return f"{self.kind}:{self.lexeme}"


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def advance(self, n: int) -> None:
        chunk = self.text[self.pos:self.pos + n]
        nl = chunk.count("\n")
        if nl:
            self.line += nl
            self.col = len(chunk) - chunk.rfind("\n")
        else:
            self.col += n
        self.pos += n


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; the list ends with an ``eof`` token."""
    cur = _Cursor(source)
    out: list[Token] = []
    text = source
    while cur.pos < len(text):
        m = _SKIP_RE.match(text, cur.pos)
        if m:
            cur.advance(m.end() - cur.pos)
            continue
        start = (cur.line, cur.col)

        def emit(kind, lexeme, length=None):
            length = len(lexeme) if length is None else length
            out.append(Token(kind, lexeme, (start[0], start[1], length)))
            cur.advance(length)

        ch = text[cur.pos]
        if ch == "\\":
            m = _ENV_RE.match(text, cur.pos)
            if m:
                emit(COMMAND, f"\\{m.group(1)}{{align}}", m.end() - cur.pos)
                continue
            m = _BB_RE.match(text, cur.pos)
            if m:
                emit(COMMAND, f"\\mathbb{{{m.group(1)}}}", m.end() - cur.pos)
                continue
            if text.startswith("\\\\", cur.pos):
                emit(PUNCT, "\\\\")
                continue
            if text.startswith("\\{", cur.pos) or text.startswith("\\}", cur.pos):
                emit(GROUPING, text[cur.pos:cur.pos + 2])
                continue
            if text.startswith("\\|", cur.pos):
                emit(COMMAND, "\\vert", 2)
                continue
            m = _CMD_RE.match(text, cur.pos)
            if m:
                word = m.group(1)
                if word in SPACING:
                    cur.advance(m.end() - cur.pos)
                    continue
                if word not in COMMANDS:
                    raise UnknownCommand(f"unknown command \\{word}", start)
                emit(COMMAND, "\\" + word)
                continue
            raise StrayCharacter("stray backslash", start)
        if "0" <= ch <= "9":
            m = _NUM_RE.match(text, cur.pos)
            emit(DIGITS, m.group(0))
            continue
        if text.startswith("s.t.", cur.pos):
            emit(PUNCT, "s.t.")
            continue
        if ch.isascii() and ch.isalpha():
            emit(LETTER, ch)
            continue
        if ch in _GROUP:
            emit(GROUPING, ch)
            continue
        for p in _PUNCT:
            if text.startswith(p, cur.pos):
                emit(PUNCT, p)
                break
        else:
            raise StrayCharacter(f"stray character {ch!r}", start)
    out.append(Token(EOF, "", (cur.line, cur.col, 0)))
    return out
