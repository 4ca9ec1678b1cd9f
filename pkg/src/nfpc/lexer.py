"""Tokenizer shared by the model, VSL, type-library and valuation readers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

NAME = "NAME"
NUMBER = "NUMBER"
STRING = "STRING"
OP = "OP"
PUNCT = "PUNCT"
EOF = "EOF"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>-?[0-9]+(?:\.[0-9]+)?(?![A-Za-z_0-9.]))
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>")
  | (?P<op>==|!=|<=|>=|<|>)
  | (?P<punct>[{}():,=\[\]])
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}
_UNESCAPES = {v: "\\" + k for k, v in _ESCAPES.items()}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    value: str = ""

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        return repr(self.text)


def quote(text: str) -> str:
    """Render ``text`` as a double-quoted STRING token."""
    return '"' + "".join(_UNESCAPES.get(ch, ch) for ch in text) + '"'


def _read_string(src: str, start: int, line: int, col: int) -> tuple[str, int]:
    out = []
    i = start + 1
    while i < len(src):
        ch = src[i]
        if ch == '"':
            return "".join(out), i + 1
        if ch == "\n":
            break
        if ch == "\\":
            nxt = src[i + 1] if i + 1 < len(src) else ""
            if nxt not in _ESCAPES:
                raise ParseError(f"invalid escape sequence '\\{nxt}'", line, col + (i - start))
            out.append(_ESCAPES[nxt])
            i += 2
            continue
        out.append(ch)
        i += 1
    raise ParseError("unterminated string", line, col)


def tokenize(src: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(src):
        col = pos - line_start + 1
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "string":
            value, end = _read_string(src, pos, line, col)
            tokens.append(Token(STRING, src[pos:end], line, col, value))
            pos = end
            continue
        text = m.group()
        if kind == "number":
            tokens.append(Token(NUMBER, text, line, col, text))
        elif kind == "name":
            tokens.append(Token(NAME, text, line, col, text))
        elif kind == "op":
            tokens.append(Token(OP, text, line, col, text))
        elif kind == "punct":
            tokens.append(Token(PUNCT, text, line, col, text))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token(EOF, "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    """Cursor over a token list with the usual expect/accept helpers."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        return cls(tokenize(text))

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.current
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.current
        return tok.kind == kind and (text is None or tok.text == text)

    def at_keyword(self, word: str) -> bool:
        return self.at(NAME, word)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        wanted = what or (repr(text) if text else kind.lower())
        tok = self.current
        raise ParseError(f"expected {wanted}, got {tok.describe()}", tok.line, tok.column)

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.current
        return ParseError(message, tok.line, tok.column)
