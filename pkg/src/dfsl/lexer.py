"""Hand-written scanner for DFSL source text."""

from __future__ import annotations

from typing import Iterable, List

from .errors import LexError
from .tokens import Token, TokenKind, SourceSpan, _ESCAPES, render_number

# longest match first
_OPERATORS = (
    ":=", "==", "!=", "<=", ">=", "&&", "||",
    "=", "+", "-", "*", "/", "%", "<", ">", "!", "~", "@",
)
_PUNCT = frozenset(";,(){}:")


def _is_name_start(ch: str) -> bool:
    return ch.isascii() and (ch.isalpha() or ch == "_")


def _is_name_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


class _Scanner:
    def __init__(self, source: str):
        self.src = source
        self.n = len(source)
        self.i = 0
        self.line = 1
        self.line_start = 0
        self._ascii = source.isascii()

    def span_at(self, i: int) -> SourceSpan:
        # column counts characters; valid because spans are taken on the current line
        offset = i if self._ascii else len(self.src[:i].encode("utf-8"))
        return SourceSpan(self.line, i - self.line_start + 1, offset)

    def peek(self, k: int = 0) -> str:
        j = self.i + k
        return self.src[j] if j < self.n else ""

    def scan(self) -> List[Token]:
        out: List[Token] = []
        while self.i < self.n:
            ch = self.src[self.i]
            if ch == "\n":
                self.i += 1
                self.line += 1
                self.line_start = self.i
            elif ch.isspace():
                self.i += 1
            elif ch == "/" and self.peek(1) == "/":
                while self.i < self.n and self.src[self.i] != "\n":
                    self.i += 1
            elif ch.isdigit() or (ch == "." and self.peek(1).isdigit()):
                out.append(self.number())
            elif ch == '"':
                out.append(self.string())
            elif ch in "$%" and _is_name_start(self.peek(1)):
                out.append(self.name(TokenKind.DOMAIN if ch == "$" else TokenKind.SUBDOMAIN))
            elif _is_name_start(ch):
                out.append(self.word())
            elif ch in _PUNCT and not (ch == ":" and self.peek(1) == "="):
                out.append(Token(TokenKind.PUNCT, ch, span=self.span_at(self.i)))
                self.i += 1
            else:
                for op in _OPERATORS:
                    if self.src.startswith(op, self.i):
                        out.append(Token(TokenKind.OPERATOR, op, span=self.span_at(self.i)))
                        self.i += len(op)
                        break
                else:
                    raise LexError(f"unexpected character {ch!r}", self.span_at(self.i))
        return out

    def number(self) -> Token:
        start = self.i
        span = self.span_at(start)
        src = self.src
        if src[start] == "0" and self.peek(1) in ("x", "X"):
            self.i += 2
            digits_start = self.i
            while self.i < self.n and src[self.i] in "0123456789abcdefABCDEF":
                self.i += 1
            digits = src[digits_start:self.i]
            if not digits:
                raise LexError("hexadecimal literal has no digits", span)
            self._reject_trailing_name(start, span)
            return Token(TokenKind.NUMBER, render_number(int(digits, 16), len(digits)),
                         int(digits, 16), len(digits), span)

        while self.i < self.n and src[self.i].isdigit():
            self.i += 1
        is_real = False
        if self.peek() == "." and self.peek(1).isdigit():
            is_real = True
            self.i += 1
            while self.i < self.n and src[self.i].isdigit():
                self.i += 1
        elif self.peek() == ".":
            raise LexError("malformed number: digits expected after '.'", span)
        if self.peek() in ("e", "E"):
            j = self.i + 1
            if j < self.n and src[j] in "+-":
                j += 1
            if j >= self.n or not src[j].isdigit():
                raise LexError("malformed number: exponent has no digits", span)
            while j < self.n and src[j].isdigit():
                j += 1
            self.i = j
            is_real = True
        self._reject_trailing_name(start, span)
        text = src[start:self.i]
        value = float(text) if is_real else int(text)
        if value == float("inf"):
            raise LexError(f"real literal {text} is out of range", span)
        return Token(TokenKind.NUMBER, render_number(value), value, 0, span)

    def _reject_trailing_name(self, start: int, span: SourceSpan) -> None:
        if self.i < self.n and (_is_name_char(self.src[self.i]) or self.src[self.i] == "."):
            raise LexError(f"malformed number {self.src[start:self.i + 1]!r}", span)

    def string(self) -> Token:
        span = self.span_at(self.i)
        self.i += 1
        chars = []
        while True:
            if self.i >= self.n or self.src[self.i] == "\n":
                raise LexError("unterminated string literal", span)
            ch = self.src[self.i]
            if ch == '"':
                self.i += 1
                break
            if ch == "\\":
                esc = self.peek(1)
                if esc not in _ESCAPES:
                    raise LexError(f"unknown escape sequence \\{esc}", self.span_at(self.i))
                chars.append(_ESCAPES[esc])
                self.i += 2
                continue
            chars.append(ch)
            self.i += 1
        return Token(TokenKind.STRING, "".join(chars), span=span)

    def name(self, kind: TokenKind) -> Token:
        span = self.span_at(self.i)
        self.i += 1
        start = self.i
        while self.i < self.n and _is_name_char(self.src[self.i]):
            self.i += 1
        return Token(kind, self.src[start:self.i].lower(), span=span)

    def word(self) -> Token:
        span = self.span_at(self.i)
        start = self.i
        while self.i < self.n and _is_name_char(self.src[self.i]):
            self.i += 1
        return Token(TokenKind.WORD, self.src[start:self.i].lower(), span=span)


def tokenize(source: str) -> List[Token]:
    """Split DFSL source into tokens; comments and whitespace are dropped."""
    return _Scanner(source).scan()


def render(tokens: Iterable[Token]) -> str:
    """Join token lexemes with single spaces."""
    return " ".join(t.lexeme() for t in tokens)
