"""Token kinds, source positions and the token record produced by the lexer."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union


class TokenKind(Enum):
    NUMBER = "Number"
    WORD = "Word"
    DOMAIN = "DomainName"  # $name
    SUBDOMAIN = "SubDomainName"  # %name
    STRING = "StringLit"
    OPERATOR = "Operator"
    PUNCT = "Punct"


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Source position: 1-based line and column, 0-based byte offset."""

    line: int
    column: int
    byte_offset: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


@dataclass(frozen=True, slots=True)
class Token:
    """One lexeme.

    ``text`` is normalized: words and names are lowercased, numbers are
    rendered canonically and strings hold their decoded contents. The span is
    excluded from equality so re-lexed token lists compare equal.
    """

    kind: TokenKind
    text: str
    number_value: Optional[Union[int, float]] = None
    hex_digit_count: int = 0
    span: SourceSpan = field(default=SourceSpan(1, 1, 0), compare=False)

    def is_op(self, *ops: str) -> bool:
        return self.kind in (TokenKind.OPERATOR, TokenKind.PUNCT) and self.text in ops

    def is_word(self, *words: str) -> bool:
        return self.kind is TokenKind.WORD and self.text in words

    def lexeme(self) -> str:
        """Source form of the token, suitable for re-lexing."""
        if self.kind is TokenKind.DOMAIN:
            return "$" + self.text
        if self.kind is TokenKind.SUBDOMAIN:
            return "%" + self.text
        if self.kind is TokenKind.STRING:
            return quote_string(self.text)
        return self.text


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "0": "\0"}
_REVERSE_ESCAPES = {v: k for k, v in _ESCAPES.items()}


def quote_string(text: str) -> str:
    return '"' + "".join("\\" + _REVERSE_ESCAPES[c] if c in _REVERSE_ESCAPES else c for c in text) + '"'


def render_number(value: Union[int, float], hex_digit_count: int = 0) -> str:
    if isinstance(value, float):
        return repr(value)
    if hex_digit_count:
        return f"0x{value:0{hex_digit_count}x}"
    return str(value)
