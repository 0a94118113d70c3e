"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations

from typing import Optional, Sequence

from .tokens import SourceSpan


class DFSLError(Exception):
    """Base class; ``span`` locates the problem in the script when known."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.message} ({self.span})"


# -- frontend ---------------------------------------------------------------


class LexError(DFSLError):
    pass


class ParseError(DFSLError):
    def __init__(self, message: str, span: SourceSpan, expected: str = ""):
        super().__init__(message, span)
        self.expected = expected


# -- semantics --------------------------------------------------------------


class SemanticError(DFSLError):
    pass


class DuplicateDefinition(SemanticError):
    def __init__(self, name: str, span: Optional[SourceSpan] = None):
        super().__init__(f"domain ${name} is defined more than once", span)
        self.name = name


class UnresolvedDomain(SemanticError):
    def __init__(self, name: str, span: Optional[SourceSpan] = None):
        super().__init__(f"domain ${name} is referenced but never defined", span)
        self.name = name


class CycleError(SemanticError):
    def __init__(self, path: Sequence[str], span: Optional[SourceSpan] = None):
        super().__init__("recursive domain reference: " + " -> ".join("$" + p for p in path), span)
        self.path = list(path)


# -- bitstream --------------------------------------------------------------


class BitstreamError(DFSLError):
    pass


class StreamExhausted(BitstreamError):
    def __init__(self, position: int, count: int, total_bits: int):
        super().__init__(
            f"stream exhausted: cannot read {count} bit(s) at bit {position} of a {total_bits}-bit stream"
        )
        self.position = position
        self.count = count
        self.total_bits = total_bits


class InvalidCount(BitstreamError):
    def __init__(self, count: int):
        super().__init__(f"invalid bit count {count}; counts must be >= 1")
        self.count = count


class PositionOutOfRange(BitstreamError):
    def __init__(self, position: int, total_bits: int):
        super().__init__(f"bit position {position} is outside a {total_bits}-bit stream")
        self.position = position
        self.total_bits = total_bits


class InvalidRange(BitstreamError):
    def __init__(self, start: int, stop: int):
        super().__init__(f"invalid bit range {start} ~ {stop}; start must be >= stop")
        self.start = start
        self.stop = stop


class DataIOError(DFSLError):
    """A data or script file could not be read."""

    def __init__(self, path: str, reason: str = ""):
        super().__init__(f"cannot read {path!s}" + (f": {reason}" if reason else ""))
        self.path = path


# -- execution / output -----------------------------------------------------


class ExecutionError(DFSLError):
    """Runtime failure while interpreting a script against data.

    ``domain_path`` lists the domain instances being parsed, outermost first.
    ``cause`` holds the underlying bitstream error, when there is one.
    """

    def __init__(
        self,
        message: str,
        span: Optional[SourceSpan] = None,
        domain_path: Sequence[str] = (),
        cause: Optional[Exception] = None,
    ):
        super().__init__(message, span)
        self.domain_path = list(domain_path)
        self.cause = cause

    def __str__(self) -> str:
        text = super().__str__()
        if self.domain_path:
            text += " in " + "/".join(self.domain_path)
        return text


class XmlSchemaError(DFSLError):
    pass
