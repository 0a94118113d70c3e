"""Parse-tree node types.

All nodes are immutable. Spans do not take part in equality, so two scripts
that differ only in layout or letter case produce equal trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from typing import Iterator, Optional, Tuple, Union

from .tokens import SourceSpan

_NOSPAN = SourceSpan(1, 1, 0)


def _span():
    return field(default=_NOSPAN, compare=False, repr=False)


# -- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class NumberLit:
    value: Union[int, float]
    hex_digit_count: int = 0
    span: SourceSpan = _span()


@dataclass(frozen=True)
class StringLit:
    value: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SubDomainRef:
    name: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class BinaryOp:
    op: str
    lhs: "Expr"
    rhs: "Expr"
    span: SourceSpan = _span()


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Expr"
    span: SourceSpan = _span()


class Verb(Enum):
    GET_BIT = "getbit"
    SEE_BIT = "seebit"
    GET_BYTES = "getbytes"
    SEE_BYTES = "seebytes"

    @property
    def consumes(self) -> bool:
        return self in (Verb.GET_BIT, Verb.GET_BYTES)

    @property
    def unit_bits(self) -> int:
        return 1 if self in (Verb.GET_BIT, Verb.SEE_BIT) else 8


@dataclass(frozen=True)
class Count:
    count: Optional["Expr"] = None  # None reads a single unit


@dataclass(frozen=True)
class At:
    position: "Expr"
    count: Optional["Expr"] = None


@dataclass(frozen=True)
class Range:
    start: "Expr"
    stop: "Expr"


ReadForm = Union[Count, At, Range]


@dataclass(frozen=True)
class ReadCommand:
    verb: Verb
    form: ReadForm
    span: SourceSpan = _span()


@dataclass(frozen=True)
class DomainRef:
    name: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class GetFile:
    path: str
    span: SourceSpan = _span()


Expr = Union[NumberLit, StringLit, SubDomainRef, BinaryOp, UnaryOp, ReadCommand, DomainRef, GetFile]


# -- statements -------------------------------------------------------------


@dataclass(frozen=True)
class Print:
    args: Tuple[Expr, ...]
    newline: bool
    span: SourceSpan = _span()


@dataclass(frozen=True)
class If:
    cond: Expr
    then_block: Tuple["Stmt", ...]
    else_block: Optional[Tuple["Stmt", ...]] = None
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Case:
    value: Expr
    block: Tuple["Stmt", ...]
    has_break: bool


@dataclass(frozen=True)
class Switch:
    scrutinee: Expr
    cases: Tuple[Case, ...]
    default_block: Optional[Tuple["Stmt", ...]] = None
    span: SourceSpan = _span()


@dataclass(frozen=True)
class While:
    cond: Expr
    block: Tuple["Stmt", ...]
    span: SourceSpan = _span()


@dataclass(frozen=True)
class DoWhile:
    block: Tuple["Stmt", ...]
    cond: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class For:
    init: Optional["Stmt"]
    cond: Optional[Expr]
    step: Optional["Stmt"]
    block: Tuple["Stmt", ...]
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Assign:
    name: str
    expr: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Break:
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Continue:
    span: SourceSpan = _span()


Stmt = Union[Print, If, Switch, While, DoWhile, For, Assign, ExprStmt, Break, Continue]


# -- top level --------------------------------------------------------------


@dataclass(frozen=True)
class FieldStmt:
    """``%name = <read command | $domain>;`` inside a structure body."""

    name: str
    rvalue: Union[ReadCommand, DomainRef]
    span: SourceSpan = _span()


BodyItem = Union[FieldStmt, Stmt]


@dataclass(frozen=True)
class DomainBinding:
    domain_name: str
    init: Union[NumberLit, GetFile]
    span: SourceSpan = _span()


@dataclass(frozen=True)
class DomainDef:
    domain_name: str
    body: Tuple[BodyItem, ...]
    where_block: Optional[Tuple[Stmt, ...]] = None
    span: SourceSpan = _span()

    @property
    def fields(self) -> Tuple[FieldStmt, ...]:
        return tuple(item for item in self.body if isinstance(item, FieldStmt))


TopLevelItem = Union[DomainBinding, DomainDef]


@dataclass(frozen=True)
class ScriptAst:
    items: Tuple[TopLevelItem, ...] = ()

    @property
    def bindings(self) -> Tuple[DomainBinding, ...]:
        return tuple(i for i in self.items if isinstance(i, DomainBinding))

    @property
    def definitions(self) -> Tuple[DomainDef, ...]:
        return tuple(i for i in self.items if isinstance(i, DomainDef))


def walk(node) -> Iterator[object]:
    """Yield ``node`` and every node below it, depth first, in source order."""
    if isinstance(node, tuple):
        for item in node:
            yield from walk(item)
        return
    if not is_dataclass(node):
        return
    yield node
    for f in fields(node):
        if f.name != "span":
            yield from walk(getattr(node, f.name))


def format_expr(expr: Expr) -> str:
    """Compact source-like rendering, used in diagnostics and dumps."""
    if isinstance(expr, NumberLit):
        if expr.hex_digit_count:
            return f"0x{expr.value:0{expr.hex_digit_count}x}"
        return repr(expr.value) if isinstance(expr.value, float) else str(expr.value)
    if isinstance(expr, StringLit):
        return '"' + expr.value + '"'
    if isinstance(expr, SubDomainRef):
        return "%" + expr.name
    if isinstance(expr, DomainRef):
        return "$" + expr.name
    if isinstance(expr, BinaryOp):
        return f"({format_expr(expr.lhs)} {expr.op} {format_expr(expr.rhs)})"
    if isinstance(expr, UnaryOp):
        return f"{expr.op}{format_expr(expr.operand)}"
    if isinstance(expr, ReadCommand):
        return expr.verb.value
    if isinstance(expr, GetFile):
        return f'getfile <"{expr.path}">'
    return "?"
