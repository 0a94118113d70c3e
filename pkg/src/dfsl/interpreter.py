"""Tree-walking executor: reads fields from a bit stream and runs script logic."""

from __future__ import annotations

import io
import operator
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, TextIO, Union

from . import nodes as n
from .bitstream import BitCursor, BitSource, FieldBits
from .errors import BitstreamError, ExecutionError
from .parser import parse
from .semantics import DomainTable, analyze

LOOP_LIMIT = 10_000_000


class NodeKind(Enum):
    FIELD = "field"
    DOMAIN = "domain"


@dataclass
class ResultNode:
    name: str
    kind: NodeKind
    offset_bits: int
    width_bits: int = 0
    value: Union[int, bytes, None] = None
    children: List["ResultNode"] = field(default_factory=list)
    source_domain: Optional[str] = None

    def leaves(self) -> Iterator["ResultNode"]:
        """Field nodes below this one, in read order."""
        if self.kind is NodeKind.FIELD:
            yield self
            return
        for child in self.children:
            yield from child.leaves()

    def child(self, name: str) -> "ResultNode":
        for c in self.children:
            if c.name == name:
                return c
        raise KeyError(name)

    def __getitem__(self, path: str) -> "ResultNode":
        node = self
        for part in path.split("."):
            node = node.child(part)
        return node


Value = Union[int, float, str, bytes, bool, ResultNode]


@dataclass
class RunReport:
    roots: List[ResultNode] = field(default_factory=list)
    printed_output: str = ""
    bits_consumed: int = 0
    sources: List[BitSource] = field(default_factory=list)

    @property
    def stream_bits(self) -> int:
        return sum(s.total_bits for s in self.sources)

    @property
    def unread_bits(self) -> int:
        return self.stream_bits - self.bits_consumed

    def leaves(self) -> List[ResultNode]:
        return [leaf for root in self.roots for leaf in root.leaves()]

    def field_tuples(self) -> List[tuple]:
        """``(name, offset, width, value)`` per leaf; the comparable essence of a run."""
        return [(f.name, f.offset_bits, f.width_bits, f.value) for f in self.leaves()]


def format_value(value: Value) -> str:
    """Text form used by print statements and field dumps."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bytes):
        return "0x" + value.hex()
    if isinstance(value, ResultNode):
        return "$" + (value.source_domain or value.name)
    return value


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, (bytes,))


def _type_name(v) -> str:
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "integer"
    if isinstance(v, float):
        return "real"
    if isinstance(v, str):
        return "string"
    if isinstance(v, bytes):
        return "raw bytes (field wider than 64 bits)"
    return "structure"


_COMPARE: Dict[str, Callable] = {
    "==": operator.eq, "!=": operator.ne,
    "<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge,
}


class Interpreter:
    """Executes one script. Create a fresh instance per run."""

    def __init__(
        self,
        table: DomainTable,
        base_dir: Optional[Union[str, os.PathLike]] = None,
        echo: Optional[TextIO] = None,
        loop_limit: int = LOOP_LIMIT,
    ):
        self.table = table
        self.base_dir = base_dir
        self.echo = echo
        self.loop_limit = loop_limit
        self.out = io.StringIO()
        self.frames: List[Dict[str, Value]] = []
        self.domain_path: List[str] = []
        self.cursor: Optional[BitCursor] = None

    # -- driver -------------------------------------------------------------

    def execute(self, ast: n.ScriptAst, data_override: Optional[BitSource] = None) -> RunReport:
        report = RunReport()
        for entry in self.table.entries.values():
            if entry.definition is None or entry.binding is None:
                continue
            if data_override is not None and not report.roots:
                source = data_override
            else:
                source = self.load_source(entry.binding)
            self.cursor = BitCursor(source)
            root = self.parse_domain(entry.name, entry.name)
            report.roots.append(root)
            report.sources.append(source)
            report.bits_consumed += self.cursor.position
        report.printed_output = self.out.getvalue()
        return report

    def load_source(self, binding: n.DomainBinding) -> BitSource:
        init = binding.init
        if isinstance(init, n.NumberLit):
            return BitSource.from_hex_literal(init.value, init.hex_digit_count)
        path = init.path
        if self.base_dir is not None and not os.path.isabs(path):
            path = os.path.join(self.base_dir, path)
        return BitSource.from_file(path)

    def error(self, message: str, span=None, cause: Optional[Exception] = None) -> ExecutionError:
        return ExecutionError(message, span, self.domain_path, cause)

    # -- structure ----------------------------------------------------------

    def parse_domain(self, domain_name: str, node_name: str) -> ResultNode:
        definition = self.table.definition(domain_name)
        node = ResultNode(node_name, NodeKind.DOMAIN, self.cursor.position, source_domain=domain_name)
        self.frames.append({})
        self.domain_path.append(node_name)
        try:
            for item in definition.body:
                if isinstance(item, n.FieldStmt):
                    child = self.parse_field(item)
                    node.children.append(child)
                    node.width_bits += child.width_bits
                else:
                    self.run_block((item,))
            if definition.where_block:
                self.run_block(definition.where_block)
        finally:
            self.frames.pop()
            self.domain_path.pop()
        return node

    def parse_field(self, fld: n.FieldStmt) -> ResultNode:
        rvalue = fld.rvalue
        if isinstance(rvalue, n.DomainRef):
            child = self.parse_domain(rvalue.name, fld.name)
            self.frames[-1][fld.name] = child
            return child
        fb = self.read(rvalue)
        self.frames[-1][fld.name] = fb.value
        return ResultNode(fld.name, NodeKind.FIELD, fb.offset_bits, fb.width_bits, fb.value,
                          source_domain=self.domain_path[-1])

    def run_block(self, stmts) -> None:
        try:
            self.exec_block(stmts)
        except _Break as exc:
            raise self.error("'break' outside a loop or switch", exc.args[0] if exc.args else None) from None
        except _Continue as exc:
            raise self.error("'continue' outside a loop", exc.args[0] if exc.args else None) from None

    # -- reads --------------------------------------------------------------

    def _int_operand(self, expr: Optional[n.Expr], default: int = 1) -> int:
        if expr is None:
            return default
        v = self.eval(expr)
        if isinstance(v, bool) or not isinstance(v, int):
            raise self.error(f"bit position or count must be an integer, got {_type_name(v)}",
                             getattr(expr, "span", None))
        return v

    def read(self, cmd: n.ReadCommand) -> FieldBits:
        verb, form, cur = cmd.verb, cmd.form, self.cursor
        try:
            if isinstance(form, n.Range):
                start, stop = self._int_operand(form.start), self._int_operand(form.stop)
                return cur.read_range(start, stop) if verb.consumes else cur.peek_range(start, stop)
            if isinstance(form, n.At):
                pos, count = self._int_operand(form.position), self._int_operand(form.count)
                return cur.read_bits_at(pos, count) if verb.consumes else cur.peek_bits_at(pos, count)
            count = self._int_operand(form.count)
            if verb is n.Verb.GET_BIT:
                return cur.read_bits(count)
            if verb is n.Verb.SEE_BIT:
                return cur.peek_bits(count)
            if verb is n.Verb.GET_BYTES:
                return cur.read_bytes(count)
            return cur.peek_bytes(count)
        except BitstreamError as exc:
            raise self.error(exc.message, cmd.span, exc) from exc

    # -- expressions --------------------------------------------------------

    def eval(self, expr: n.Expr) -> Value:
        if isinstance(expr, n.NumberLit):
            return expr.value
        if isinstance(expr, n.StringLit):
            return expr.value
        if isinstance(expr, n.SubDomainRef):
            try:
                return self.frames[-1][expr.name]
            except KeyError:
                raise self.error(f"unbound variable %{expr.name}", expr.span) from None
        if isinstance(expr, n.BinaryOp):
            return self.eval_binary(expr)
        if isinstance(expr, n.UnaryOp):
            v = self.eval(expr.operand)
            if expr.op == "!":
                return not self.truth(v, expr)
            self.need_number(v, expr)
            return -v if expr.op == "-" else +v
        if isinstance(expr, n.ReadCommand):
            return self.read(expr).value
        raise self.error(f"{type(expr).__name__} cannot be evaluated here", getattr(expr, "span", None))

    def truth(self, v: Value, expr) -> bool:
        if not _is_number(v):
            raise self.error(f"a {_type_name(v)} cannot be used as a condition", expr.span)
        return v != 0

    def need_number(self, v: Value, expr) -> None:
        if not _is_number(v):
            raise self.error(f"arithmetic on a {_type_name(v)}", expr.span)

    def eval_binary(self, expr: n.BinaryOp) -> Value:
        op = expr.op
        if op == "&&":
            return self.truth(self.eval(expr.lhs), expr) and self.truth(self.eval(expr.rhs), expr)
        if op == "||":
            return self.truth(self.eval(expr.lhs), expr) or self.truth(self.eval(expr.rhs), expr)
        a, b = self.eval(expr.lhs), self.eval(expr.rhs)
        if op in _COMPARE:
            comparable = (_is_number(a) and _is_number(b)) or (
                type(a) is type(b) and isinstance(a, (str, bytes)) and (op in ("==", "!=") or isinstance(a, str))
            )
            if not comparable:
                raise self.error(f"cannot compare {_type_name(a)} with {_type_name(b)}", expr.span)
            return _COMPARE[op](a, b)
        if op == "+" and isinstance(a, str) and isinstance(b, str):
            return a + b
        if not (_is_number(a) and _is_number(b)):
            raise self.error(f"cannot apply '{op}' to {_type_name(a)} and {_type_name(b)}", expr.span)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if b == 0:
            raise self.error("division by zero", expr.span)
        if op == "/":
            if isinstance(a, float) or isinstance(b, float):
                return a / b
            # C-style truncation toward zero
            q = abs(a) // abs(b)
            return q if (a >= 0) == (b >= 0) else -q
        return a % b

    # -- statements ---------------------------------------------------------

    def write(self, text: str) -> None:
        self.out.write(text)
        if self.echo is not None:
            self.echo.write(text)

    def exec_block(self, stmts) -> None:
        for stmt in stmts:
            self.exec_stmt(stmt)

    def _tick(self, count: int, stmt) -> int:
        count += 1
        if count > self.loop_limit:
            raise self.error(f"loop exceeded {self.loop_limit} iterations", stmt.span)
        return count

    def exec_stmt(self, stmt: n.Stmt) -> None:
        if isinstance(stmt, n.Print):
            self.write("".join(format_value(self.eval(a)) for a in stmt.args) + ("\n" if stmt.newline else ""))
        elif isinstance(stmt, n.Assign):
            self.frames[-1][stmt.name] = self.eval(stmt.expr)
        elif isinstance(stmt, n.ExprStmt):
            self.eval(stmt.expr)
        elif isinstance(stmt, n.If):
            if self.truth(self.eval(stmt.cond), stmt):
                self.exec_block(stmt.then_block)
            elif stmt.else_block is not None:
                self.exec_block(stmt.else_block)
        elif isinstance(stmt, n.Switch):
            self.exec_switch(stmt)
        elif isinstance(stmt, n.While):
            count = 0
            while self.truth(self.eval(stmt.cond), stmt):
                count = self._tick(count, stmt)
                if self._loop_body(stmt.block):
                    break
        elif isinstance(stmt, n.DoWhile):
            count = 0
            while True:
                count = self._tick(count, stmt)
                if self._loop_body(stmt.block) or not self.truth(self.eval(stmt.cond), stmt):
                    break
        elif isinstance(stmt, n.For):
            if stmt.init is not None:
                self.exec_stmt(stmt.init)
            count = 0
            while stmt.cond is None or self.truth(self.eval(stmt.cond), stmt):
                count = self._tick(count, stmt)
                if self._loop_body(stmt.block):
                    break
                if stmt.step is not None:
                    self.exec_stmt(stmt.step)
        elif isinstance(stmt, n.Break):
            raise _Break(stmt.span)
        elif isinstance(stmt, n.Continue):
            raise _Continue(stmt.span)
        else:  # pragma: no cover - parser produces only the types above
            raise self.error(f"unknown statement {type(stmt).__name__}")

    def _loop_body(self, block) -> bool:
        """Run one iteration; True means the loop was broken out of."""
        try:
            self.exec_block(block)
        except _Break:
            return True
        except _Continue:
            pass
        return False

    def exec_switch(self, stmt: n.Switch) -> None:
        scrutinee = self.eval(stmt.scrutinee)
        matched = False
        try:
            for case in stmt.cases:
                if not matched:
                    value = self.eval(case.value)
                    if type(value) is not type(scrutinee) and not (_is_number(value) and _is_number(scrutinee)):
                        raise self.error(f"case value is a {_type_name(value)}, switch value is a "
                                         f"{_type_name(scrutinee)}", stmt.span)
                    matched = value == scrutinee
                if matched:
                    self.exec_block(case.block)
                    if case.has_break:
                        return
            if not matched and stmt.default_block is not None:
                self.exec_block(stmt.default_block)
        except _Break:
            return


def execute(
    ast: n.ScriptAst,
    table: Optional[DomainTable] = None,
    data_override: Optional[BitSource] = None,
    base_dir: Optional[Union[str, os.PathLike]] = None,
    echo: Optional[TextIO] = None,
) -> RunReport:
    """Run every domain that has both a data binding and a structure definition.

    ``data_override`` replaces the data of the first such domain. Relative
    ``getFile`` paths resolve against ``base_dir`` (the working directory when
    omitted). Printed text is captured in the report and also written to
    ``echo`` when given.
    """
    if table is None:
        table = analyze(ast)
    return Interpreter(table, base_dir=base_dir, echo=echo).execute(ast, data_override)


def run_source(
    source: str,
    data_override: Optional[BitSource] = None,
    base_dir: Optional[Union[str, os.PathLike]] = None,
) -> RunReport:
    """Parse, analyze and execute DFSL source text in one call."""
    ast = parse(source)
    return execute(ast, analyze(ast), data_override, base_dir)
