"""Domain table construction, cycle detection, size propagation and elaboration."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Tuple

from . import nodes as n
from .errors import CycleError, DuplicateDefinition, UnresolvedDomain


@dataclass(frozen=True)
class SizeAnnotation:
    """Static size of a domain: ``bits`` is None for a dynamic domain."""

    bits: Optional[int] = None

    @property
    def is_fixed(self) -> bool:
        return self.bits is not None

    def __str__(self) -> str:
        return f"Fixed({self.bits})" if self.is_fixed else "Dynamic"


DYNAMIC = SizeAnnotation(None)


def fixed(bits: int) -> SizeAnnotation:
    return SizeAnnotation(bits)


@dataclass(frozen=True)
class DomainEntry:
    name: str
    definition: Optional[n.DomainDef] = None
    binding: Optional[n.DomainBinding] = None
    size: Optional[SizeAnnotation] = None  # None until propagate_sizes runs


@dataclass(frozen=True)
class DomainTable:
    entries: Dict[str, DomainEntry]

    def __getitem__(self, name: str) -> DomainEntry:
        return self.entries[name]

    def __contains__(self, name: object) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def definition(self, name: str) -> n.DomainDef:
        d = self.entries[name].definition
        assert d is not None, name
        return d

    def links(self, name: str) -> List[Tuple[str, n.FieldStmt]]:
        """Domains referenced from the body of ``name``, in declaration order."""
        d = self.entries[name].definition
        if d is None:
            return []
        return [(f.rvalue.name, f) for f in d.fields if isinstance(f.rvalue, n.DomainRef)]


def build_domain_table(ast: n.ScriptAst) -> DomainTable:
    """Merge bindings and definitions by domain name and resolve references.

    A later binding for the same name replaces an earlier one. References may
    point forward; resolution is over the whole script.
    """
    entries: Dict[str, DomainEntry] = {}
    for item in ast.items:
        entry = entries.get(item.domain_name) or DomainEntry(item.domain_name)
        if isinstance(item, n.DomainDef):
            if entry.definition is not None:
                raise DuplicateDefinition(item.domain_name, item.span)
            entry = replace(entry, definition=item)
        else:
            entry = replace(entry, binding=item)
        entries[item.domain_name] = entry

    table = DomainTable(entries)
    for name in entries:
        for target, fld in table.links(name):
            if target not in entries or entries[target].definition is None:
                raise UnresolvedDomain(target, fld.rvalue.span)
    return table


def detect_cycles(table: DomainTable) -> None:
    """Raise :class:`CycleError` with the first reference cycle found."""
    done = set()
    stack: List[str] = []
    on_stack = set()

    def visit(name: str) -> None:
        stack.append(name)
        on_stack.add(name)
        for target, fld in table.links(name):
            if target in on_stack:
                path = stack[stack.index(target):] + [target]
                raise CycleError(path, fld.span)
            if target not in done:
                visit(target)
        stack.pop()
        on_stack.discard(name)
        done.add(name)

    for name in table.entries:
        if name not in done:
            visit(name)


# -- static sizing ----------------------------------------------------------


def static_int(expr: Optional[n.Expr]) -> Optional[int]:
    """Value of an integer expression built only from literals, else None."""
    if expr is None:
        return None
    if isinstance(expr, n.NumberLit):
        return expr.value if isinstance(expr.value, int) else None
    if isinstance(expr, n.UnaryOp) and expr.op in ("-", "+"):
        v = static_int(expr.operand)
        return None if v is None else (-v if expr.op == "-" else v)
    if isinstance(expr, n.BinaryOp) and expr.op in ("+", "-", "*", "/", "%"):
        a, b = static_int(expr.lhs), static_int(expr.rhs)
        if a is None or b is None:
            return None
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if b == 0:
            return None
        return a // b if expr.op == "/" else a % b
    return None


def read_width(cmd: n.ReadCommand) -> Optional[int]:
    """Static field width in bits, or None when it depends on data."""
    form = cmd.form
    if isinstance(form, n.Range):
        start, stop = static_int(form.start), static_int(form.stop)
        if start is None or stop is None or start < stop or stop < 0:
            return None
        return start - stop + 1
    if isinstance(form, n.At):
        if static_int(form.position) is None:
            return None
    count = 1 if form.count is None else static_int(form.count)
    if count is None or count < 1:
        return None
    return count * cmd.verb.unit_bits


def _consuming_reads(stmts) -> Iterator[n.ReadCommand]:
    for node in n.walk(tuple(stmts)):
        if isinstance(node, n.ReadCommand) and node.verb.consumes:
            yield node


def _member_size(cmd: n.ReadCommand) -> Optional[int]:
    width = read_width(cmd)
    if width is None:
        return None
    return width if cmd.verb.consumes else 0


def propagate_sizes(table: DomainTable) -> DomainTable:
    """Annotate every domain with Fixed(bits) or Dynamic, bottom-up.

    A domain is fixed when every field is a literal-sized read or a link to a
    fixed domain, and no inline or where statement consumes bits. Sizes count
    consumed bits, so ``see`` commands contribute zero.
    """
    sizes: Dict[str, SizeAnnotation] = {}

    def size_of(name: str) -> SizeAnnotation:
        if name in sizes:
            return sizes[name]
        d = table.entries[name].definition
        if d is None:
            sizes[name] = DYNAMIC
            return DYNAMIC
        total: Optional[int] = 0
        for item in d.body:
            if isinstance(item, n.FieldStmt):
                if isinstance(item.rvalue, n.DomainRef):
                    bits = size_of(item.rvalue.name).bits
                else:
                    bits = _member_size(item.rvalue)
            else:
                bits = None if any(_consuming_reads((item,))) else 0
            if bits is None:
                total = None
                break
            total += bits
        if total is not None and any(_consuming_reads(d.where_block or ())):
            total = None
        sizes[name] = SizeAnnotation(total)
        return sizes[name]

    for name in table.entries:
        size_of(name)
    return DomainTable({k: replace(e, size=sizes[k]) for k, e in table.entries.items()})


# -- elaboration ------------------------------------------------------------


@dataclass(frozen=True)
class ElabNode:
    """One field of an elaborated domain.

    Read fields carry ``command``; links carry ``target``. A link to a fixed
    domain is expanded: its fields become ``children``. Links to dynamic
    domains stay unexpanded (``expanded`` False, no children).
    """

    name: str
    command: Optional[n.ReadCommand] = None
    target: Optional[str] = None
    width: Optional[int] = None
    expanded: bool = False
    children: Tuple["ElabNode", ...] = ()

    @property
    def is_link(self) -> bool:
        return self.target is not None


@dataclass(frozen=True)
class ElabDomain:
    name: str
    size: SizeAnnotation
    nodes: Tuple[ElabNode, ...]

    def leaves(self) -> List[ElabNode]:
        """Read fields in depth-first order, through expanded links only."""
        out: List[ElabNode] = []

        def go(nodes):
            for node in nodes:
                if node.is_link:
                    go(node.children)
                else:
                    out.append(node)

        go(self.nodes)
        return out


@dataclass(frozen=True)
class ElaboratedTree:
    domains: Dict[str, ElabDomain]

    def __getitem__(self, name: str) -> ElabDomain:
        return self.domains[name]


def elaborate(table: DomainTable) -> ElaboratedTree:
    """Inline fixed-size linked domains; leave dynamic links indirect."""
    if any(e.size is None for e in table.entries.values()):
        table = propagate_sizes(table)

    def nodes_for(name: str) -> Tuple[ElabNode, ...]:
        out = []
        for fld in table.definition(name).fields:
            if isinstance(fld.rvalue, n.DomainRef):
                target = fld.rvalue.name
                size = table[target].size
                if size.is_fixed:
                    out.append(ElabNode(fld.name, target=target, width=size.bits,
                                        expanded=True, children=nodes_for(target)))
                else:
                    out.append(ElabNode(fld.name, target=target))
            else:
                out.append(ElabNode(fld.name, command=fld.rvalue, width=read_width(fld.rvalue)))
        return tuple(out)

    return ElaboratedTree({
        name: ElabDomain(name, entry.size, nodes_for(name))
        for name, entry in table.entries.items()
        if entry.definition is not None
    })


def analyze(ast: n.ScriptAst) -> DomainTable:
    """Full semantic pass: build, check for cycles, propagate sizes."""
    table = build_domain_table(ast)
    detect_cycles(table)
    return propagate_sizes(table)


# -- diagnostics ------------------------------------------------------------


def _describe_read(cmd: n.ReadCommand) -> str:
    form = cmd.form
    verb = cmd.verb.value
    if isinstance(form, n.Range):
        return f"{verb} {n.format_expr(form.start)} ~ {n.format_expr(form.stop)}"
    if isinstance(form, n.At):
        tail = "" if form.count is None else f", {n.format_expr(form.count)}"
        return f"{verb} @{n.format_expr(form.position)}{tail}"
    return verb if form.count is None else f"{verb} {n.format_expr(form.count)}"


def dump_tree(tree: ElaboratedTree) -> str:
    """Indented listing of every domain with its size annotation."""
    lines: List[str] = []

    def emit(nodes, depth):
        pad = "  " * depth
        for node in nodes:
            width = "?" if node.width is None else str(node.width)
            if node.is_link:
                note = f"[{width} bits]" if node.expanded else "[dynamic, not expanded]"
                lines.append(f"{pad}%{node.name} -> ${node.target}  {note}")
                emit(node.children, depth + 1)
            else:
                lines.append(f"{pad}%{node.name} = {_describe_read(node.command)}  [{width} bits]")

    for dom in tree.domains.values():
        lines.append(f"${dom.name}  {dom.size}")
        emit(dom.nodes, 1)
    return "\n".join(lines) + ("\n" if lines else "")
