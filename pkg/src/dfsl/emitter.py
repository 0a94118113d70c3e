"""Text and XML renderings of a :class:`RunReport`.

XML layout::

    <?xml version="1.0" encoding="UTF-8"?>
    <dfsl-parse script="NAME" stream-bits="W">
      <domain name="...">
        <field name="..." offset="O" width="B" value="V"/>
        <domain name="...">...</domain>
      </domain>
    </dfsl-parse>

Offsets are absolute bit offsets into the stream. Values are decimal for
integers and ``0x``-prefixed hex for fields wider than 64 bits.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from typing import List, Tuple, Union
from xml.sax.saxutils import quoteattr

from .errors import XmlSchemaError
from .interpreter import NodeKind, ResultNode, RunReport, format_value

XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>'
_INT = re.compile(r"(0|[1-9][0-9]*)\Z")
_HEX = re.compile(r"0x[0-9a-f]+\Z")


def _attrs(**kw) -> str:
    return " ".join(f"{k.replace('_', '-')}={quoteattr(str(v))}" for k, v in kw.items())


def _emit_node(node: ResultNode, depth: int, lines: List[str]) -> None:
    pad = "  " * depth
    if node.kind is NodeKind.FIELD:
        lines.append(f"{pad}<field {_attrs(name=node.name, offset=node.offset_bits, width=node.width_bits, value=format_value(node.value))}/>")
        return
    lines.append(f"{pad}<domain {_attrs(name=node.name)}>")
    for child in node.children:
        _emit_node(child, depth + 1, lines)
    lines.append(f"{pad}</domain>")


def to_xml(report: RunReport, script_name: str) -> str:
    lines = [XML_DECLARATION, f"<dfsl-parse {_attrs(script=script_name, stream_bits=report.stream_bits)}>"]
    for root in report.roots:
        _emit_node(root, 1, lines)
    lines.append("</dfsl-parse>")
    return "\n".join(lines) + "\n"


def to_text(report: RunReport, include_field_dump: bool = False) -> str:
    """Printed output verbatim, optionally followed by ``name = value`` per field."""
    text = report.printed_output
    if include_field_dump:
        if text and not text.endswith("\n"):
            text += "\n"
        text += "".join(f"{leaf.name} = {format_value(leaf.value)}\n" for leaf in report.leaves())
    return text


# -- validation -------------------------------------------------------------


def _require_int(elem: ET.Element, attr: str, where: str, minimum: int = 0) -> int:
    raw = elem.get(attr)
    if raw is None:
        raise XmlSchemaError(f"{where}: missing attribute '{attr}'")
    if not _INT.match(raw) or int(raw) < minimum:
        raise XmlSchemaError(f"{where}: attribute '{attr}' must be an integer >= {minimum}, got {raw!r}")
    return int(raw)


def _check_domain(elem: ET.Element, where: str) -> None:
    if elem.get("name") is None:
        raise XmlSchemaError(f"{where}: domain without 'name'")
    where = f"{where}/{elem.get('name')}"
    for child in elem:
        if child.tag == "domain":
            _check_domain(child, where)
        elif child.tag == "field":
            name = child.get("name")
            if name is None:
                raise XmlSchemaError(f"{where}: field without 'name'")
            fwhere = f"{where}/{name}"
            _require_int(child, "offset", fwhere)
            _require_int(child, "width", fwhere, minimum=1)
            value = child.get("value")
            if value is None:
                raise XmlSchemaError(f"{fwhere}: missing attribute 'value'")
            if not (_INT.match(value) or _HEX.match(value)):
                raise XmlSchemaError(f"{fwhere}: value must be decimal or 0x-hex, got {value!r}")
            if len(child):
                raise XmlSchemaError(f"{fwhere}: field elements cannot have children")
        else:
            raise XmlSchemaError(f"{where}: unexpected element <{child.tag}>")


def validate_xml(doc: str) -> None:
    """Check well-formedness and the dfsl-parse layout; raise on the first violation."""
    try:
        root = ET.fromstring(doc)
    except ET.ParseError as exc:
        raise XmlSchemaError(f"not well-formed XML: {exc}") from None
    if root.tag != "dfsl-parse":
        raise XmlSchemaError(f"root element must be <dfsl-parse>, got <{root.tag}>")
    if root.get("script") is None:
        raise XmlSchemaError("dfsl-parse: missing attribute 'script'")
    _require_int(root, "stream-bits", "dfsl-parse")
    for child in root:
        if child.tag != "domain":
            raise XmlSchemaError(f"dfsl-parse: unexpected element <{child.tag}>")
        _check_domain(child, "")


def read_xml_fields(doc: str) -> List[Tuple[str, int, int, Union[int, bytes]]]:
    """``(name, offset, width, value)`` for every field, in document order."""
    out = []
    for elem in ET.fromstring(doc).iter("field"):
        raw = elem.get("value")
        if raw.startswith("0x"):
            value: Union[int, bytes] = bytes.fromhex(raw[2:])
        else:
            value = int(raw)
        out.append((elem.get("name"), int(elem.get("offset")), int(elem.get("width")), value))
    return out
