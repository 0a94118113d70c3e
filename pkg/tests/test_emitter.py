import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings

from dfsl.emitter import read_xml_fields, to_text, to_xml, validate_xml
from dfsl.errors import XmlSchemaError
from dfsl.interpreter import RunReport, run_source

from test_interpreter import script_and_data


@pytest.fixture
def pmd_report(pmd_source):
    return run_source(pmd_source)


@pytest.fixture
def icmp_report(samples, icmp_source):
    return run_source(icmp_source, base_dir=samples)


def test_pmd_xml(pmd_report):
    doc = to_xml(pmd_report, "pmd.dfsl")
    lines = doc.splitlines()
    assert lines[0] == '<?xml version="1.0" encoding="UTF-8"?>'
    assert lines[1] == '<dfsl-parse script="pmd.dfsl" stream-bits="16">'
    assert lines[2] == '  <domain name="pmd3">'
    assert lines[3] == '    <field name="txpowervalue" offset="0" width="5" value="18"/>'
    assert lines[-1] == "</dfsl-parse>"
    root = ET.fromstring(doc)
    assert len(root.findall("domain")) == 1
    assert len(list(root.iter("field"))) == 8


def test_empty_report_xml():
    doc = to_xml(RunReport(), "x.dfsl")
    root = ET.fromstring(doc)
    assert root.tag == "dfsl-parse" and len(root) == 0
    assert root.get("stream-bits") == "0"
    validate_xml(doc)


def test_icmp_nesting(icmp_report):
    root = ET.fromstring(to_xml(icmp_report, "icmp.dfsl"))
    (top,) = root
    assert [d.get("name") for d in top] == ["ether_header", "ip_header", "icmp_header"]
    assert all(d.tag == "domain" for d in top)
    dest = top[0][0]
    assert dest.tag == "domain" and dest.get("name") == "destination"
    assert [f.get("value") for f in dest] == [str(0x080020), str(0x86354B)]


def test_xml_escapes_names():
    doc = to_xml(run_source("$a = 0x1; $a := { %x = getBit 4; }"), 'we<ird "name" & co')
    validate_xml(doc)
    assert ET.fromstring(doc).get("script") == 'we<ird "name" & co'


def test_wide_values_are_hex():
    doc = to_xml(run_source("$w = 0x" + "ab" * 9 + "; $w := { %big = getByte 9; }"), "w")
    validate_xml(doc)
    assert read_xml_fields(doc) == [("big", 0, 72, bytes.fromhex("ab" * 9))]
    assert 'value="0xababababababababab"' in doc


def test_text(pmd_report):
    text = to_text(pmd_report)
    assert "Tx Power Cutback Value = 18\n" in text
    assert text == pmd_report.printed_output
    dumped = to_text(pmd_report, include_field_dump=True)
    assert dumped.startswith(text)
    assert dumped[len(text):].splitlines()[0] == "txpowervalue = 18"


def test_text_dump_only():
    report = run_source("$h = 0x45; $h := { %version = getBit 4; %IHL = getBit 4; }")
    assert to_text(report, True) == "version = 4\nihl = 5\n"
    assert to_text(report) == ""


def test_text_dump_after_unterminated_print():
    report = run_source('$h = 0x4; $h := { %v = getBit 4; } where { print("no newline"); }')
    assert to_text(report, True) == "no newline\nv = 4\n"


def test_icmp_text_dump(icmp_report):
    assert "version = 4\n" in to_text(icmp_report, True)


# -- validation -------------------------------------------------------------

def test_validate_own_output(pmd_report, icmp_report):
    validate_xml(to_xml(pmd_report, "pmd.dfsl"))
    validate_xml(to_xml(icmp_report, "icmp.dfsl"))


@pytest.mark.parametrize("doc, message", [
    ('<dfsl-parse script="s" stream-bits="8"><domain name="a">', "well-formed"),
    ('<dfsl-parse script="s" stream-bits="8"><domain name="a"><field name="x" offset="0" value="1"/></domain></dfsl-parse>',
     "width"),
    ('<other/>', "root element"),
    ('<dfsl-parse stream-bits="8"/>', "script"),
    ('<dfsl-parse script="s" stream-bits="-1"/>', "stream-bits"),
    ('<dfsl-parse script="s" stream-bits="8"><field name="x" offset="0" width="1" value="1"/></dfsl-parse>',
     "unexpected element"),
    ('<dfsl-parse script="s" stream-bits="8"><domain name="a"><field name="x" offset="0" width="0" value="1"/></domain></dfsl-parse>',
     "width"),
    ('<dfsl-parse script="s" stream-bits="8"><domain name="a"><field name="x" offset="z" width="1" value="1"/></domain></dfsl-parse>',
     "offset"),
    ('<dfsl-parse script="s" stream-bits="8"><domain name="a"><field name="x" offset="0" width="1" value="ten"/></domain></dfsl-parse>',
     "value"),
    ('<dfsl-parse script="s" stream-bits="8"><domain><field name="x" offset="0" width="1" value="1"/></domain></dfsl-parse>',
     "name"),
    ('<dfsl-parse script="s" stream-bits="8"><domain name="a"><blob/></domain></dfsl-parse>', "unexpected"),
])
def test_validate_rejects(doc, message):
    with pytest.raises(XmlSchemaError, match=message):
        validate_xml(doc)


# -- invariants -------------------------------------------------------------

def _check_widths(elem):
    total = 0
    for child in elem:
        if child.tag == "field":
            total += int(child.get("width"))
        else:
            total += _check_widths(child)
    return total


def test_invariants(icmp_report):
    doc = to_xml(icmp_report, "icmp.dfsl")
    root = ET.fromstring(doc)
    assert len(list(root.iter("field"))) == len(icmp_report.leaves())
    assert int(root.get("stream-bits")) == icmp_report.stream_bits == 784
    assert _check_widths(root[0]) == icmp_report.roots[0].width_bits == 288
    assert read_xml_fields(doc) == icmp_report.field_tuples()


@settings(max_examples=100)
@given(script_and_data())
def test_round_trip(case):
    src, _, _ = case
    report = run_source(src)
    doc = to_xml(report, "r")
    validate_xml(doc)
    assert read_xml_fields(doc) == report.field_tuples()
