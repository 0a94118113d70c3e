"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import contextlib
import random
import shutil
import time
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_RESULTS, SAMPLES
from dfsl.bitstream import BitCursor, BitSource
from dfsl.cli import main
from dfsl.emitter import read_xml_fields, to_xml, validate_xml
from dfsl.interpreter import run_source
from dfsl.parser import parse
from dfsl.semantics import analyze

from test_bitstream import FIGURE3, naive_bits

FIXTURES = Path(__file__).parent / "fixtures"
TIME_LIMIT_S = 1.0


@contextlib.contextmanager
def criterion(number, description):
    passed = False
    try:
        yield
        passed = True
    finally:
        ACCEPTANCE_RESULTS.append((number, description, passed))
        print(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {description}")


def test_1_pmd_golden():
    with criterion(1, "PMD register golden values and printed lines"):
        start = time.perf_counter()
        report = run_source((SAMPLES / "pmd.dfsl").read_text())
        elapsed = time.perf_counter() - start
        values = {leaf.name: leaf.value for leaf in report.leaves()}
        assert values == {
            "txpowervalue": 18, "txpowermode": 1, "sbm": 1, "supstream": 0,
            "chinaloop": 1, "oldisable": 0, "roldisable": 1, "hybridselect": 1,
        }
        assert [leaf.name for leaf in report.leaves()] == list(values)
        lines = report.printed_output.splitlines()
        assert "Tx Power Cutback Value = 18" in lines
        assert any(line.startswith("Tx Power Cutback Mode = 1") for line in lines)
        mode_line = next(line for line in lines if line.startswith("Tx Power Cutback Mode"))
        assert mode_line.endswith("Manual Tx Power Cutback")
        hybrid_line = next(line for line in lines if line.startswith("HybirdSelect"))
        assert hybrid_line == "HybirdSelect = 1 -- GPIO in tri-state mode"
        assert elapsed < TIME_LIMIT_S


def test_2_icmp_golden():
    with criterion(2, "ICMP packet golden values (literal script reading)"):
        start = time.perf_counter()
        report = run_source((SAMPLES / "icmp.dfsl").read_text(), base_dir=SAMPLES)
        elapsed = time.perf_counter() - start
        (root,) = report.roots
        assert len(FIGURE3) == 98 and (SAMPLES / "icmp.dat").read_bytes() == FIGURE3
        assert root["ether_header.destination.vendor"].value == 0x080020
        assert root["ether_header.destination.serialnumber"].value == 0x86354B
        assert root["ether_header.type"].value == 0x0800
        ip = root["ip_header"]
        assert ip["version"].value == 4
        assert ip["ihl"].value == 5
        assert ip["tos"].value == 0
        assert tuple(ip["source"][k].value for k in ("first", "second", "third", "forth")) == (250, 48, 139, 133)
        assert elapsed < TIME_LIMIT_S


def test_3_bit_reader_oracle():
    with criterion(3, "read_bits equals per-bit oracle on 10,000 random triples"):
        rng = random.Random(20051029)
        mismatches = 0
        for _ in range(10_000):
            data = rng.randbytes(rng.randint(1, 40))
            total = 8 * len(data)
            width = rng.randint(1, min(64, total))
            offset = rng.randint(0, total - width)
            cursor = BitCursor(BitSource.from_bytes(data), offset)
            if cursor.read_bits(width).value != naive_bits(data, offset, width):
                mismatches += 1
        assert mismatches == 0


def test_4_concatenation():
    with criterion(4, "read_bits(k) and read_bits(m) compose to read_bits(k+m); peek never moves"):
        rng = random.Random(1114)
        for _ in range(1_000):
            data = rng.randbytes(rng.randint(2, 24))
            total = 8 * len(data)
            n = rng.randint(2, min(64, total))
            k = rng.randint(1, n - 1)
            m = n - k
            offset = rng.randint(0, total - n)
            src = BitSource.from_bytes(data)

            whole = BitCursor(src, offset)
            peeked = whole.peek_bits(n)
            assert whole.position == offset
            full = whole.read_bits(n).value
            assert peeked.value == full

            split = BitCursor(src, offset)
            hi = split.read_bits(k).value
            split.peek_bits(m)
            if split.remaining >= 8:
                split.peek_bytes(1)
            assert split.position == offset + k
            lo = split.read_bits(m).value
            assert hi * 2**m + lo == full
            assert split.position == offset + n


def test_5_size_propagation_consistency():
    with criterion(5, "Fixed root sizes equal bits consumed; IP header 144, MAC address 48"):
        fixed_roots = 0
        for script in sorted(SAMPLES.glob("*.dfsl")):
            ast = parse(script.read_text())
            table = analyze(ast)
            report = run_source(script.read_text(), base_dir=SAMPLES)
            executed = [e for e in table.entries.values() if e.binding and e.definition]
            for entry, root in zip(executed, report.roots):
                assert entry.name == root.name
                if entry.size.is_fixed:
                    fixed_roots += 1
                    consumed = sum(leaf.width_bits for leaf in root.leaves())
                    assert entry.size.bits == consumed
            if all(e.size.is_fixed for e in executed):
                assert report.bits_consumed == sum(e.size.bits for e in executed)
        assert fixed_roots >= 2
        icmp = analyze(parse((SAMPLES / "icmp.dfsl").read_text()))
        assert str(icmp["ip_header"].size) == "Fixed(144)"
        assert str(icmp["mac_address"].size) == "Fixed(48)"


def test_6_xml_contract():
    with criterion(6, "PMD XML validates, has 8 fields, stream-bits=16, round-trips"):
        report = run_source((SAMPLES / "pmd.dfsl").read_text())
        doc = to_xml(report, "pmd.dfsl")
        validate_xml(doc)
        root = ET.fromstring(doc)
        assert len(list(root.iter("field"))) == 8
        assert root.get("stream-bits") == "16"
        assert read_xml_fields(doc) == report.field_tuples()


def test_7_error_paths(tmp_path, capsys):
    with criterion(7, "exit codes: truncated data 3, undefined domain 2, unterminated brace 1"):
        for name in ("truncated_icmp.dfsl", "truncated.dat", "undefined_domain.dfsl", "unterminated_brace.dfsl"):
            shutil.copy(FIXTURES / name, tmp_path / name)
        assert len((tmp_path / "truncated.dat").read_bytes()) == 10
        assert main(["run", str(tmp_path / "truncated_icmp.dfsl")]) == 3
        assert main(["run", str(SAMPLES / "icmp.dfsl"), "--data", str(tmp_path / "truncated.dat")]) == 3
        assert main(["run", str(tmp_path / "undefined_domain.dfsl")]) == 2
        assert main(["run", str(tmp_path / "unterminated_brace.dfsl")]) == 1
        err = capsys.readouterr().err
        assert "stream exhausted" in err
        assert "$payload" in err
        assert "end of input" in err


def test_8_case_insensitivity():
    with criterion(8, "upper-cased PMD script yields an identical value set"):
        source = (SAMPLES / "pmd.dfsl").read_text()
        lower = run_source(source)
        upper = run_source(source.upper())
        assert upper.field_tuples() == lower.field_tuples()
        assert [r.name for r in upper.roots] == [r.name for r in lower.roots]
        assert upper.bits_consumed == lower.bits_consumed == 16
        assert upper.printed_output == lower.printed_output.upper()
        assert to_xml(upper, "pmd.dfsl") == to_xml(lower, "pmd.dfsl")
