from pathlib import Path

import pytest

SAMPLES = Path(__file__).resolve().parents[1] / "samples"

# (criterion number, description, passed) appended by test_acceptance.py
ACCEPTANCE_RESULTS = []


@pytest.fixture
def samples():
    return SAMPLES


@pytest.fixture
def pmd_source():
    return (SAMPLES / "pmd.dfsl").read_text()


@pytest.fixture
def icmp_source():
    return (SAMPLES / "icmp.dfsl").read_text()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {description}")
