import json
from pathlib import Path

import pytest

from bsdtwist.curve import make_curve
from bsdtwist.pipeline.cli import fixture_path
from bsdtwist.pipeline.ingest import ingest

DATA = Path(__file__).parent / "data"
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture(scope="session")
def fixture_records():
    return ingest(fixture_path()).records


@pytest.fixture(scope="session")
def records_by_label(fixture_records):
    return {r.label: r for r in fixture_records}


@pytest.fixture(scope="session")
def e46():
    return make_curve(1, -1, 0, -10, -12)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
