import json
from pathlib import Path

import pytest

FROZEN = json.loads((Path(__file__).parent / "frozen_values.json").read_text())

# filled by tests/test_acceptance.py; printed after the run
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[1:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
