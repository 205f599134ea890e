import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import corpus, flowout_corpus  # noqa: E402


@pytest.fixture(scope="session")
def trees9():
    return list(corpus(9))


@pytest.fixture(scope="session")
def flowout10():
    return list(flowout_corpus(10))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        terminalreporter.write_line(lines[num])
