import sys

import pytest

from quantum_cg import BContext


@pytest.fixture(scope="session")
def ctx():
    return BContext()


@pytest.fixture(scope="session")
def ctx30():
    return BContext(dps=30)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
