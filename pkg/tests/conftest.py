import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orbitkit.nilalg import NilMatrix, ut  # noqa: E402

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def ut33():
    return ut(3, 3)


@pytest.fixture(scope="session")
def ut35():
    return ut(3, 5)


@pytest.fixture(scope="session")
def E():
    """``E(i, j, n, p)``: matrix unit with 1-based indices."""
    return lambda i, j, n=3, p=3: NilMatrix.unit(i, j, n, p)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.module.__name__.endswith("test_acceptance"):
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append((label, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, secs in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({secs:.2f} s)")
