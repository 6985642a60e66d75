import sys
from pathlib import Path

import pytest

from cylink.links import build_polynomial, validate_weight_system

TESTS = Path(__file__).resolve().parent
DATA = TESTS / "data"
if str(TESTS) not in sys.path:
    sys.path.insert(0, str(TESTS))

from common import GOLDEN_A, GOLDEN_A_BASIS, GOLDEN_B, GOLDEN_B_TERMS, QUINTIC, fermat  # noqa: E402


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def golden_a():
    ws = validate_weight_system(GOLDEN_A)
    return ws, build_polynomial(ws, {m: 1 for m in GOLDEN_A_BASIS})


@pytest.fixture(scope="session")
def golden_b():
    ws = validate_weight_system(GOLDEN_B)
    return ws, build_polynomial(ws, {m: 1 for m in GOLDEN_B_TERMS})


@pytest.fixture(scope="session")
def quintic():
    ws = validate_weight_system(QUINTIC)
    return ws, fermat()


def pytest_terminal_summary(terminalreporter):
    from common import ACCEPTANCE_LINES
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split()[0]):
            terminalreporter.write_line(line)
