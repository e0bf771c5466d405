import numpy as np
import pytest

from edgedsc.codes import build_from_parity, build_hamming
from edgedsc.gf2 import BinaryMatrix, nullspace

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


# BCH(15,7): g(x) = 1 + x^4 + x^6 + x^7 + x^8, designed distance 5
BCH15_G_POLY = (1, 0, 0, 0, 1, 0, 1, 1, 1)


def bch15_parity() -> BinaryMatrix:
    rows = []
    for shift in range(7):
        row = [0] * 15
        for i, c in enumerate(BCH15_G_POLY):
            row[shift + i] = c
        rows.append(row)
    return nullspace(BinaryMatrix(np.array(rows, dtype=np.uint8)))


@pytest.fixture(scope="session")
def ham3():
    return build_hamming(3)


@pytest.fixture(scope="session")
def ham4():
    return build_hamming(4)


@pytest.fixture(scope="session")
def bch15():
    return build_from_parity(bch15_parity(), 2)
