import numpy as np
import pytest
from scipy.linalg import expm

from memdepth.linalg import PAULIS

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def expm_interaction(angles) -> np.ndarray:
    """Independent oracle for exp(i sum_j a_j s_j (x) s_j) via scipy."""
    h = sum(a * np.kron(p, p) for a, p in zip(angles, PAULIS))
    return expm(1j * h)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
