import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_gap_matrix(seed, max_dim=50, min_gap=1.01):
    """Seeded random matrix whose top two singular values differ by ``min_gap``."""
    rng = np.random.default_rng(seed)
    while True:
        M = int(rng.integers(2, max_dim + 1))
        N = int(rng.integers(2, max_dim + 1))
        A = rng.standard_normal((M, N)) * rng.exponential(1.0, (1, N))
        s = np.linalg.svd(A, compute_uv=False)
        if s[0] / s[1] >= min_gap:
            return A


ACCEPTANCE_LINES = []


def record_criterion(label, passed, detail=""):
    """Collect one PASS/FAIL line for the end-of-run acceptance summary."""
    line = f"{label}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
