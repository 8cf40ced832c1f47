import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def qr_eigenvalues(M, iters=1000):
    """Eigenvalues of a Hermitian matrix by Wilkinson-shifted QR iteration with deflation."""
    A = np.array(M, dtype=complex)
    out = []
    while A.shape[0] > 1:
        n = A.shape[0]
        for _ in range(iters):
            if np.abs(A[-1, :-1]).max() <= 1e-15 * max(1.0, np.abs(A).max()):
                break
            a, b, c = A[-2, -2].real, abs(A[-1, -2]), A[-1, -1].real
            delta = (a - c) / 2
            sign = 1.0 if delta >= 0 else -1.0
            mu = c - sign * b * b / (abs(delta) + np.hypot(delta, b))
            Q, R = np.linalg.qr(A - mu * np.eye(n))
            A = R @ Q + mu * np.eye(n)
        out.append(A[-1, -1].real)
        A = A[:-1, :-1]
    if A.shape[0]:
        out.append(A[0, 0].real)
    return np.sort(out)[::-1]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
