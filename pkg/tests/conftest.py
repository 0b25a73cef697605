import numpy as np
import pytest

from adaptfir import CorrelationModel


def random_model(rng: np.random.Generator, N: int, ridge: float = 0.1) -> CorrelationModel:
    A = rng.standard_normal((N, N))
    R = A @ A.T + ridge * np.eye(N)
    R = 0.5 * (R + R.T)
    p = rng.standard_normal(N)
    return CorrelationModel(R, p, float(rng.uniform(1.0, 5.0)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome, then assert it."""

    def check(cid: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {cid}: {detail}")
        assert ok, f"{cid}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
