import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from thinspec.geometry import MaxData

settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_maxdata(rng: np.random.Generator, order: int = 14) -> MaxData:
    """Admissible k = 1 data: H0 in [0.3, 3], H2 in [-5, -0.2], the rest in [-3, 3]."""
    H = [rng.uniform(0.3, 3.0), 0.0, rng.uniform(-5.0, -0.2)] + list(rng.uniform(-3, 3, order - 2))
    h = list(rng.uniform(-3, 3, order + 1))
    return MaxData(xbar=0.5, k=1, H=H, h=h)


@st.composite
def maxdata_k1(draw, order: int = 14):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_maxdata(np.random.default_rng(seed), order)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


PI = math.pi


# one line per acceptance criterion, repeated in the terminal summary so it
# shows up even when output capture hides the per-test prints
ACCEPTANCE_LINES: dict = {}


def report_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
