import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from voichain.gaussian_env import PosteriorOperator, SpectralBand, random_bounded_operator  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def identity_op():
    def make(d):
        return PosteriorOperator.from_matrix(np.eye(d))
    return make


@pytest.fixture
def bounded_op():
    def make(d, seed=0, lo=0.5, hi=2.0):
        return random_bounded_operator(d, SpectralBand(lo, hi), seed)
    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
