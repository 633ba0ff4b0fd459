from pathlib import Path

import hypothesis
import numpy as np
import pytest

from ssdsearch.equivalence import RibdSolution, SsdMatrix
from ssdsearch.io import read_design

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile("ci")

DATA = Path(__file__).parent / "data"

# 1-based block pairs of the 6-run, 8-factor worked example
H68_BLOCKS = [
    ({2, 5, 6}, {1, 3, 4}), ({1, 4, 5}, {2, 3, 6}), ({3, 5, 6}, {1, 2, 4}),
    ({2, 4, 5}, {1, 3, 6}), ({2, 4, 6}, {1, 3, 5}), ({1, 2, 4}, {3, 5, 6}),
    ({1, 5, 6}, {2, 3, 4}), ({1, 2, 3}, {4, 5, 6}),
]

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def h68() -> SsdMatrix:
    return read_design((DATA / "h_6_8.txt").read_text())[0]


@pytest.fixture
def h68_ribd() -> RibdSolution:
    return RibdSolution.from_points(6, [[p - 1 for p in sorted(first)] for first, _ in H68_BLOCKS])


def random_ribd(rng: np.random.Generator, n: int, m: int) -> RibdSolution:
    return RibdSolution.from_points(n, [rng.permutation(n)[: n // 2] for _ in range(m)])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
