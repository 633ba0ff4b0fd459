from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ssdsearch.bounds import (Branch, TheoremViolationError, Verdict, ceil_plus, find_q,
                              floor_plus, lower_bound, minimax_verdict, nguyen_tang_bound,
                              q_candidates)

GRID = [(n, m) for n in range(8, 31, 2) for m in range(n, 3 * n + 1)]


def test_floor_and_ceil_plus():
    assert ceil_plus(Fraction(-3, 2)) == 0
    assert ceil_plus(Fraction(1088, 64)) == 17
    assert ceil_plus(Fraction(1089, 64)) == 18
    assert floor_plus(0) == 0
    assert floor_plus(Fraction(-1, 3)) == 0
    assert floor_plus(Fraction(7, 2)) == 3


@pytest.mark.parametrize("n, m, q", [(18, 23, 3), (16, 25, 1), (24, 24, 2)])
def test_find_q(n, m, q):
    assert find_q(n, m) == q


def test_find_q_domain():
    with pytest.raises(ValueError):
        find_q(16, 15)
    with pytest.raises(ValueError):
        find_q(9, 20)


def test_bound_18_23_trace():
    res = lower_bound(18, 23)
    assert res.q == 3
    assert res.g == 1800
    assert res.branch is Branch.N2_ODDQ_CASE3
    assert res.h_scaled == 3112
    assert res.bound == Fraction(3112, 506)


@pytest.mark.parametrize("n, m, expected", [
    (16, 25, Fraction(2304, 300)),
    (24, 24, Fraction(576, 276)),
    (22, 22, Fraction(4)),
])
def test_bound_values(n, m, expected):
    assert lower_bound(n, m).bound == expected


def test_bound_is_reduced():
    b = lower_bound(18, 23).bound
    assert (b.numerator, b.denominator) == (1556, 253)


@pytest.mark.parametrize("n, m, expected", [
    (18, 23, Fraction(1944, 374)),
    (16, 16, Fraction(256, 225)),
    (16, 25, Fraction(2560, 360)),
])
def test_nguyen_tang(n, m, expected):
    assert nguyen_tang_bound(n, m) == expected


def test_minimax_verdicts():
    b = Fraction(192, 25)
    assert minimax_verdict(16, 25, b, b, 4) is Verdict.MINIMAX_OPTIMAL
    b18 = Fraction(1556, 253)
    assert minimax_verdict(18, 23, b18, b18, 6) is Verdict.MINIMAX_OPTIMAL
    assert minimax_verdict(18, 23, b18, b18, 2) is Verdict.MINIMAX_OPTIMAL
    assert minimax_verdict(16, 25, b, b, 8) is Verdict.INCONCLUSIVE
    assert minimax_verdict(18, 23, b18, b18, 4) is Verdict.INCONCLUSIVE
    assert minimax_verdict(16, 25, b + Fraction(32, 600), b, 4) is Verdict.INCONCLUSIVE
    with pytest.raises(ValueError):
        minimax_verdict(16, 25, b, b, 3)


@pytest.mark.parametrize("n, m", GRID)
def test_q_is_unique_or_edge_pair(n, m):
    inside, edge = q_candidates(n, m)
    if len(inside) == 1:
        q = inside[0]
        assert -2 * n + 2 < m - q * (n - 1) < 2 * n - 2 and (m + q) % 4 == 2
    else:
        # m = k(N-1) with kN = 0 (mod 4): window edges, never the interior
        assert inside == [] and len(edge) == 2 and edge[1] == edge[0] + 4
        assert m % (n - 1) == 0
        assert lower_bound(n, m).boundary


@pytest.mark.parametrize("n", range(8, 31, 2))
def test_edge_case_matches_classical_bound(n):
    # m = 2(N-1): both edge q give N^2 / (2N - 3), the classical bound, worked by hand
    m = 2 * (n - 1)
    assert lower_bound(n, m).bound == Fraction(n * n, 2 * n - 3) == nguyen_tang_bound(n, m)


@pytest.mark.parametrize("n, m", GRID)
def test_bound_structure(n, m):
    res = lower_bound(n, m)
    mm = m * (m - 1)
    scaled = res.bound * mm
    assert scaled.denominator == 1
    if n % 4 == 2:
        extra = int(scaled) - 4 * mm
        assert extra >= 0 and extra % 64 == 0
    if m > n - 1:
        assert res.bound > 0
    assert nguyen_tang_bound(n, m) <= res.bound


def test_uncovered_distance_never_occurs():
    for n, m in GRID:
        res = lower_bound(n, m)
        assert abs(res.shift) != n - 1


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 12).map(lambda k: 2 * k), st.integers(0, 2 ** 32), st.integers(0, 20))
def test_bound_below_random_design(n, seed, extra):
    m = n + extra
    rng = np.random.default_rng(seed)
    cols = [rng.permutation(np.repeat([-1, 1], n // 2)) for _ in range(m)]
    h = np.array(cols).T.astype(np.int64)
    g = h.T @ h
    iu = np.triu_indices(m, 1)
    e_s2 = Fraction(int((g[iu] ** 2).sum()), len(iu[0]))
    assert e_s2 >= lower_bound(n, m).bound


def test_theorem_violation_is_arithmetic_error():
    assert issubclass(TheoremViolationError, ArithmeticError)
