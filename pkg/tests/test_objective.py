from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_ribd
from ssdsearch.bitset import InvalidMoveError
from ssdsearch.bounds import lower_bound
from ssdsearch.equivalence import RibdSolution, SsdMatrix, ribd_to_ssd, ssd_to_ribd
from ssdsearch.io import load_known_design
from ssdsearch.objective import (Weight, apply_move, delta_objective, delta_objective_popcount,
                                 full_objective, gram_from_ribd, gram_summary, intersection_table,
                                 ribd_gram_summary, unit_range, unweighted_objective, weight)


def _random_move(rng, r):
    cls = int(rng.integers(r.m))
    block = r.blocks[cls]
    inside = block.points()
    outside = [p for p in range(r.n_points) if p not in block]
    return cls, int(rng.choice(inside)), int(rng.choice(outside))


def test_weight_examples():
    assert unit_range(18) == (3, 6)
    assert weight(5, 18) is Weight.UNIT
    assert weight(7, 18) is Weight.PENALTY
    assert weight(4, 16) is Weight.UNIT
    assert weight(2, 16) is Weight.PENALTY


@pytest.mark.parametrize("n", range(8, 66, 2))
def test_unit_range_is_abs_s_at_most_4_plus_i(n):
    i = n % 4
    for c in range(n // 2 + 1):
        assert (weight(c, n) is Weight.UNIT) == (abs(4 * c - n) <= 4 + i)


def test_optimal_22_22_has_zero_penalty():
    r = ssd_to_ribd(load_known_design(22, 22)[0])
    v = full_objective(r, lower_bound(22, 22).bound)
    assert (v.in_range_sum, v.penalty_sum) == (924, 0)
    assert v.value == 4 and v.reached


def test_optimal_24_24_value():
    r = ssd_to_ribd(load_known_design(24, 24)[0])
    b = lower_bound(24, 24).bound
    v = full_objective(r, b)
    assert v.penalty_sum == 0 and v.in_range_sum == 576
    assert v.value == Fraction(576, 276) == b


def test_repeated_block_is_penalised():
    r = RibdSolution.from_points(8, [[0, 1, 2, 3], [0, 1, 2, 3]])
    b = Fraction(7, 3)
    v = full_objective(r, b)
    assert v.in_range_sum == 0 and v.penalty_sum == 64
    assert v.value == b * 64


def test_unweighted_matches_caption():
    r = ssd_to_ribd(load_known_design(18, 23)[0])
    assert unweighted_objective(r) == Fraction(1556, 253)


def test_h68_single_move():
    r = RibdSolution.from_points(6, [[1, 4, 5], [0, 3, 4]])
    move = (0, 4, 0)  # point 5 leaves, point 1 enters
    table = intersection_table(r)
    b = Fraction(1)
    before = full_objective(r, b)
    after = full_objective(apply_move(r, move), b)
    da, dp = delta_objective(r, table, move)
    assert (da, dp) == delta_objective_popcount(r, move)
    assert (before.in_range_sum + da, before.penalty_sum + dp) == (after.in_range_sum, after.penalty_sum)


def test_invalid_moves_rejected():
    r = RibdSolution.from_points(8, [[0, 1, 2, 3], [0, 2, 4, 6]])
    t = intersection_table(r)
    for bad in [(2, 0, 4), (0, 4, 5), (0, 0, 1), (0, 0, 8)]:
        with pytest.raises(InvalidMoveError):
            delta_objective(r, t, bad)


@given(st.integers(4, 16).map(lambda k: 2 * k), st.integers(2, 24), st.integers(0, 2 ** 32))
def test_delta_matches_full_and_popcount(n, m, seed):
    rng = np.random.default_rng(seed)
    r = random_ribd(rng, n, m)
    b = Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 50)))
    move = _random_move(rng, r)
    before = full_objective(r, b)
    after = full_objective(apply_move(r, move), b)
    d = delta_objective(r, intersection_table(r), move)
    assert d == delta_objective_popcount(r, move)
    assert d == (after.in_range_sum - before.in_range_sum, after.penalty_sum - before.penalty_sum)


@given(st.integers(4, 16).map(lambda k: 2 * k), st.integers(2, 24), st.integers(0, 2 ** 32))
def test_gram_routes_agree(n, m, seed):
    r = random_ribd(np.random.default_rng(seed), n, m)
    h = ribd_to_ssd(r).entries.astype(int)
    g = h.T @ h
    assert np.array_equal(gram_from_ribd(r), g)
    assert gram_summary(ribd_to_ssd(r)).e_s2 == unweighted_objective(r) == ribd_gram_summary(r).e_s2
    # every s_ij is N mod 4 plus a multiple of 4
    assert np.all((g - n) % 4 == 0)


@given(st.integers(4, 16).map(lambda k: 2 * k), st.integers(2, 24), st.integers(0, 2 ** 32))
def test_penalised_value_dominates_unweighted_when_b_at_least_one(n, m, seed):
    rng = np.random.default_rng(seed)
    r = random_ribd(rng, n, m)
    b = Fraction(int(rng.integers(1, 40)), 1) + Fraction(1, int(rng.integers(1, 9)))
    assert full_objective(r, b).value >= unweighted_objective(r)


@pytest.mark.parametrize("size,s_max,f_smax", [((16, 25), 4, 144), ((18, 24), 6, 23),
                                                ((18, 23), 6, 17), ((24, 24), 4, 36)])
def test_gram_summary_captions(size, s_max, f_smax):
    d = load_known_design(*size)[0]
    s = gram_summary(d)
    assert (s.s_max, s.f_smax) == (s_max, f_smax)


def test_single_column_is_vacuous():
    s = gram_summary(SsdMatrix(np.array([[1], [-1], [1], [-1]])))
    assert s.vacuous and s.e_s2 == 0


def test_two_level_caption_arithmetic():
    d, header, _ = load_known_design(22, 22)
    s = gram_summary(d)
    pairs = comb(22, 2)
    assert s.e_s2 * pairs == s.f_smax * s.s_max ** 2 + (pairs - s.f_smax) * 2 ** 2
