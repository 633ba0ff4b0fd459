import pytest
from hypothesis import given, strategies as st

from ssdsearch.bitset import (Block, CapacityMismatchError, InvalidMoveError, complement,
                              intersect_count, swap_points)


def one_based(points, n):
    return Block.from_points([p - 1 for p in points], n)


@st.composite
def block_pairs(draw, max_n=150):
    n = draw(st.integers(1, max_n))
    a = draw(st.sets(st.integers(0, n - 1)))
    b = draw(st.sets(st.integers(0, n - 1)))
    return n, a, b


def test_self_intersection():
    a = one_based({1, 4, 5}, 6)
    assert intersect_count(a, a) == 3


def test_complement_pair_disjoint():
    assert intersect_count(one_based({2, 5, 6}, 6), one_based({1, 3, 4}, 6)) == 0


def test_worked_example_blocks_meet_in_one_point():
    assert intersect_count(one_based({2, 5, 6}, 6), one_based({1, 4, 5}, 6)) == 1


def test_capacity_mismatch():
    with pytest.raises(CapacityMismatchError):
        intersect_count(Block.from_points([0], 8), Block.from_points([0], 10))


def test_complement_examples():
    assert complement(one_based({2, 5, 6}, 6)) == one_based({1, 3, 4}, 6)
    assert complement(Block.from_points([], 8)).points() == tuple(range(8))


def test_swap_points():
    a = one_based({2, 5, 6}, 6)
    assert swap_points(a, 4, 0) == one_based({1, 2, 6}, 6)
    with pytest.raises(InvalidMoveError):
        swap_points(a, 1, 1)
    with pytest.raises(InvalidMoveError):
        swap_points(a, 0, 2)  # point 1 is not in the block


def test_multiword_layout():
    b = Block.from_points([0, 63, 64, 129], 130)
    assert len(b.words) == 3
    assert b.words == (1 | 1 << 63, 1, 2)
    assert b.points() == (0, 63, 64, 129)


def test_rejects_stray_bits():
    with pytest.raises(ValueError):
        Block((1 << 8,), 8)


@given(block_pairs())
def test_intersection_matches_naive(case):
    n, a, b = case
    assert intersect_count(Block.from_points(a, n), Block.from_points(b, n)) == len(a & b)


@given(block_pairs())
def test_intersection_symmetric(case):
    n, a, b = case
    ba, bb = Block.from_points(a, n), Block.from_points(b, n)
    assert intersect_count(ba, bb) == intersect_count(bb, ba)


@given(block_pairs())
def test_complement_properties(case):
    n, a, _ = case
    blk = Block.from_points(a, n)
    comp = complement(blk)
    assert blk.popcount() + comp.popcount() == n
    assert intersect_count(blk, comp) == 0
    assert complement(comp) == blk


@given(st.data())
def test_swap_then_reverse_restores(data):
    n = data.draw(st.integers(2, 130))
    pts = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    blk = Block.from_points(pts, n)
    u = data.draw(st.sampled_from(sorted(pts)))
    w = data.draw(st.sampled_from(sorted(set(range(n)) - pts)))
    moved = swap_points(blk, u, w)
    assert moved.popcount() == blk.popcount()
    assert swap_points(moved, w, u) == blk
