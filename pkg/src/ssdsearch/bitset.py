"""Fixed-capacity bit-string point sets.

A block over ``n_points`` points is stored as ``ceil(n_points / 64)`` 64-bit
words, least significant bit of word 0 being point 0.  Points are 0-based
here; anything user facing (files, logs) adds one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

WORD_BITS = 64
WORD_MASK = (1 << WORD_BITS) - 1


class CapacityMismatchError(ValueError):
    """Two blocks over different point sets were combined."""


class InvalidMoveError(ValueError):
    """A swap whose out-point is missing or whose in-point is already present."""


def n_words(n_points: int) -> int:
    return (n_points + WORD_BITS - 1) // WORD_BITS


def _split(value: int, n_points: int) -> tuple[int, ...]:
    return tuple((value >> (WORD_BITS * k)) & WORD_MASK for k in range(n_words(n_points)))


@dataclass(frozen=True)
class Block:
    words: tuple[int, ...]
    n_points: int

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError(f"n_points must be positive, got {self.n_points}")
        if len(self.words) != n_words(self.n_points):
            raise ValueError(
                f"expected {n_words(self.n_points)} words for {self.n_points} points, "
                f"got {len(self.words)}")
        if self.as_int() >> self.n_points:
            raise ValueError("bits set at positions >= n_points")

    @classmethod
    def from_points(cls, points: Iterable[int], n_points: int) -> "Block":
        value = 0
        for p in points:
            p = int(p)
            if not 0 <= p < n_points:
                raise ValueError(f"point {p} outside [0, {n_points})")
            value |= 1 << p
        return cls(_split(value, n_points), n_points)

    @classmethod
    def from_int(cls, value: int, n_points: int) -> "Block":
        return cls(_split(value, n_points), n_points)

    def as_int(self) -> int:
        value = 0
        for k, word in enumerate(self.words):
            value |= word << (WORD_BITS * k)
        return value

    def points(self) -> tuple[int, ...]:
        value = self.as_int()
        return tuple(p for p in range(self.n_points) if (value >> p) & 1)

    def popcount(self) -> int:
        return sum(word.bit_count() for word in self.words)

    def __contains__(self, point: int) -> bool:
        return bool((self.words[point // WORD_BITS] >> (point % WORD_BITS)) & 1)

    def __len__(self) -> int:
        return self.popcount()

    def __repr__(self) -> str:
        return f"Block({{{','.join(str(p + 1) for p in self.points())}}}, N={self.n_points})"


def _check_same(a: Block, b: Block) -> None:
    if a.n_points != b.n_points:
        raise CapacityMismatchError(f"blocks over {a.n_points} and {b.n_points} points")


def intersect_count(a: Block, b: Block) -> int:
    """|a ∩ b| by word-wise AND and population count."""
    _check_same(a, b)
    return sum((x & y).bit_count() for x, y in zip(a.words, b.words))


def complement(a: Block) -> Block:
    full = (1 << a.n_points) - 1
    return Block.from_int(full & ~a.as_int(), a.n_points)


def swap_points(a: Block, out_point: int, in_point: int) -> Block:
    """Replace ``out_point`` by ``in_point``; the block size is preserved."""
    if out_point not in range(a.n_points) or in_point not in range(a.n_points):
        raise InvalidMoveError(f"points ({out_point}, {in_point}) outside [0, {a.n_points})")
    if out_point not in a:
        raise InvalidMoveError(f"out point {out_point + 1} is not in {a!r}")
    if in_point in a:
        raise InvalidMoveError(f"in point {in_point + 1} is already in {a!r}")
    value = a.as_int() ^ (1 << out_point) ^ (1 << in_point)
    return Block.from_int(value, a.n_points)
