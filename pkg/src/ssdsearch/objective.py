"""Search objective over block representations, plus Gram-matrix summaries.

For two balanced columns with +1 blocks B_l, B_j the inner product is
s_lj = 4|B_l ∩ B_j| - N, so every quantity here reduces to intersection counts.
The penalised objective is kept as two integer sums (pairs inside and outside
the admissible intersection range) plus the rational penalty weight; it is
never rounded.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernel
from .bitset import InvalidMoveError, intersect_count, n_words, swap_points
from .equivalence import RibdSolution, SsdMatrix


class Weight(enum.Enum):
    UNIT = "unit"
    PENALTY = "penalty"


def unit_range(n: int) -> tuple[int, int]:
    """Intersection counts c with |4c - N| <= 4 + (N mod 4)."""
    i = n % 4
    return (n - i) // 4 - 1, (n + i) // 4 + 1


def weight(c: int, n: int) -> Weight:
    lo, hi = unit_range(n)
    return Weight.UNIT if lo <= c <= hi else Weight.PENALTY


@functools.total_ordering
@dataclass(frozen=True)
class ObjectiveValue:
    in_range_sum: int
    penalty_sum: int
    bound: Fraction
    n_pairs: int

    @property
    def value(self) -> Fraction:
        if self.n_pairs == 0:
            return Fraction(0)
        return (self.in_range_sum + self.bound * self.penalty_sum) / self.n_pairs

    @property
    def key(self) -> int:
        """Integer proportional to the value with a fixed positive scale, for exact ordering."""
        return self.in_range_sum * self.bound.denominator + self.penalty_sum * self.bound.numerator

    @property
    def reached(self) -> bool:
        return self.penalty_sum == 0 and self.value == self.bound

    def __lt__(self, other: "ObjectiveValue") -> bool:
        return self.value < other.value

    def __eq__(self, other) -> bool:
        if not isinstance(other, ObjectiveValue):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)


def intersection_table(r: RibdSolution) -> np.ndarray:
    """m x m table of pairwise block intersection counts (diagonal N/2), by popcount."""
    words = np.array([b.words for b in r.blocks], dtype=np.uint64).reshape(r.m, n_words(r.n_points))
    return _kernel.table_from_words(words)


def pair_term(c: int, n: int) -> tuple[int, int]:
    """(in-range, penalty) contribution of one pair with intersection c."""
    sq = (4 * c - n) ** 2
    return (sq, 0) if weight(c, n) is Weight.UNIT else (0, sq)


def full_objective(r: RibdSolution, b, table: np.ndarray | None = None) -> ObjectiveValue:
    if table is None:
        table = intersection_table(r)
    n = r.n_points
    counts = table[np.triu_indices(r.m, 1)]
    sq = (4 * counts - n) ** 2
    lo, hi = unit_range(n)
    unit = (counts >= lo) & (counts <= hi)
    return ObjectiveValue(int(sq[unit].sum()), int(sq[~unit].sum()), Fraction(b), comb(r.m, 2))


def unweighted_objective(r: RibdSolution) -> Fraction:
    """Mean of (4|B_l ∩ B_j| - N)^2 over block pairs, i.e. E(s^2) of the design."""
    if r.m < 2:
        return Fraction(0)
    counts = intersection_table(r)[np.triu_indices(r.m, 1)]
    return Fraction(int(((4 * counts - r.n_points) ** 2).sum()), comb(r.m, 2))


def _check_move(r: RibdSolution, move) -> tuple[int, int, int]:
    cls, u, w = move
    if not 0 <= cls < r.m:
        raise InvalidMoveError(f"class index {cls} outside [0, {r.m})")
    block = r.blocks[cls]
    if u not in range(r.n_points) or w not in range(r.n_points) or u not in block or w in block:
        raise InvalidMoveError(f"move {(cls, u, w)} needs u in block {cls} and w outside it")
    return cls, u, w


def delta_objective(r: RibdSolution, table: np.ndarray, move, b=None) -> tuple[int, int]:
    """(dA, dP) caused by swapping point u out of and w into block l.

    Only pairs (l, j) change, and c_lj moves by [w in B_j] - [u in B_j]; each
    side is weighted by the range its own count falls in.
    """
    cls, u, w = _check_move(r, move)
    n = r.n_points
    da = dp = 0
    for j, other in enumerate(r.blocks):
        if j == cls:
            continue
        shift = (w in other) - (u in other)
        if not shift:
            continue
        c = int(table[cls, j])
        old_a, old_p = pair_term(c, n)
        new_a, new_p = pair_term(c + shift, n)
        da += new_a - old_a
        dp += new_p - old_p
    return da, dp


def delta_objective_popcount(r: RibdSolution, move) -> tuple[int, int]:
    """Same as :func:`delta_objective`, re-intersecting the moved block from scratch."""
    cls, u, w = _check_move(r, move)
    n = r.n_points
    moved = swap_points(r.blocks[cls], u, w)
    da = dp = 0
    for j, other in enumerate(r.blocks):
        if j == cls:
            continue
        old_a, old_p = pair_term(intersect_count(r.blocks[cls], other), n)
        new_a, new_p = pair_term(intersect_count(moved, other), n)
        da += new_a - old_a
        dp += new_p - old_p
    return da, dp


def apply_move(r: RibdSolution, move) -> RibdSolution:
    cls, u, w = _check_move(r, move)
    blocks = list(r.blocks)
    blocks[cls] = swap_points(blocks[cls], u, w)
    return RibdSolution(r.n_points, tuple(blocks))


@dataclass(frozen=True, eq=False)
class GramSummary:
    e_s2: Fraction
    s_max: int
    f_smax: int
    gram: np.ndarray
    vacuous: bool = False  # fewer than two columns, nothing to average


def _summarise(gram: np.ndarray) -> GramSummary:
    m = gram.shape[0]
    if m < 2:
        return GramSummary(Fraction(0), 0, 0, gram, vacuous=True)
    off = np.abs(gram[np.triu_indices(m, 1)])
    s_max = int(off.max())
    return GramSummary(Fraction(int((off * off).sum()), comb(m, 2)), s_max,
                       int((off == s_max).sum()), gram)


def gram_summary(d: SsdMatrix) -> GramSummary:
    """Gram matrix D^T D by direct column products, with E(s^2), s_max and f_smax."""
    h = d.entries.astype(np.int64)
    return _summarise(h.T @ h)


def gram_from_ribd(r: RibdSolution) -> np.ndarray:
    """D^T D of the corresponding design, computed as 4c - N from intersections."""
    return 4 * intersection_table(r) - r.n_points


def ribd_gram_summary(r: RibdSolution) -> GramSummary:
    return _summarise(gram_from_ribd(r))
