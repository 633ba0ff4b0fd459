"""Two-level design matrices <-> resolvable block designs with two blocks per class.

Column l of an N x m {-1, +1} matrix is the parallel class whose first block
holds the rows carrying +1 and whose second block holds the rest.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitset import Block, CapacityMismatchError, complement, intersect_count


class DesignValidationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SsdMatrix:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries)
        if arr.ndim != 2:
            raise DesignValidationError(f"design must be 2-dimensional, got shape {arr.shape}")
        if not np.isin(arr, (-1, 1)).all():
            raise DesignValidationError("design entries must be -1 or +1")
        arr = arr.astype(np.int8)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]

    def __eq__(self, other):
        if not isinstance(other, SsdMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool((self.entries == other.entries).all())

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))


@dataclass(frozen=True)
class ParallelClass:
    first: Block
    second: Block

    def __post_init__(self):
        if self.first.n_points != self.second.n_points:
            raise CapacityMismatchError("blocks of a parallel class must share the point set")
        if intersect_count(self.first, self.second) or \
                self.first.popcount() + self.second.popcount() != self.first.n_points:
            raise DesignValidationError("the two blocks must partition the point set")
        if self.first.popcount() != self.second.popcount():
            raise DesignValidationError("both blocks of a parallel class must have N/2 points")

    @classmethod
    def from_block(cls, block: Block) -> "ParallelClass":
        return cls(block, complement(block))

    def flipped(self) -> "ParallelClass":
        return ParallelClass(self.second, self.first)


@dataclass(frozen=True)
class RibdSolution:
    """m blocks of size N/2, each standing for its parallel class."""

    n_points: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if self.n_points % 2:
            raise DesignValidationError(f"N must be even, got {self.n_points}")
        for k, b in enumerate(self.blocks):
            if b.n_points != self.n_points:
                raise CapacityMismatchError(f"block {k + 1} is over {b.n_points} points, not {self.n_points}")
            if b.popcount() != self.n_points // 2:
                raise DesignValidationError(
                    f"block {k + 1} has {b.popcount()} points, expected {self.n_points // 2}")

    @classmethod
    def from_points(cls, n_points: int, blocks: Sequence[Sequence[int]]) -> "RibdSolution":
        """Build from 0-based point lists."""
        return cls(n_points, tuple(Block.from_points(b, n_points) for b in blocks))

    @property
    def m(self) -> int:
        return len(self.blocks)

    def parallel_class(self, k: int) -> ParallelClass:
        return ParallelClass.from_block(self.blocks[k])

    def membership(self) -> np.ndarray:
        """N x m 0/1 matrix, entry (p, l) = [p in block l]."""
        x = np.zeros((self.n_points, self.m), dtype=np.uint8)
        for k, b in enumerate(self.blocks):
            x[list(b.points()), k] = 1
        return x


@dataclass(frozen=True)
class Pcim:
    a11: int
    a12: int
    a21: int
    a22: int

    def as_matrix(self) -> list[list[int]]:
        return [[self.a11, self.a12], [self.a21, self.a22]]


def ssd_to_ribd(d: SsdMatrix) -> RibdSolution:
    n = d.n_rows
    sums = d.entries.sum(axis=0, dtype=np.int64)
    bad = np.flatnonzero(sums)
    if bad.size:
        j = int(bad[0])
        raise DesignValidationError(f"column {j + 1} is unbalanced (sum {int(sums[j])})")
    return RibdSolution(n, tuple(Block.from_points(np.flatnonzero(d.column(j) == 1), n)
                                 for j in range(d.n_cols)))


def ribd_to_ssd(r: RibdSolution) -> SsdMatrix:
    return SsdMatrix(2 * r.membership().astype(np.int8) - 1)


def pcim(q1: ParallelClass, q2: ParallelClass) -> Pcim:
    return Pcim(intersect_count(q1.first, q2.first), intersect_count(q1.first, q2.second),
                intersect_count(q1.second, q2.first), intersect_count(q1.second, q2.second))


def s_statistic(p: Pcim) -> int:
    return abs(p.a11 - p.a12 - p.a21 + p.a22)


@dataclass(frozen=True)
class Violation:
    kind: str  # "unbalanced", "equal" or "negated"
    columns: tuple[int, ...]  # 1-based

    def __str__(self) -> str:
        return f"{self.kind}:{','.join(map(str, self.columns))}"


def validate_strict(d: SsdMatrix) -> list[Violation]:
    """Every balance failure and every equal or negated column pair."""
    out = [Violation("unbalanced", (j + 1,))
           for j in np.flatnonzero(d.entries.sum(axis=0, dtype=np.int64))]
    gram = d.entries.T.astype(np.int64) @ d.entries.astype(np.int64)
    n = d.n_rows
    for i, j in zip(*np.triu_indices(d.n_cols, 1)):
        if gram[i, j] == n:
            out.append(Violation("equal", (int(i) + 1, int(j) + 1)))
        elif gram[i, j] == -n:
            out.append(Violation("negated", (int(i) + 1, int(j) + 1)))
    return out
