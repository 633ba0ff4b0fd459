"""Tabu search over block designs and the independent multi-run driver.

A run starts from m independent uniformly random N/2-subsets and repeatedly
moves to the best admissible swap neighbour (one point leaves a block, one
enters).  The reverse of each move is tabu for the next ``tabu_len``
iterations unless it beats the best value seen so far.  A run stops when the
objective reaches the target or after ``nitmax`` iterations without a strict
improvement.

Runs are independent; run ``k`` of a search is seeded with ``seed + k`` and
uses numpy's PCG64 generator (via ``numpy.random.default_rng``), so results
depend only on the seed schedule, never on how runs are spread over workers.
"""
from __future__ import annotations

import logging
import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator

import numpy as np

from . import _kernel
from .bitset import Block, InvalidMoveError, n_words
from .bounds import lower_bound
from .equivalence import RibdSolution
from .objective import ObjectiveValue, delta_objective, full_objective, pair_term

log = logging.getLogger(__name__)

DEFAULT_NITMAX = 300
DEFAULT_TABU_LEN = 7
DEFAULT_MAX_RUNS = 80_000
HARD_NITMAX = 450
HARD_MAX_RUNS = 4_000_000
WORKERS_ENV = "SSDSEARCH_WORKERS"


@dataclass(frozen=True)
class Move:
    class_index: int
    out_point: int
    in_point: int

    def __post_init__(self):
        if self.out_point == self.in_point:
            raise InvalidMoveError("a move needs two distinct points")

    def reverse(self) -> "Move":
        return Move(self.class_index, self.in_point, self.out_point)

    def undirected(self) -> tuple[int, int, int]:
        return (self.class_index, min(self.out_point, self.in_point),
                max(self.out_point, self.in_point))

    def __iter__(self):
        return iter((self.class_index, self.out_point, self.in_point))


class TabuList:
    """FIFO of the last ``capacity`` moves; (l, u, w) and (l, w, u) are the same entry."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"tabu list capacity must be positive, got {capacity}")
        self.capacity = capacity
        self.entries: deque[Move] = deque(maxlen=capacity)

    def push(self, move: Move) -> None:
        self.entries.append(move)

    def __contains__(self, move) -> bool:
        key = Move(*move).undirected()
        return any(e.undirected() == key for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def counts(self, m: int, n: int) -> np.ndarray:
        out = np.zeros((m, n, n), dtype=np.int32)
        for cls, u, w in self.entries:
            out[cls, u, w] += 1
            out[cls, w, u] += 1
        return out


@dataclass(frozen=True)
class SearchConfig:
    n_rows: int
    n_cols: int
    nitmax: int = DEFAULT_NITMAX
    tabu_len: int = DEFAULT_TABU_LEN
    seed: int = 0
    target: Fraction | None = None
    max_runs: int = DEFAULT_MAX_RUNS
    workers: int = 1
    check_every: int = 0  # recompute cached state every K iterations; 0 disables

    def __post_init__(self):
        if self.n_rows < 8 or self.n_rows % 2:
            raise ValueError(f"N must be even and at least 8, got {self.n_rows}")
        if self.n_cols < 2:
            raise ValueError(f"m must be at least 2, got {self.n_cols}")
        if self.tabu_len < 1:
            raise ValueError(f"tabu length must be positive, got {self.tabu_len}")
        if self.nitmax < 0 or self.max_runs < 0:
            raise ValueError("nitmax and max_runs must be nonnegative")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.target is None and self.n_cols <= self.n_rows - 1:
            raise ValueError("no default target for m <= N - 1; pass one explicitly")
        b = self.target_bound
        if b <= 0:
            raise ValueError(f"target must be positive, got {b}")
        worst = comb(self.n_cols, 2) * self.n_rows ** 2 * (b.numerator + b.denominator)
        if worst >= 2 ** 62:
            raise OverflowError(f"objective keys for N={self.n_rows}, m={self.n_cols} overflow int64")

    @property
    def target_bound(self) -> Fraction:
        if self.target is not None:
            return Fraction(self.target)
        return lower_bound(self.n_rows, self.n_cols).bound

    @classmethod
    def hard_preset(cls, n_rows: int, n_cols: int, **kw) -> "SearchConfig":
        kw.setdefault("nitmax", HARD_NITMAX)
        kw.setdefault("max_runs", HARD_MAX_RUNS)
        return cls(n_rows, n_cols, **kw)


def default_workers() -> int:
    return int(os.environ.get(WORKERS_ENV, "1"))


@dataclass(frozen=True)
class SearchResult:
    best_solution: RibdSolution
    best_f: ObjectiveValue
    achieved: bool
    iterations: int
    run_index: int
    seed: int
    wall_time: float = field(compare=False)
    forced_moves: int = 0
    history: tuple[tuple[int, Fraction], ...] = ()


def key_terms(n: int, b: Fraction) -> np.ndarray:
    """Scaled pair contribution indexed by intersection count."""
    out = np.empty(n // 2 + 1, dtype=np.int64)
    for c in range(n // 2 + 1):
        a, p = pair_term(c, n)
        out[c] = a * b.denominator + p * b.numerator
    return out


def random_initial(n: int, m: int, rng: np.random.Generator) -> RibdSolution:
    """m independent uniformly random N/2-subsets of the N points."""
    return RibdSolution(n, tuple(Block.from_points(rng.permutation(n)[: n // 2], n) for _ in range(m)))


def _to_arrays(r: RibdSolution) -> tuple[np.ndarray, np.ndarray]:
    words = np.array([b.words for b in r.blocks], dtype=np.uint64).reshape(r.m, n_words(r.n_points))
    return r.membership(), words


def _from_membership(x: np.ndarray) -> RibdSolution:
    n = x.shape[0]
    return RibdSolution(n, tuple(Block.from_points(np.flatnonzero(x[:, k]), n) for k in range(x.shape[1])))


@dataclass
class SearchState:
    solution: RibdSolution
    table: np.ndarray
    value: ObjectiveValue

    @classmethod
    def start(cls, solution: RibdSolution, b) -> "SearchState":
        _, words = _to_arrays(solution)
        table = _kernel.table_from_words(words)
        return cls(solution, table, full_objective(solution, b, table))


def best_admissible_move(state: SearchState, tabu: TabuList, asp: ObjectiveValue,
                         rng: np.random.Generator) -> tuple[Move, ObjectiveValue, bool]:
    """One neighbourhood scan; returns the chosen move, its objective and a forced flag.

    ``forced`` is set when every move was tabu and none beat ``asp``; the best
    tabu move is returned then (a warning is logged).
    """
    sol = state.solution
    b = state.value.bound
    x, _ = _to_arrays(sol)
    cls, u, w, new_key, forced = _kernel.scan_neighborhood(
        x, state.table, key_terms(sol.n_points, b), tabu.counts(sol.m, sol.n_points),
        state.value.key, asp.key, rng)
    if forced:
        log.warning("event=all_moves_tabu action=take_best_tabu_move")
    move = Move(int(cls), int(u), int(w))
    # split the scaled key back into its two integer sums via the move's deltas
    da, dp = delta_objective(sol, state.table, move)
    value = ObjectiveValue(state.value.in_range_sum + da, state.value.penalty_sum + dp, b,
                           state.value.n_pairs)
    assert value.key == new_key
    return move, value, bool(forced)


def ts_run(config: SearchConfig, run_seed: int, run_index: int = 0) -> SearchResult:
    """One independent tabu run seeded by ``run_seed``."""
    start = time.perf_counter()
    n, m = config.n_rows, config.n_cols
    b = config.target_bound
    rng = np.random.default_rng(run_seed)
    initial = random_initial(n, m, rng)
    x, words = _to_arrays(initial)
    target_key = b.numerator * comb(m, 2)
    best_x, best_key, iterations, _, forced, hist = _kernel.tabu_run(
        x, words, key_terms(n, b), target_key, config.nitmax, config.tabu_len, rng,
        config.check_every)
    best = _from_membership(best_x)
    value = full_objective(best, b)
    if value.key != best_key:
        raise RuntimeError(f"run {run_index}: kernel objective {best_key} != recomputed {value.key}")
    scale = comb(m, 2) * b.denominator
    history = tuple((int(it), Fraction(int(k), scale)) for it, k in hist)
    if forced:
        log.warning("event=all_moves_tabu run=%d count=%d", run_index, forced)
    return SearchResult(best, value, value.reached, int(iterations), run_index, run_seed,
                        time.perf_counter() - start, int(forced), history)


def _run_job(args) -> SearchResult:
    config, run_index = args
    return ts_run(config, config.seed + run_index, run_index)


def _log_result(res: SearchResult) -> None:
    for it, f in res.history:
        log.debug("event=new_fbest run=%d iteration=%d f=%s", res.run_index, it, f)
    log.info("event=run_finished run=%d seed=%d achieved=%d iterations=%d f=%s",
             res.run_index, res.seed, res.achieved, res.iterations, res.best_f.value)


def multi_run(config: SearchConfig) -> Iterator[SearchResult]:
    """Independent runs 0, 1, ... yielded in run order, stopping after the first success.

    With several workers, runs are evaluated ahead of time but still reported
    in order, so the outcome does not depend on the worker count.
    """
    if config.max_runs == 0:
        return
    if config.workers == 1:
        for k in range(config.max_runs):
            log.info("event=run_started run=%d seed=%d", k, config.seed + k)
            res = _run_job((config, k))
            _log_result(res)
            yield res
            if res.achieved:
                return
        return

    window = 4 * config.workers
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        pending = deque()
        next_run = 0
        try:
            while pending or next_run < config.max_runs:
                while next_run < config.max_runs and len(pending) < window:
                    log.info("event=run_started run=%d seed=%d", next_run, config.seed + next_run)
                    pending.append(pool.submit(_run_job, (config, next_run)))
                    next_run += 1
                res = pending.popleft().result()
                _log_result(res)
                yield res
                if res.achieved:
                    return
        finally:
            for fut in pending:
                fut.cancel()


@dataclass(frozen=True)
class SearchSummary:
    best: SearchResult | None
    runs: int
    wall_time: float

    @property
    def achieved(self) -> bool:
        return self.best is not None and self.best.achieved


def run_search(config: SearchConfig) -> SearchSummary:
    """Drive :func:`multi_run`; keep the achieved run, else the best one (ties: lowest index)."""
    start = time.perf_counter()
    best = None
    runs = 0
    for res in multi_run(config):
        runs += 1
        if best is None or res.best_f < best.best_f or res.achieved:
            best = res
    return SearchSummary(best, runs, time.perf_counter() - start)
