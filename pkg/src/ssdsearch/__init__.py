"""Tabu search for E(s^2)- and minimax-optimal two-level supersaturated designs."""
from .bitset import Block, complement, intersect_count, swap_points
from .bounds import BoundResult, lower_bound, minimax_verdict, nguyen_tang_bound
from .equivalence import RibdSolution, SsdMatrix, ribd_to_ssd, ssd_to_ribd, validate_strict
from .objective import full_objective, gram_summary, unweighted_objective
from .tabu import SearchConfig, SearchResult, multi_run, run_search, ts_run

__version__ = "0.1.0"
