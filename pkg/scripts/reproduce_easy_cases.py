"""Search the four quick cases and report how many runs each needed.

    python scripts/reproduce_easy_cases.py [--budget-factor 20] [--seed 0]
"""
import argparse
import time

from ssdsearch.io import build_report
from ssdsearch.equivalence import ribd_to_ssd
from ssdsearch.tabu import SearchConfig, run_search

# reference run counts; the budget is a multiple of these
REFERENCE_RUNS = {(20, 21): 19, (22, 22): 6, (22, 23): 7, (24, 24): 509}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget-factor", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    print(f"{'N':>3} {'m':>3} {'ref':>5} {'budget':>7} {'runs':>6} {'achieved':>8} {'verified':>8} {'secs':>7}")
    for (n, m), ref in REFERENCE_RUNS.items():
        budget = args.budget_factor * ref
        t = time.perf_counter()
        s = run_search(SearchConfig(n, m, max_runs=budget, seed=args.seed, workers=args.workers))
        verified = s.achieved and build_report(ribd_to_ssd(s.best.best_solution)).verified
        print(f"{n:3d} {m:3d} {ref:5d} {budget:7d} {s.runs:6d} {str(s.achieved):>8} "
              f"{str(verified):>8} {time.perf_counter() - t:7.1f}")


if __name__ == "__main__":
    main()
