"""Estimate the per-run success probability of the tabu search for one (N, m).

    python scripts/success_rate.py -N 22 -m 23 --runs 2000 [--tabu-len 7] [--nitmax 300]

Runs are independent, so the probability that a budget of R runs succeeds is
1 - (1 - p)^R; this is printed for a few budgets.
"""
import argparse
import math
import time

from ssdsearch.tabu import SearchConfig, ts_run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-N", "--rows", type=int, required=True)
    ap.add_argument("-m", "--cols", type=int, required=True)
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=7_000_000)
    ap.add_argument("--nitmax", type=int, default=300)
    ap.add_argument("--tabu-len", type=int, default=7)
    ap.add_argument("--budgets", type=int, nargs="*", default=[10, 100, 1000])
    args = ap.parse_args()

    cfg = SearchConfig(args.rows, args.cols, nitmax=args.nitmax, tabu_len=args.tabu_len)
    t = time.perf_counter()
    hits = iters = 0
    for k in range(args.runs):
        res = ts_run(cfg, args.seed + k, k)
        hits += res.achieved
        iters += res.iterations
    dt = time.perf_counter() - t
    p = hits / args.runs
    se = math.sqrt(p * (1 - p) / args.runs)
    print(f"N={args.rows} m={args.cols} M={args.tabu_len} nitmax={args.nitmax}: "
          f"{hits}/{args.runs} achieved, p={p:.4f} +- {se:.4f}, "
          f"{iters / args.runs:.0f} iterations/run, {1000 * dt / args.runs:.1f} ms/run")
    for r in args.budgets:
        print(f"  P(success within {r} runs) = {1 - (1 - p) ** r:.3f}")


if __name__ == "__main__":
    main()
