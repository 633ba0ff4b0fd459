"""Success counts for a range of tabu list lengths at fixed nitmax.

    python scripts/tabu_length_sweep.py -N 22 -m 22 --lengths 4 5 6 7 8 9 --runs 400
"""
import argparse

from ssdsearch.tabu import SearchConfig, ts_run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-N", "--rows", type=int, default=22)
    ap.add_argument("-m", "--cols", type=int, default=22)
    ap.add_argument("--lengths", type=int, nargs="+", default=[4, 5, 6, 7, 8, 9, 10])
    ap.add_argument("--nitmax", type=int, default=300)
    ap.add_argument("--runs", type=int, default=400)
    ap.add_argument("--seed", type=int, default=5_000_000)
    args = ap.parse_args()

    for length in args.lengths:
        cfg = SearchConfig(args.rows, args.cols, nitmax=args.nitmax, tabu_len=length)
        hits = sum(ts_run(cfg, args.seed + k, k).achieved for k in range(args.runs))
        print(f"M={length:2d}: {hits}/{args.runs} runs reached the bound")


if __name__ == "__main__":
    main()
