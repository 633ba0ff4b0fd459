"""Print b(N, m), the classical bound and the branch used, over a grid.

    python scripts/bound_table.py --n 16 18 20 22 24 --m-max 30
"""
import argparse

from ssdsearch.bounds import lower_bound, nguyen_tang_bound
from ssdsearch.io import decimal5


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[16, 18, 20, 22, 24])
    ap.add_argument("--m-max", type=int, default=30)
    args = ap.parse_args()

    print(f"{'N':>3} {'m':>3} {'b(N,m)':>9} {'classical':>9} {'q':>3} {'branch':<16} edge")
    for n in args.n:
        for m in range(n, args.m_max + 1):
            res = lower_bound(n, m)
            print(f"{n:3d} {m:3d} {decimal5(res.bound):>9} {decimal5(nguyen_tang_bound(n, m)):>9} "
                  f"{res.q:3d} {res.branch.value:<16} {'yes' if res.boundary else ''}")


if __name__ == "__main__":
    main()
