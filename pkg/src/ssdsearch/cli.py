"""Command-line entry point: ``ssdsearch {search,verify,bound,convert}``.

Exit codes: 0 success (verified optimal / search achieved), 1 usage or parse
error, 2 verification negative, 3 search exhausted without reaching the bound.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bounds import TheoremViolationError, lower_bound
from .equivalence import DesignValidationError, ribd_to_ssd, ssd_to_ribd
from .io import (DesignParseError, build_report, decimal5, format_design, format_ribd,
                 read_design, read_ribd, render_report)
from .tabu import SearchConfig, default_workers, run_search

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_EXHAUSTED = 0, 1, 2, 3

log = logging.getLogger("ssdsearch")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def cmd_bound(args) -> int:
    try:
        res = lower_bound(args.rows, args.cols)
    except (ValueError, TheoremViolationError) as exc:
        raise UsageError(str(exc)) from None
    mm = args.cols * (args.cols - 1)
    data = {
        "N": args.rows,
        "m": args.cols,
        "bound": str(res.bound),
        "bound_over_m(m-1)": f"{res.bound * mm}/{mm}",
        "bound_decimal": decimal5(res.bound),
        "q": res.q,
        "g": res.g,
        "branch": res.branch.value,
        "edge_q": res.boundary,
    }
    if res.h_scaled is not None:
        data["h"] = f"{res.h_scaled}/{mm}"
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        for k, v in data.items():
            print(f"{k}: {str(v).lower() if isinstance(v, bool) else v}")
    return EXIT_OK


def cmd_verify(args) -> int:
    d, _ = read_design(_read(args.path))
    report = build_report(d, include_gram=args.gram)
    sys.stdout.write(render_report(report, args.format))
    return EXIT_OK if report.verified else EXIT_NEGATIVE


def cmd_convert(args) -> int:
    text = _read(args.path)
    if args.to == "ribd":
        d, _ = read_design(text)
        try:
            out = format_ribd(ssd_to_ribd(d))
        except DesignValidationError as exc:
            raise DesignParseError(str(exc)) from None
    else:
        r, _ = read_ribd(text)
        out = format_design(ribd_to_ssd(r))
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        kw = dict(seed=args.seed, workers=args.workers, check_every=args.check_every)
        for name in ("nitmax", "tabu_len"):
            if getattr(args, name) is not None:
                kw[name] = getattr(args, name)
        if args.runs is not None:
            kw["max_runs"] = args.runs
        if args.hard_preset:
            config = SearchConfig.hard_preset(args.rows, args.cols, **kw)
        else:
            config = SearchConfig(args.rows, args.cols, **kw)
    except (ValueError, OverflowError, TheoremViolationError) as exc:
        raise UsageError(str(exc)) from None

    summary = run_search(config)
    log.info("event=search_finished runs=%d achieved=%d wall_time=%.3f",
             summary.runs, summary.achieved, summary.wall_time)
    if summary.best is None:
        print("no runs performed", file=sys.stderr)
        return EXIT_EXHAUSTED
    best = summary.best
    d = ribd_to_ssd(best.best_solution)
    provenance = {
        "seed": config.seed,
        "run_index": best.run_index,
        "run_seed": best.seed,
        "runs": summary.runs,
        "iterations": best.iterations,
        "nitmax": config.nitmax,
        "tabu_len": config.tabu_len,
        "objective": str(best.best_f.value),
        "search_achieved": best.achieved,
    }
    report = build_report(d, provenance)
    rendered = render_report(report, args.format)
    header = {"seed": config.seed, "run_index": best.run_index}
    if args.out:
        prefix = Path(args.out)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        Path(f"{prefix}.ssd.txt").write_text(format_design(d, header))
        Path(f"{prefix}.ribd.txt").write_text(format_ribd(best.best_solution, header))
        suffix = "json" if args.format == "json" else "txt"
        Path(f"{prefix}.report.{suffix}").write_text(rendered)
    else:
        sys.stdout.write(format_design(d, header))
    sys.stdout.write(rendered)
    return EXIT_OK if best.achieved else EXIT_EXHAUSTED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ssdsearch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="progress events on stderr (-v runs, -vv improvements)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="print the E(s^2) lower bound b(N, m)")
    p.add_argument("--rows", "-N", type=int, required=True)
    p.add_argument("--cols", "-m", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="check a design file against the bound")
    p.add_argument("path")
    p.add_argument("--gram", action="store_true", help="include the Gram matrix")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="design matrix <-> block list")
    p.add_argument("path")
    p.add_argument("--to", choices=("ribd", "ssd"), required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("search", help="tabu search for a design reaching b(N, m)")
    p.add_argument("--rows", "-N", type=int, required=True)
    p.add_argument("--cols", "-m", type=int, required=True)
    p.add_argument("--nitmax", type=int, help="iterations without improvement before a run stops")
    p.add_argument("--tabu-len", type=int, help="tabu list length M")
    p.add_argument("--runs", type=int, help="maximum number of independent runs")
    p.add_argument("--workers", type=int, default=default_workers(),
                   help="worker processes (default from $SSDSEARCH_WORKERS, else 1)")
    p.add_argument("--seed", type=int, default=0, help="run k uses seed + k")
    p.add_argument("--out", help="write PREFIX.ssd.txt, PREFIX.ribd.txt and PREFIX.report.*")
    p.add_argument("--hard-preset", action="store_true",
                   help="nitmax 450 and up to 4,000,000 runs unless overridden")
    p.add_argument("--check-every", type=int, default=0, help=argparse.SUPPRESS)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO,
                            stream=sys.stderr, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, DesignParseError) as exc:
        print(f"ssdsearch {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
