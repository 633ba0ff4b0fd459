"""Text formats for designs, block lists and verification reports.

Design file::

    # N: 18            optional "# key: value" header lines
    # m: 23
    -1  1  1 -1 ...    N rows of m tokens, each "1" or "-1"

Block-list file (one line per parallel class, points 1-based)::

    # N: 6
    # m: 8
    1: {2,5,6} {1,3,4}

The second block of a line may be omitted; if given it must be the complement.

Reports are "key: value" lines in a fixed order (see :func:`render_report`)
or the same keys as a JSON object.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

import numpy as np

from .bitset import Block, complement
from .bounds import Verdict, lower_bound, minimax_verdict
from .equivalence import RibdSolution, SsdMatrix, Violation, validate_strict
from .objective import gram_summary


class DesignParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", token {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


def decimal5(x) -> str:
    """Round-half-even to five decimals, exactly."""
    x = Fraction(x)
    scaled = round(x * 100_000)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 100_000)
    return f"{sign}{whole}.{frac:05d}"


def _split_header(text: str) -> tuple[dict[str, str], list[tuple[int, str]]]:
    header: dict[str, str] = {}
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                header[key.strip()] = value.strip()
            continue
        body.append((lineno, line))
    return header, body


def _declared(header: dict[str, str], key: str) -> int | None:
    if key not in header:
        return None
    try:
        return int(header[key])
    except ValueError:
        raise DesignParseError(f"header {key!r} is not an integer: {header[key]!r}") from None


def read_design(text: str) -> tuple[SsdMatrix, dict[str, str]]:
    header, body = _split_header(text)
    if not body:
        raise DesignParseError("no design rows")
    rows = []
    width = None
    for row_no, (lineno, line) in enumerate(body, 1):
        tokens = line.split()
        values = []
        for col, tok in enumerate(tokens, 1):
            if tok == "1":
                values.append(1)
            elif tok == "-1":
                values.append(-1)
            else:
                raise DesignParseError(f"row {row_no}: expected 1 or -1, got {tok!r}", lineno, col)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise DesignParseError(f"row {row_no} has {len(values)} tokens, expected {width}", lineno)
        rows.append(values)
    d = SsdMatrix(np.array(rows, dtype=np.int8))
    for key, actual in (("N", d.n_rows), ("m", d.n_cols)):
        declared = _declared(header, key)
        if declared is not None and declared != actual:
            raise DesignParseError(f"header declares {key}={declared} but the body has {actual}")
    return d, header


def parse_design(text: str) -> SsdMatrix:
    return read_design(text)[0]


def format_design(d: SsdMatrix, header: dict[str, Any] | None = None) -> str:
    head = {"N": d.n_rows, "m": d.n_cols, **(header or {})}
    lines = [f"# {k}: {v}" for k, v in head.items()]
    lines += [" ".join(f"{int(v):2d}" for v in row) for row in d.entries]
    return "\n".join(lines) + "\n"


def _format_points(block: Block) -> str:
    return "{" + ",".join(str(p + 1) for p in block.points()) + "}"


def format_ribd(r: RibdSolution, header: dict[str, Any] | None = None) -> str:
    head = {"N": r.n_points, "m": r.m, **(header or {})}
    lines = [f"# {k}: {v}" for k, v in head.items()]
    lines += [f"{k + 1}: {_format_points(b)} {_format_points(complement(b))}"
              for k, b in enumerate(r.blocks)]
    return "\n".join(lines) + "\n"


_RIBD_LINE = re.compile(r"^(\d+)\s*:\s*\{([^}]*)\}(?:\s*\{([^}]*)\})?$")


def _points(field_text: str, n: int, lineno: int) -> list[int]:
    out = []
    for tok in filter(None, (t.strip() for t in field_text.split(","))):
        if not tok.isdigit() or not 1 <= int(tok) <= n:
            raise DesignParseError(f"bad point {tok!r} (points are 1..{n})", lineno)
        out.append(int(tok) - 1)
    if len(set(out)) != len(out):
        raise DesignParseError("repeated point in block", lineno)
    return out


def read_ribd(text: str) -> tuple[RibdSolution, dict[str, str]]:
    header, body = _split_header(text)
    n = _declared(header, "N")
    if n is None:
        raise DesignParseError("block-list file needs an '# N: ...' header")
    if n < 2 or n % 2:
        raise DesignParseError(f"N must be a positive even number, got {n}")
    blocks = []
    for lineno, line in body:
        match = _RIBD_LINE.match(line)
        if not match:
            raise DesignParseError(f"cannot read block line {line!r}", lineno)
        if int(match.group(1)) != len(blocks) + 1:
            raise DesignParseError(f"expected class {len(blocks) + 1}, got {match.group(1)}", lineno)
        first = _points(match.group(2), n, lineno)
        if len(first) != n // 2:
            raise DesignParseError(f"block has {len(first)} points, expected {n // 2}", lineno)
        block = Block.from_points(first, n)
        if match.group(3) is not None:
            second = Block.from_points(_points(match.group(3), n, lineno), n)
            if second != complement(block):
                raise DesignParseError("second block is not the complement of the first", lineno)
        blocks.append(block)
    if not blocks:
        raise DesignParseError("no blocks")
    declared_m = _declared(header, "m")
    if declared_m is not None and declared_m != len(blocks):
        raise DesignParseError(f"header declares m={declared_m} but {len(blocks)} blocks follow")
    return RibdSolution(n, tuple(blocks)), header


@dataclass
class Report:
    n_rows: int
    n_cols: int
    e_s2: Fraction
    s_max: int
    f_smax: int
    bound: Fraction | None
    achieves_bound: bool
    verdict: Verdict
    violations: list[Violation]
    vacuous: bool = False
    gram: np.ndarray | None = None
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.achieves_bound and self.verdict is Verdict.MINIMAX_OPTIMAL and not self.violations

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "N": self.n_rows,
            "m": self.n_cols,
            "e_s2": str(self.e_s2),
            "e_s2_decimal": decimal5(self.e_s2),
            "s_max": self.s_max,
            "f_smax": self.f_smax,
            "bound": str(self.bound) if self.bound is not None else None,
            "bound_decimal": decimal5(self.bound) if self.bound is not None else None,
            "achieves_bound": self.achieves_bound,
            "minimax_verdict": self.verdict.value,
            "strict_violations": [str(v) for v in self.violations],
        }
        if self.vacuous:
            out["vacuous"] = True
        out.update(self.provenance)
        if self.gram is not None:
            out["gram"] = self.gram.tolist()
        return out


def build_report(d: SsdMatrix, provenance: dict[str, Any] | None = None,
                 include_gram: bool = False) -> Report:
    summary = gram_summary(d)
    n, m = d.n_rows, d.n_cols
    bound = None
    if n >= 8 and n % 2 == 0 and m > n - 1:
        bound = lower_bound(n, m).bound
    achieves = bound is not None and not summary.vacuous and summary.e_s2 == bound
    verdict = Verdict.INCONCLUSIVE
    if bound is not None and summary.s_max % 2 == 0:
        verdict = minimax_verdict(n, m, summary.e_s2, bound, summary.s_max)
    return Report(n, m, summary.e_s2, summary.s_max, summary.f_smax, bound, achieves, verdict,
                  validate_strict(d), summary.vacuous, summary.gram if include_gram else None,
                  dict(provenance or {}))


def _text_value(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return " ".join(map(str, value)) if value else "none"
    return str(value)


def render_report(report: Report, fmt: str = "text") -> str:
    data = report.as_dict()
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    gram = data.pop("gram", None)
    lines = [f"{k}: {_text_value(v)}" for k, v in data.items()]
    if gram is not None:
        lines += [f"gram_row_{i + 1}: {' '.join(map(str, row))}" for i, row in enumerate(gram)]
    return "\n".join(lines) + "\n"


def known_design_sizes() -> list[tuple[int, int]]:
    """(N, m) of every design shipped with the package."""
    names = [p.name for p in resources.files("ssdsearch.designs").iterdir()]
    sizes = []
    for name in names:
        match = re.fullmatch(r"ssd_N(\d+)_m(\d+)\.txt", name)
        if match:
            sizes.append((int(match.group(1)), int(match.group(2))))
    return sorted(sizes)


def known_design_text(n: int, m: int) -> str:
    return resources.files("ssdsearch.designs").joinpath(f"ssd_N{n}_m{m}.txt").read_text()


def load_known_design(n: int, m: int) -> tuple[SsdMatrix, dict[str, str], np.ndarray]:
    """A shipped design, its caption header and its recorded Gram matrix."""
    d, header = read_design(known_design_text(n, m))
    gram_text = resources.files("ssdsearch.designs").joinpath(f"ssd_N{n}_m{m}.gram.txt").read_text()
    _, rows = _split_header(gram_text)
    gram = np.array([[int(t) for t in line.split()] for _, line in rows], dtype=np.int64)
    return d, header, gram
