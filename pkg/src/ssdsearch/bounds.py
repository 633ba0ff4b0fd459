"""Exact E(s^2) lower bounds and the minimax sufficiency check.

Everything is integer or :class:`fractions.Fraction` arithmetic; no floats
are involved anywhere on the path from (N, m) to the bound.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction


class TheoremViolationError(ArithmeticError):
    """The (N, m) pair does not admit exactly the shift parameter q the bound relies on."""


class Branch(enum.Enum):
    N0_CASE1 = "N0_case1"
    N0_CASE2 = "N0_case2"
    N0_CASE3 = "N0_case3"
    N2_EVENQ_CASE1 = "N2_evenq_case1"
    N2_EVENQ_CASE2 = "N2_evenq_case2"
    N2_EVENQ_CASE3 = "N2_evenq_case3"
    N2_ODDQ_CASE1 = "N2_oddq_case1"
    N2_ODDQ_CASE2 = "N2_oddq_case2"
    N2_ODDQ_CASE3 = "N2_oddq_case3"


class Verdict(enum.Enum):
    MINIMAX_OPTIMAL = "MinimaxOptimal"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BoundResult:
    n_rows: int
    n_cols: int
    q: int
    g: int
    branch: Branch
    bound: Fraction
    # m(m-1) * h, only for N = 2 (mod 4)
    h_scaled: int | None = None
    # q sat on the edge of the shift window; both edge candidates agree
    boundary: bool = False

    @property
    def h(self) -> Fraction | None:
        if self.h_scaled is None:
            return None
        return Fraction(self.h_scaled, self.n_cols * (self.n_cols - 1))

    @property
    def shift(self) -> int:
        return self.n_cols - self.q * (self.n_rows - 1)


def floor_plus(x) -> int:
    return max(0, math.floor(Fraction(x)))


def ceil_plus(x) -> int:
    return max(0, math.ceil(Fraction(x)))


def _check_domain(n: int, m: int) -> None:
    if n < 8 or n % 2:
        raise ValueError(f"N must be even and at least 8, got {n}")
    if m <= n - 1:
        raise ValueError(f"bound needs m > N - 1, got N={n}, m={m}")


def q_candidates(n: int, m: int) -> tuple[list[int], list[int]]:
    """Shift parameters with m + q = 2 (mod 4), split by window position.

    Returns ``(inside, edge)``: q with |m - q(N-1)| < 2N - 2, and q sitting
    exactly on |m - q(N-1)| = 2N - 2.
    """
    inside, edge = [], []
    lim = 2 * n - 2
    # q beyond (m + 2N) / (N - 1) pushes m - q(N-1) under -(2N-2)
    for q in range(0, (m + lim) // (n - 1) + 2):
        if (m + q) % 4 != 2:
            continue
        d = abs(m - q * (n - 1))
        if d < lim:
            inside.append(q)
        elif d == lim:
            edge.append(q)
    return inside, edge


def find_q(n: int, m: int) -> int:
    """The unique q >= 0 with |m - q(N-1)| < 2N - 2 and m + q = 2 (mod 4).

    When m is an even multiple of N - 1 in the right residue class no q is
    strictly inside the window; the two edge candidates then give the same
    bound (checked in :func:`lower_bound`) and the smaller one is returned.
    """
    _check_domain(n, m)
    inside, edge = q_candidates(n, m)
    if len(inside) == 1:
        return inside[0]
    if not inside and len(edge) == 2:
        return edge[0]
    raise TheoremViolationError(
        f"N={n}, m={m}: {len(inside)} interior and {len(edge)} edge candidates for q")


def _evaluate(n: int, m: int, q: int) -> BoundResult:
    mm = m * (m - 1)
    g = (m + q) ** 2 * n - q * q * n * n - m * n * n
    d = abs(m - q * (n - 1))
    if d == n - 1:
        raise TheoremViolationError(f"N={n}, m={m}, q={q}: |m - q(N-1)| = N - 1 is not covered")
    near = d < n - 1

    if n % 4 == 0:
        if near:
            branch, num = Branch.N0_CASE1, g + 2 * n * n - 4 * n
        elif d <= 3 * n // 2 - 2:
            branch, num = Branch.N0_CASE2, g - 2 * n * n + 4 * n + 4 * n * d
        else:
            branch, num = Branch.N0_CASE3, g + 4 * n * n - 4 * n
        return BoundResult(n, m, q, g, branch, Fraction(num, mm))

    if q % 2 == 0:
        if near:
            branch, h = Branch.N2_EVENQ_CASE1, g + 2 * n * n - 4 * n + 8
        elif d <= 3 * n // 2 - 3:
            branch, h = Branch.N2_EVENQ_CASE2, g - 2 * n * n + 20 * n + (4 * n - 8) * d - 24
        else:
            branch, h = Branch.N2_EVENQ_CASE3, g + 4 * n * n - 4 * n
    else:
        if near:
            branch, h = Branch.N2_ODDQ_CASE1, g + 2 * n * n - 4 * n
        elif d <= 3 * n // 2 - 1:
            branch, h = Branch.N2_ODDQ_CASE2, g - 2 * n * n + 4 * n + 4 * n * d
        else:
            branch, h = Branch.N2_ODDQ_CASE3, g + 4 * n * n - 12 * n + 8 * d + 8
    # h is carried as m(m-1)h, so m(m-1)(h - 4) is the integer h - 4m(m-1)
    excess = ceil_plus(Fraction(h - 4 * mm, 64))
    return BoundResult(n, m, q, g, branch, Fraction(4 * mm + 64 * excess, mm), h_scaled=h)


def lower_bound(n: int, m: int) -> BoundResult:
    """Lower bound b(N, m) on E(s^2) for an N-row, m-column two-level design."""
    _check_domain(n, m)
    inside, edge = q_candidates(n, m)
    if len(inside) == 1:
        return _evaluate(n, m, inside[0])
    if not inside and len(edge) == 2:
        first, second = (_evaluate(n, m, q) for q in edge)
        if first.bound != second.bound:
            raise TheoremViolationError(
                f"N={n}, m={m}: edge candidates q={edge} disagree "
                f"({first.bound} vs {second.bound})")
        return BoundResult(first.n_rows, first.n_cols, first.q, first.g, first.branch,
                           first.bound, first.h_scaled, boundary=True)
    raise TheoremViolationError(
        f"N={n}, m={m}: {len(inside)} interior and {len(edge)} edge candidates for q")


def nguyen_tang_bound(n: int, m: int) -> Fraction:
    """The classical bound N^2 (m - N + 1) / ((m - 1)(N - 1))."""
    if m <= n - 1:
        raise ValueError(f"bound needs m > N - 1, got N={n}, m={m}")
    return Fraction(n * n * (m - n + 1), (m - 1) * (n - 1))


def minimax_verdict(n: int, m: int, e_s2, bound, s_max: int) -> Verdict:
    """Sufficient condition only: an E(s^2)-optimal design with small s_max is minimax-optimal.

    Never answers "not optimal"; failing the hypotheses is just inconclusive.
    """
    if s_max < 0 or s_max % 2:
        raise ValueError(f"s_max must be a nonnegative even integer, got {s_max}")
    if Fraction(e_s2) != Fraction(bound):
        return Verdict.INCONCLUSIVE
    if n % 4 == 0 and s_max == 4:
        return Verdict.MINIMAX_OPTIMAL
    if n % 4 == 2 and s_max in (2, 6):
        return Verdict.MINIMAX_OPTIMAL
    return Verdict.INCONCLUSIVE
