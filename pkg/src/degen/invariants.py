"""Numerical invariants of a degeneration: branch-curve statistics and Chern numbers.

After regenerating a degeneration with ``n`` planes and ``L`` lines, the
branch curve has degree ``m = 2L`` and carries cusps, nodes and branch points
whose counts decompose as sums of local contributions over the singular
points, plus four nodes per parasitic (disjoint) line pair.  The Chern
numbers of the Galois cover then come from the classical formulas

    c1^2 = n!/4 * (m - 6)^2
    c2   = n! * (3 - m + d/4 + mu/2 + rho/6)
    chi  = (c1^2 - 2 c2) / 3

where ``mu`` counts cusps/3 contributions, ``d`` nodes and ``rho`` branch
points in the normalisation used throughout the table (all values are then
reported as multiples of 6! for degree-6 degenerations).

``fit_contributions`` re-derives the per-kind local contributions from a set
of case summaries by exact linear regression; it exists so the frozen table
below is checked against data rather than trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import PlanarComplex

# (kind, multiplicity) -> (mu, d, rho)
CONTRIBUTIONS: dict[tuple[str, int], tuple[int, int, int]] = {
    ("outer", 1): (1, 0, 0),
    ("outer", 2): (1, 0, 3),
    ("outer", 3): (2, 4, 6),
    ("outer", 4): (3, 12, 9),
    ("outer", 5): (4, 24, 12),
    ("inner", 3): (4, 0, 6),
    ("inner", 4): (4, 4, 12),
    ("inner", 5): (5, 12, 18),
    ("inner", 6): (6, 24, 24),
}

PARASITIC_NODES = 4  # nodes per disjoint line pair


class InvariantError(ValueError):
    """Raised on arithmetic inconsistencies or out-of-range vertex kinds."""


@dataclass(frozen=True)
class BranchStats:
    n: int  # planes
    m: int  # branch curve degree, 2L
    mu: int
    d: int
    rho: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.n, self.m, self.mu, self.d, self.rho)


@dataclass(frozen=True)
class ChernData:
    c1_sq: int
    c2: int
    chi: Fraction
    # The same values as exact multiples of n!.
    c1_sq_coeff: Fraction
    c2_coeff: Fraction
    chi_coeff: Fraction


@dataclass(frozen=True)
class CaseSummary:
    """The data a fitted regression sees for one case: no geometry, only counts."""

    vertex_counts: tuple[tuple[tuple[str, int], int], ...]  # ((kind, k), count)
    parasitic: int
    mu: int
    d: int
    rho: int


def local_contribution(kind: str, multiplicity: int) -> tuple[int, int, int]:
    try:
        return CONTRIBUTIONS[(kind, multiplicity)]
    except KeyError:
        raise InvariantError(
            f"no catalogued contribution for {kind} {multiplicity}-points"
        ) from None


def branch_stats(complex_: PlanarComplex) -> BranchStats:
    n = len(complex_.triangles)
    m = 2 * len(complex_.line_numbering)
    mu = d = rho = 0
    for pt in complex_.classify_vertices():
        cmu, cd, crho = local_contribution(pt.kind, pt.multiplicity)
        mu += cmu
        d += cd
        rho += crho
    d += PARASITIC_NODES * len(complex_.disjoint_line_pairs())
    return BranchStats(n, m, mu, d, rho)


def case_summary(complex_: PlanarComplex) -> CaseSummary:
    counts: dict[tuple[str, int], int] = {}
    for pt in complex_.classify_vertices():
        key = (pt.kind, pt.multiplicity)
        counts[key] = counts.get(key, 0) + 1
    stats = branch_stats(complex_)
    return CaseSummary(
        tuple(sorted(counts.items())),
        len(complex_.disjoint_line_pairs()),
        stats.mu,
        stats.d,
        stats.rho,
    )


def chern(stats: BranchStats) -> ChernData:
    nf = math.factorial(stats.n)
    c1 = Fraction(nf, 4) * (stats.m - 6) ** 2
    c2 = nf * (
        3 - stats.m + Fraction(stats.d, 4) + Fraction(stats.mu, 2) + Fraction(stats.rho, 6)
    )
    if c1.denominator != 1 or c2.denominator != 1:
        raise InvariantError(f"non-integral Chern numbers: c1^2={c1}, c2={c2}")
    chi = Fraction(c1 - 2 * c2, 3)
    return ChernData(
        int(c1),
        int(c2),
        chi,
        Fraction(int(c1), nf),
        Fraction(int(c2), nf),
        chi / nf,
    )


class FitInconsistentError(InvariantError):
    """The summaries admit no single contribution table."""

    def __init__(self, report: list[str]):
        super().__init__("; ".join(report))
        self.report = report


def fit_contributions(
    summaries: Sequence[CaseSummary],
) -> dict[tuple[str, int], tuple[Fraction, Fraction, Fraction]]:
    """Solve for per-kind (mu, d, rho) contributions by exact linear algebra.

    Parasitic pairs are assumed to contribute to ``d`` only, at the fixed
    rate ``PARASITIC_NODES``; everything else is solved for.  Raises
    ``FitInconsistentError`` when the system is contradictory and
    ``InvariantError`` when some present kind is underdetermined.
    """
    kinds = sorted({k for s in summaries for k, _count in s.vertex_counts})
    if not kinds:
        raise InvariantError("no vertex data to fit")
    col = {k: i for i, k in enumerate(kinds)}
    solved: list[list[Fraction]] = []
    for comp in range(3):
        rows: list[list[Fraction]] = []
        for s in summaries:
            row = [Fraction(0)] * len(kinds)
            for k, count in s.vertex_counts:
                row[col[k]] += count
            target = (s.mu, s.d, s.rho)[comp]
            if comp == 1:
                target -= PARASITIC_NODES * s.parasitic
            rows.append(row + [Fraction(target)])
        solved.append(_solve_exact(rows, len(kinds), comp))
    return {
        k: (solved[0][col[k]], solved[1][col[k]], solved[2][col[k]])
        for k in kinds
    }


def _solve_exact(rows: list[list[Fraction]], ncols: int, comp: int) -> list[Fraction]:
    component = ("mu", "d", "rho")[comp]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    bad = [i for i in range(r, len(rows)) if rows[i][ncols] != 0]
    if bad:
        raise FitInconsistentError(
            [f"{component}: residual {rows[i][ncols]} in summary row {i}" for i in bad]
        )
    if len(pivots) < ncols:
        raise InvariantError(f"{component}: system is underdetermined")
    out = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        out[c] = rows[i][ncols]
    return out


def contributions_as_fractions() -> dict[tuple[str, int], tuple[Fraction, Fraction, Fraction]]:
    return {
        k: tuple(Fraction(x) for x in v)  # type: ignore[return-value]
        for k, v in CONTRIBUTIONS.items()
    }
