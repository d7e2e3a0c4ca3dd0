"""Slow, independent reference computations the fast code is checked against."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from nonradon.group import Q1, Ball, Region, ball_sum, dist
from nonradon.index import IndexElement, Violation


def grid(den: int) -> list[Q1]:
    return [Q1(Fraction(k, den)) for k in range(den)]


def ball_sum_by_points(b1: Ball, b2: Ball, den: int) -> set[Q1]:
    """Points of the ``den``-grid that are sums of points of the two balls.

    Summands are drawn from the grid twice as fine: when ``den`` is a
    multiple of twice every denominator involved, each grid point strictly
    inside the sum splits into two strictly interior summands there.
    """
    fine = grid(2 * den)
    in1 = [p for p in fine if p in b1]
    in2 = [p for p in fine if p in b2]
    return {z for z in (u + v for u in in1 for v in in2) if (z.value * den).denominator == 1}


def validate_by_regions(a: IndexElement) -> Violation | None:
    """The defining clauses checked with region algebra only, same scan order."""
    n = a.n
    regions = [b.region() for b in a.balls]
    for i in range(n):
        for j in range(i + 1, n):
            if not (regions[i] & regions[j]).is_empty():
                return Violation("disjointness", (i, j))
    whole = Region.union_of(regions)
    if whole.covers_circle():
        return Violation("properness", ())
    for i in range(n):
        if a.points[i] not in a.balls[i]:
            return Violation("point-membership", (i,))
    for i in range(n):
        for j in range(n):
            meet = ball_sum(a.balls[i], a.balls[j]) & whole
            if meet.is_empty():
                continue
            s = a.points[i] + a.points[j]
            ks = [k for k in range(n) if a.points[k] == s]
            if not ks or not meet.is_subset(regions[ks[0]]):
                return Violation("coherence", (i, j))
    return None


def pierce_by_subsets(X: list[IndexElement], max_size: int = 4) -> int | None:
    """Smallest k such that some k endpoints of complement arcs escape every element."""
    if not X:
        return 0
    cands: set[Fraction] = set()
    for a in X:
        comp = a.region.complement()
        for s, e in comp.arcs():
            cands |= {s, e}
        cands |= set(comp.boundary_points())
    pts = [Q1(c) for c in sorted(cands)]
    outside = [{p for p in pts if p not in a.region} for a in X]
    for k in range(1, max_size + 1):
        for u in combinations(pts, k):
            if all(o.intersection(u) for o in outside):
                return k
    return None


def determinantal_divisors(B: list[list[int]]) -> list[int]:
    """Invariant factors from gcds of k x k minors (small matrices only)."""
    m, n = len(B), len(B[0])

    def det(M):
        if len(M) == 1:
            return M[0][0]
        return sum((-1) ** c * M[0][c] * det([row[:c] + row[c + 1:] for row in M[1:]]) for c in range(len(M)))

    d_prev, out = 1, []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det([[B[r][c] for c in cols] for r in rows]))
        if g == 0:
            out += [0] * (min(m, n) - k + 1)
            break
        out.append(g // d_prev)
        d_prev = g
    return out


def common_denominator(*values: Fraction) -> int:
    return lcm(*(Fraction(v).denominator for v in values))


def nearest_distance(x: Q1, centers: list[Q1]) -> Fraction:
    return min(dist(x, c) for c in centers)
