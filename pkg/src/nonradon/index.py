"""Index elements: finite families of disjoint rational arcs with additively coherent points.

An element ``a`` is a list of open balls ``U_1..U_n`` with union ``U`` and a
point ``r_i`` in each ball such that for every pair ``(i, j)`` either
``r_i + r_j = r_k`` with ``(U_i + U_j) & U`` inside ``U_k`` (coherent sum) or
``(U_i + U_j) & U`` is empty (escaping sum).
"""

from __future__ import annotations

import itertools
import threading
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterator, Sequence

from .group import Ball, Q1, Region, dist, format_fraction, parse_fraction


class DegenerateInput(ValueError):
    pass


@dataclass(frozen=True)
class IndexElement:
    balls: tuple[Ball, ...]
    points: tuple[Q1, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "balls", tuple(self.balls))
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.balls) != len(self.points) or not self.balls:
            raise ValueError("an index element needs n >= 1 balls and as many points")
        if any(b.closed for b in self.balls):
            raise ValueError("index element balls must be open")

    @property
    def n(self) -> int:
        return len(self.balls)

    @cached_property
    def region(self) -> Region:
        """The open set U (union of the balls)."""
        return Region.from_open_arcs((b.center.value - b.radius, 2 * b.radius) for b in self.balls)

    @cached_property
    def complement(self) -> Region:
        return self.region.complement()

    def __contains__(self, x: Q1) -> bool:
        return any(x in b for b in self.balls)

    def locate(self, x: Q1) -> int | None:
        """Index of the ball containing ``x``, or None when ``x`` is outside U."""
        for i, b in enumerate(self.balls):
            if x in b:
                return i
        return None

    def key(self) -> tuple:
        """Order-independent identity: the same balls with the same points."""
        return tuple(sorted((b.center, b.radius, p) for b, p in zip(self.balls, self.points)))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "balls": [b.to_json() for b in self.balls],
            "points": [str(p) for p in self.points],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IndexElement":
        balls = tuple(Ball.from_json(b) for b in obj["balls"])
        points = tuple(Q1.parse(p) for p in obj["points"])
        if "n" in obj and obj["n"] != len(balls):
            raise ValueError(f"n={obj['n']} does not match {len(balls)} balls")
        return cls(balls, points)

    def __repr__(self) -> str:
        parts = ", ".join(
            f"arc({b.center},{format_fraction(b.radius)})@{p}" for b, p in zip(self.balls, self.points)
        )
        return f"IndexElement({parts})"


def make_element(rows: Sequence[tuple[str | Fraction, str | Fraction, str | Fraction]]) -> IndexElement:
    """Build an element from ``(center, radius, point)`` triples; strings are parsed as ``p/q``."""

    def fr(v):
        return parse_fraction(v) if isinstance(v, str) else Fraction(v)

    balls = tuple(Ball(Q1(fr(c)), fr(r)) for c, r, _ in rows)
    points = tuple(Q1(fr(p)) for _, _, p in rows)
    return IndexElement(balls, points)


# validation ------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """First failed clause; ``kind`` is one of ``disjointness``, ``properness``,
    ``point-membership`` or ``coherence``. Indices are 0-based."""

    kind: str
    indices: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind} at {self.indices}"


@dataclass(frozen=True)
class Verdict:
    violation: Violation | None
    coherent_distinct: bool = False  # some sum U_i + U_j landed in a ball other than i and j
    escaping: bool = False  # some pair had an empty sum inside U

    @property
    def ok(self) -> bool:
        return self.violation is None


class _Layout:
    """An element rescaled by the common denominator ``L`` of all its data.

    Centres, radii and points become integers mod ``L``, and centres are kept
    sorted so the balls met by an arc are found by bisection.
    """

    def __init__(self, a: IndexElement) -> None:
        L = 1
        for b, p in zip(a.balls, a.points):
            for v in (b.center.value, b.radius, p.value):
                L = lcm(L, v.denominator)
        self.L = L
        self.centers = [int(b.center.value * L) for b in a.balls]
        self.radii = [int(b.radius * L) for b in a.balls]
        self.points = [int(p.value * L) for p in a.points]
        self.order = sorted(range(a.n), key=self.centers.__getitem__)
        self.keys = [self.centers[m] for m in self.order]
        self.max_radius = max(self.radii)

    def dist(self, u: int, v: int) -> int:
        d = (u - v) % self.L
        return min(d, self.L - d)

    def hits(self, c: int, r: int) -> list[int]:
        """Balls met by the open arc of radius ``r`` (any size) around ``c``, ascending."""
        L = self.L
        reach = r + self.max_radius
        if 2 * reach >= L:
            pool = range(len(self.order))
        else:
            pool = _window(self.keys, c - reach, c + reach, L)
        return sorted(
            self.order[t] for t in pool if self.dist(c, self.keys[t]) < r + self.radii[self.order[t]]
        )


def _window(keys: list[int], lo: int, hi: int, L: int) -> list[int]:
    """Positions of sorted keys in [0, L) lying in the (possibly wrapping) interval [lo, hi]."""
    lo %= L
    hi %= L
    if lo <= hi:
        return list(range(bisect_left(keys, lo), bisect_right(keys, hi)))
    return list(range(bisect_left(keys, lo), len(keys))) + list(range(0, bisect_right(keys, hi)))


def validate(a: IndexElement) -> Verdict:
    """Check every defining clause of an index element exactly.

    Scan order: pairwise disjointness (i < j), properness of U, point
    membership (i ascending), then the sum clause over (i, j) with i, then j,
    ascending. A sum ``U_i + U_j`` meets ``U`` only through the balls it
    touches; since the balls are disjoint, ``(U_i + U_j) & U`` lies inside a
    single ``U_k`` exactly when it touches ``U_k`` alone.
    """
    n = a.n
    lay = _Layout(a)
    C, R, P, L = lay.centers, lay.radii, lay.points, lay.L
    for i in range(n):
        for j in lay.hits(C[i], R[i]):
            if j > i:
                return Verdict(Violation("disjointness", (i, j)))
    if 2 * sum(R) >= L and a.region.covers_circle():
        return Verdict(Violation("properness", ()))
    for i in range(n):
        if lay.dist(C[i], P[i]) >= R[i]:
            return Verdict(Violation("point-membership", (i,)))
    where = {p: k for k, p in enumerate(P)}
    coherent_distinct = escaping = False
    for i in range(n):
        for j in range(n):
            hits = lay.hits((C[i] + C[j]) % L, R[i] + R[j])
            if not hits:
                escaping = True
                continue
            k = where.get((P[i] + P[j]) % L)
            if k is None or hits != [k]:
                return Verdict(Violation("coherence", (i, j)))
            if k != i and k != j:
                coherent_distinct = True
    return Verdict(None, coherent_distinct, escaping)


def is_valid(a: IndexElement) -> bool:
    return validate(a).ok


# constructors --------------------------------------------------------------


def from_points(ys: Sequence[Q1]) -> IndexElement:
    """Element with one ball per input point, centred there and using it as its point.

    The radius is a quarter of the smallest gap among the points and their
    pairwise sums, so a sum of two balls can only touch the ball around the
    matching sum point; it is also capped at ``1/(4n)`` so U stays proper.
    """
    ys = list(ys)
    if not ys:
        raise DegenerateInput("need at least one point")
    if len(set(ys)) != len(ys):
        raise DegenerateInput("points must be pairwise distinct")
    n = len(ys)
    pool = set(ys) | {y + z for y in ys for z in ys}
    cap = Fraction(1, 4 * n)
    if len(pool) > 1:
        ordered = sorted(p.value for p in pool)
        gaps = [b - a for a, b in zip(ordered, ordered[1:])]
        gaps.append(ordered[0] + 1 - ordered[-1])
        radius = min(min(gaps) / 4, cap)
    else:
        radius = cap
    return IndexElement(tuple(Ball(y, radius) for y in ys), tuple(ys))


def escape_witness(u: Sequence[Q1]) -> IndexElement:
    """An element whose U contains every point of the finite set ``u``."""
    pts = sorted(set(u))
    return from_points(pts or [Q1(Fraction(0))])


def grid_element(q: int, wide: bool = False) -> IndexElement:
    """The subgroup ``(1/q)Z`` with balls of radius ``1/(4q)``, or ``1/(3q)`` when ``wide``.

    ``1/(3q)`` is the largest radius for which a sum of two balls still
    touches only the ball around the sum of their centres.
    """
    r = Fraction(1, (3 if wide else 4) * q)
    pts = tuple(Q1(Fraction(k, q)) for k in range(q))
    return IndexElement(tuple(Ball(p, r) for p in pts), pts)


def coset_element(q: int, beta: Fraction) -> IndexElement | None:
    """The coset ``beta + (1/q)Z`` (beta off the subgroup); every pairwise sum escapes U."""
    offset = Q1(beta)
    gap = min(dist(offset, Q1(Fraction(k, q))) for k in range(q))
    if gap == 0:
        return None
    r = min(Fraction(1, 4 * q), gap / 4)
    pts = tuple(offset + Q1(Fraction(k, q)) for k in range(q))
    return IndexElement(tuple(Ball(p, r) for p in pts), pts)


# canonical enumeration --------------------------------------------------------


def _cosets_of_height(h: int) -> Iterator[IndexElement]:
    # q + t == h for offsets s/t in (0, 1/q), lowest terms
    for q in range(1, h):
        t = h - q
        for s in range(1, t):
            if gcd(s, t) == 1 and s * q < t:
                el = coset_element(q, Fraction(s, t))
                if el is not None:
                    yield el


def _rationals_up_to(bound: int) -> list[Fraction]:
    return sorted({Fraction(s, t) for t in range(1, bound + 1) for s in range(t)})


def point_sets(max_size: int = 4) -> Iterator[tuple[Fraction, ...]]:
    """Sets of distinct rationals in [0, 1): by denominator bound, then size, then lexicographically."""
    for bound in itertools.count(1):
        pool = _rationals_up_to(bound)
        for size in range(1, max_size + 1):
            for combo in itertools.combinations(pool, size):
                if max(v.denominator for v in combo) == bound:
                    yield combo


class _Enumeration:
    """Lazily extended canonical prefix, shared by all callers.

    Round ``h`` emits the grid ``q = h``, the coset elements of height
    ``q + denominator(beta) = h``, the next ``h`` new elements built by
    :func:`from_points` from :func:`point_sets`, and the wide grid ``q = h``.
    Candidates failing :func:`validate` or equal to an earlier element are
    skipped.
    """

    def __init__(self) -> None:
        self._items: list[IndexElement] = []
        self._seen: set[tuple] = set()
        self._lock = threading.Lock()
        self._point_sets = point_sets()
        self._stream = self._generate()

    def _accept(self, el: IndexElement) -> bool:
        k = el.key()
        if k in self._seen or not validate(el).ok:
            return False
        self._seen.add(k)
        return True

    def _generate(self) -> Iterator[IndexElement]:
        for h in itertools.count(1):
            for el in itertools.chain([grid_element(h)], _cosets_of_height(h)):
                if self._accept(el):
                    yield el
            emitted = 0
            while emitted < h:
                el = from_points([Q1(v) for v in next(self._point_sets)])
                if self._accept(el):
                    emitted += 1
                    yield el
            wide = grid_element(h, wide=True)
            if self._accept(wide):
                yield wide

    def prefix(self, m: int) -> list[IndexElement]:
        with self._lock:
            while len(self._items) < m:
                self._items.append(next(self._stream))
            return self._items[:m]


_ENUMERATION = _Enumeration()


def enumerate_index(m: int) -> list[IndexElement]:
    """The first ``m`` canonical index elements (deterministic, no repeats, all valid)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _ENUMERATION.prefix(m)


def position_of(a: IndexElement, search: int = 100_000) -> int | None:
    """Position of ``a`` in the canonical enumeration, looking at most ``search`` deep."""
    k = a.key()
    step = 256
    m = 0
    while m < search:
        m = min(search, m + step)
        for i, b in enumerate(enumerate_index(m)[m - step if m >= step else 0:], start=max(0, m - step)):
            if b.key() == k:
                return i
        step *= 2
    return None
