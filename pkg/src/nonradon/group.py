"""Exact arithmetic on the circle group T = R/Z and an exact algebra of arcs.

Every quantity is a :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

HALF = Fraction(1, 2)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


class MalformedRational(ValueError):
    """Unparseable rational; ``position`` is the 0-based offset of the first bad character."""

    def __init__(self, message: str, text: str = "", position: int = 0) -> None:
        super().__init__(message)
        self.text = text
        self.position = position


def _bad_offset(text: str) -> int:
    # walk the grammar  ws* -? digits ws* ( / ws* digits )? ws*  and report where it breaks
    i, n = 0, len(text)
    while i < n and text[i].isspace():
        i += 1
    if i < n and text[i] == "-":
        i += 1
    start = i
    while i < n and text[i].isdigit():
        i += 1
    if i == start:
        return i
    while i < n and text[i].isspace():
        i += 1
    if i < n and text[i] == "/":
        i += 1
        while i < n and text[i].isspace():
            i += 1
        start = i
        while i < n and text[i].isdigit():
            i += 1
        if i == start:
            return i
        while i < n and text[i].isspace():
            i += 1
    return i


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction (no decimals, no floats)."""
    if not isinstance(text, str):
        raise MalformedRational(f"expected a string like 'p/q', got {text!r}", str(text), 0)
    m = _RATIONAL_RE.match(text)
    if m is None:
        pos = _bad_offset(text)
        raise MalformedRational(f"malformed rational {text!r} at position {pos}", text, pos)
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        pos = text.index("/") + 1
        raise MalformedRational(f"zero denominator in {text!r} at position {pos}", text, pos)
    return Fraction(int(m.group(1)), den)


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Q1:
    """A point of T with canonical representative in [0, 1)."""

    value: Fraction

    def __post_init__(self) -> None:
        v = Fraction(self.value)
        object.__setattr__(self, "value", v - (v.numerator // v.denominator))

    @classmethod
    def parse(cls, text: str) -> "Q1":
        return cls(parse_fraction(text))

    def __str__(self) -> str:
        return format_fraction(self.value)

    def __repr__(self) -> str:
        return f"Q1({self})"

    def __add__(self, other: "Q1") -> "Q1":
        if not isinstance(other, Q1):
            return NotImplemented
        return Q1(self.value + other.value)

    def __sub__(self, other: "Q1") -> "Q1":
        if not isinstance(other, Q1):
            return NotImplemented
        return Q1(self.value - other.value)

    def __neg__(self) -> "Q1":
        return Q1(-self.value)

    def __mul__(self, k: int) -> "Q1":
        if not isinstance(k, int):
            return NotImplemented
        return Q1(self.value * k)

    __rmul__ = __mul__

    @property
    def denominator(self) -> int:
        return self.value.denominator


ZERO = Q1(Fraction(0))


def q1(p: int | Fraction | str, q: int = 1) -> Q1:
    """Shorthand constructor: ``q1(1, 4)``, ``q1("3/8")``."""
    if isinstance(p, str):
        return Q1.parse(p)
    return Q1(Fraction(p, q))


def q1_add(x: Q1, y: Q1) -> Q1:
    return x + y


def q1_neg(x: Q1) -> Q1:
    return -x


def q1_sub(x: Q1, y: Q1) -> Q1:
    return x + (-y)


def dist(x: Q1, y: Q1) -> Fraction:
    """Invariant arc-length distance, a value in [0, 1/2]."""
    d = abs(x.value - y.value)
    return min(d, 1 - d)


@dataclass(frozen=True)
class Ball:
    """Rational arc ``{x : dist(center, x) < radius}`` (``<=`` when closed)."""

    center: Q1
    radius: Fraction
    closed: bool = False

    def __post_init__(self) -> None:
        r = Fraction(self.radius)
        if r <= 0:
            raise ValueError(f"ball radius must be positive, got {r}")
        if r > HALF:
            raise ValueError(f"ball radius must be at most 1/2, got {r}")
        object.__setattr__(self, "radius", r)

    def __contains__(self, x: Q1) -> bool:
        d = dist(self.center, x)
        return d <= self.radius if self.closed else d < self.radius

    def region(self) -> "Region":
        if self.closed:
            return Region.closed_arc(self.center.value - self.radius, 2 * self.radius)
        return Region.arc(self.center.value - self.radius, 2 * self.radius)

    def to_json(self) -> dict:
        return {"c": str(self.center), "r": format_fraction(self.radius)}

    @classmethod
    def from_json(cls, obj: dict, closed: bool = False) -> "Ball":
        return cls(Q1.parse(obj["c"]), parse_fraction(obj["r"]), closed)


def arcs_meet(c1: Q1, r1: Fraction, c2: Q1, r2: Fraction) -> bool:
    """Whether the open arcs of radii ``r1``, ``r2`` around ``c1``, ``c2`` intersect.

    Radii above 1/2 are allowed and mean "everything" (or everything but a point
    at exactly 1/2), which the single inequality still handles.
    """
    return dist(c1, c2) < r1 + r2


def _frac_part(v: Fraction) -> Fraction:
    return v - (v.numerator // v.denominator)


class Region:
    """A subset of T that is a finite union of arcs and points.

    Stored as a cell decomposition: sorted cut points in [0, 1), a membership
    flag per cut point, and a flag per open gap (gap ``i`` runs from cut ``i``
    to cut ``i + 1``, the last one wrapping through 0). Redundant cuts are
    removed, so two regions are equal as point sets iff they compare equal.
    Open unions of balls, their closed complements and finite point sets are
    all representable, which makes complement exact.
    """

    __slots__ = ("cuts", "at", "gaps", "whole")

    def __init__(
        self,
        cuts: Sequence[Fraction] = (),
        at: Sequence[bool] = (),
        gaps: Sequence[bool] = (),
        whole: bool = False,
    ) -> None:
        cuts, at, gaps = list(cuts), list(at), list(gaps)
        # drop cuts whose point and both neighbouring gaps agree
        k = len(cuts)
        keep = [not (at[i] == gaps[i - 1] == gaps[i]) for i in range(k)]
        if k and not any(keep):
            whole = gaps[0]
        if not all(keep):
            # a dropped cut has equal flags on both sides, so the gap after the
            # previous kept cut simply extends across it
            cuts = [c for c, kp in zip(cuts, keep) if kp]
            at = [a for a, kp in zip(at, keep) if kp]
            gaps = [g for g, kp in zip(gaps, keep) if kp]
        self.cuts: tuple[Fraction, ...] = tuple(cuts)
        self.at: tuple[bool, ...] = tuple(at)
        self.gaps: tuple[bool, ...] = tuple(gaps)
        self.whole: bool = bool(whole) if not self.cuts else False

    # construction -------------------------------------------------------

    @classmethod
    def empty(cls) -> "Region":
        return cls()

    @classmethod
    def full(cls) -> "Region":
        return cls(whole=True)

    @classmethod
    def _from_predicate(
        cls, cuts: Iterable[Fraction], pred: Callable[[Fraction], bool]
    ) -> "Region":
        cs = sorted({_frac_part(c) for c in cuts})
        if not cs:
            return cls(whole=pred(Fraction(0)))
        at = [pred(c) for c in cs]
        gaps = [pred(_gap_sample(cs, i)) for i in range(len(cs))]
        return cls(cs, at, gaps)

    @classmethod
    def arc(cls, start: Fraction, length: Fraction) -> "Region":
        """Open arc from ``start`` of the given length (>= 1 is everything but ``start``, > 1 everything)."""
        if length <= 0:
            return cls.empty()
        if length > 1:
            return cls.full()
        s = _frac_part(Fraction(start))
        return cls._from_predicate(
            (s, s + length), lambda x: 0 < _frac_part(x - s) < length
        )

    @classmethod
    def closed_arc(cls, start: Fraction, length: Fraction) -> "Region":
        if length < 0:
            return cls.empty()
        if length >= 1:
            return cls.full()
        s = _frac_part(Fraction(start))
        return cls._from_predicate((s, s + length), lambda x: _frac_part(x - s) <= length)

    @classmethod
    def points(cls, pts: Iterable[Q1]) -> "Region":
        pset = {p.value for p in pts}
        return cls._from_predicate(pset, lambda x: x in pset)

    @classmethod
    def union_of(cls, regions: Iterable["Region"]) -> "Region":
        regions = list(regions)
        if not regions:
            return cls.empty()
        if len(regions) == 1:
            return regions[0]
        cuts = {c for r in regions for c in r.cuts}
        return cls._from_predicate(cuts, lambda x: any(r._contains(x) for r in regions))

    @classmethod
    def from_open_arcs(cls, arcs: Iterable[tuple[Fraction, Fraction]]) -> "Region":
        """Union of open arcs given as ``(start, length)``, built by one circular sweep."""
        spans = []
        for start, length in arcs:
            if length > 1:
                return cls.full()
            if length > 0:
                s = _frac_part(Fraction(start))
                spans.append((s, _frac_part(s + length), length == 1))
        if not spans:
            return cls.empty()
        cuts = sorted({s for s, _, _ in spans} | {e for _, e, _ in spans})
        k = len(cuts)
        pos = {c: i for i, c in enumerate(cuts)}
        gap_cover = [0] * (k + 1)
        point_cover = [0] * (k + 1)

        def add(diff: list[int], i: int, j: int) -> None:
            # +1 on the circular index range [i, j)
            if i == j:
                return
            if i < j:
                diff[i] += 1
                diff[j] -= 1
            else:
                diff[i] += 1
                diff[k] -= 1
                diff[0] += 1
                diff[j] -= 1

        for s, e, whole_but_point in spans:
            i, j = pos[s], pos[e]
            if whole_but_point:
                gap_cover[0] += 1
                gap_cover[k] -= 1
                point_cover[0] += 1
                point_cover[k] -= 1
                point_cover[i] -= 1
                point_cover[i + 1] += 1
            else:
                add(gap_cover, i, j)
                add(point_cover, (i + 1) % k, j)
        gaps, at = [], []
        g = p = 0
        for i in range(k):
            g += gap_cover[i]
            p += point_cover[i]
            gaps.append(g > 0)
            at.append(p > 0)
        return cls(cuts, at, gaps)

    # queries -------------------------------------------------------------

    def _contains(self, x: Fraction) -> bool:
        if not self.cuts:
            return self.whole
        i = bisect_left(self.cuts, x)
        if i < len(self.cuts) and self.cuts[i] == x:
            return self.at[i]
        return self.gaps[i - 1]

    def __contains__(self, x: Q1) -> bool:
        return self._contains(x.value)

    def contains(self, x: Q1) -> bool:
        return self._contains(x.value)

    def is_empty(self) -> bool:
        return not self.cuts and not self.whole

    def covers_circle(self) -> bool:
        return not self.cuts and self.whole

    def is_subset(self, other: "Region") -> bool:
        return self.intersect(other.complement()).is_empty()

    def measure(self) -> Fraction:
        if not self.cuts:
            return Fraction(1) if self.whole else Fraction(0)
        total = Fraction(0)
        k = len(self.cuts)
        for i in range(k):
            if self.gaps[i]:
                nxt = self.cuts[i + 1] if i + 1 < k else self.cuts[0] + 1
                total += nxt - self.cuts[i]
        return total

    def arcs(self) -> list[tuple[Fraction, Fraction]]:
        """Maximal open arcs of the interior as ``(start, end)`` with ``end`` possibly < ``start`` (wrap).

        An arc with ``start == end`` is the whole circle minus that point.
        """
        if not self.cuts:
            return []
        k = len(self.cuts)
        out = []
        # start scanning at a cut that begins an interior run
        starts = [i for i in range(k) if self.gaps[i] and not (self.gaps[i - 1] and self.at[i])]
        for i in starts:
            j = (i + 1) % k
            while self.at[j] and self.gaps[j] and j != i:
                j = (j + 1) % k
            out.append((self.cuts[i], self.cuts[j]))
        return out

    def boundary_points(self) -> list[Fraction]:
        """Points of the region that are not interior (closed endpoints, isolated points)."""
        k = len(self.cuts)
        return [
            self.cuts[i]
            for i in range(k)
            if self.at[i] and not (self.gaps[i - 1] and self.gaps[i])
        ]

    # algebra -------------------------------------------------------------

    def _combine(self, other: "Region", op: Callable[[bool, bool], bool]) -> "Region":
        cuts = set(self.cuts) | set(other.cuts)
        if not cuts:
            return Region(whole=op(self.whole, other.whole))
        return Region._from_predicate(cuts, lambda x: op(self._contains(x), other._contains(x)))

    def union(self, other: "Region") -> "Region":
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other: "Region") -> "Region":
        return self._combine(other, lambda a, b: a and b)

    def complement(self) -> "Region":
        if not self.cuts:
            return Region(whole=not self.whole)
        return Region(self.cuts, [not a for a in self.at], [not g for g in self.gaps])

    __or__ = union
    __and__ = intersect
    __invert__ = complement

    # identity ------------------------------------------------------------

    def _key(self) -> tuple:
        return (self.cuts, self.at, self.gaps, self.whole)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Region) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if not self.cuts:
            return "Region(full)" if self.whole else "Region(empty)"
        parts = [f"({format_fraction(a)}, {format_fraction(b)})" for a, b in self.arcs()]
        parts += [f"{{{format_fraction(p)}}}" for p in self.boundary_points()]
        return "Region(" + " | ".join(parts) + ")"

    def to_json(self) -> dict:
        if self.covers_circle():
            return {"full": True, "arcs": [], "points": []}
        return {
            "full": False,
            "arcs": [[format_fraction(a), format_fraction(b)] for a, b in self.arcs()],
            "points": [format_fraction(p) for p in self.boundary_points()],
        }


def _gap_sample(cuts: Sequence[Fraction], i: int) -> Fraction:
    a = cuts[i]
    b = cuts[i + 1] if i + 1 < len(cuts) else cuts[0] + 1
    return _frac_part((a + b) / 2)


def ball_sum(b1: Ball, b2: Ball) -> Region:
    """Minkowski sum ``{u + v : u in b1, v in b2}`` of two open balls."""
    if b1.closed or b2.closed:
        raise ValueError("ball_sum expects open balls")
    c = b1.center + b2.center
    r = b1.radius + b2.radius
    return Region.arc(c.value - r, 2 * r)


def union(a: Region, b: Region) -> Region:
    return a.union(b)


def intersect(a: Region, b: Region) -> Region:
    return a.intersect(b)


def complement(a: Region) -> Region:
    return a.complement()


def contains(a: Region, x: Q1) -> bool:
    return a.contains(x)


def is_subset(a: Region, b: Region) -> bool:
    return a.is_subset(b)


def covers_circle(a: Region) -> bool:
    return a.covers_circle()
