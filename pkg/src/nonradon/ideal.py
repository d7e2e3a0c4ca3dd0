"""The witness ideal: a family X of index elements is small when some finite
point set u escapes every member, i.e. each U^a misses a point of u.

For a finite X the least such |u| (the pierce number) is a minimum hitting set
problem for the closed complements of the U^a.
"""

from __future__ import annotations

import os
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from operator import and_
from typing import Callable, Iterable, Sequence

from .group import Q1, Region
from .index import IndexElement, enumerate_index, escape_witness

DEFAULT_EXACT_LIMIT = int(os.environ.get("NONRADON_EXACT_LIMIT", "64"))


class SizeLimitExceeded(RuntimeError):
    pass


def check_witness(u: Iterable[Q1], X: Iterable[IndexElement]) -> bool:
    """True iff every element of X has some point of ``u`` outside its U."""
    u = list(u)
    return all(any(p not in a.region for p in u) for a in X)


@dataclass(frozen=True)
class PierceResult:
    size: int
    witness: tuple[Q1, ...]
    certificate: str = "exact"  # or "heuristic": size is then only an upper bound

    def to_json(self) -> dict:
        out = {"size": self.size, "witness": [str(p) for p in self.witness]}
        if self.certificate != "exact":
            out["certificate"] = self.certificate
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PierceResult":
        return cls(obj["size"], tuple(Q1.parse(p) for p in obj["witness"]), obj.get("certificate", "exact"))


# reduction to a hitting-set kernel ----------------------------------------


def _closed_pieces(region: Region) -> list[tuple[Fraction, Fraction]]:
    """Closed complement of an open region as ``[lo, hi]`` pieces on the unrolled circle."""
    comp = region.complement()
    pieces = [(a, b if b > a else b + 1) for a, b in comp.arcs()]
    covered = {a for a, _ in comp.arcs()} | {b for _, b in comp.arcs()}
    pieces += [(p, p) for p in comp.boundary_points() if p not in covered]
    return pieces


def _candidate_masks(X: Sequence[IndexElement]) -> tuple[list[Fraction], list[int]]:
    """Candidate points (complement endpoints) and, per element, the bitmask of candidates it accepts."""
    pieces = [_closed_pieces(a.region) for a in X]
    cands = sorted({lo - (lo.numerator // lo.denominator) for ps in pieces for lo, _ in ps}
                   | {hi - (hi.numerator // hi.denominator) for ps in pieces for _, hi in ps})
    masks = []
    for ps in pieces:
        mask = 0
        for lo, hi in ps:
            i = bisect_left(cands, lo)
            if hi < 1:
                j = bisect_right(cands, hi)
                mask |= ((1 << j) - 1) ^ ((1 << i) - 1)
            else:
                mask |= ((1 << len(cands)) - 1) ^ ((1 << i) - 1)
                j = bisect_right(cands, hi - 1)
                mask |= (1 << j) - 1
        masks.append(mask)
    return cands, masks


def _minimal_sets(masks: list[int]) -> list[int]:
    """Drop duplicate and non-minimal masks (hitting the smaller one hits the larger)."""
    uniq = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in uniq:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Cover:
    """Set cover over a kernel of elements: columns are candidate points.

    Columns with identical coverage are merged (keeping the smallest point) and
    columns whose coverage is contained in another's are dropped, so the
    search runs over irredundant columns ordered by their point.
    """

    def __init__(self, kernel: list[int]) -> None:
        cover: dict[int, int] = {}
        for e, m in enumerate(kernel):
            for c in _bits(m):
                cover[c] = cover.get(c, 0) | (1 << e)
        first: dict[int, int] = {}
        for c in sorted(cover):
            first.setdefault(cover[c], c)
        by_size = sorted(first, key=lambda m: (-m.bit_count(), m))
        kept: list[int] = []
        for m in by_size:
            if not any(k & m == m for k in kept):
                kept.append(m)
        cols = sorted(kept, key=first.__getitem__)
        self.points = [first[m] for m in cols]  # candidate index of each column
        self.cols = cols
        self.full = (1 << len(kernel)) - 1
        self._failed: set[tuple[int, int, int]] = set()
        # per element: bitmask over columns covering it
        self.by_element = [0] * len(kernel)
        for j, m in enumerate(cols):
            for e in _bits(m):
                self.by_element[e] |= 1 << j

    def _lower_bound(self, uncovered: int, allowed: int) -> int:
        used = 0
        count = 0
        opts = sorted(
            (self.by_element[e] & allowed for e in _bits(uncovered)),
            key=lambda m: (m.bit_count(), m),
        )
        for m in opts:
            if not m & used:
                used |= m
                count += 1
        return count

    def search(self, uncovered: int, budget: int, allowed: int) -> list[int] | None:
        """Columns (indices) from ``allowed`` covering ``uncovered`` within ``budget``, or None."""
        if not uncovered:
            return []
        if budget == 0:
            return None
        key = (uncovered, budget, allowed)
        if key in self._failed:
            return None
        found = self._search(uncovered, budget, allowed)
        if found is None:
            self._failed.add(key)
        return found

    def _search(self, uncovered: int, budget: int, allowed: int) -> list[int] | None:
        elements = _bits(uncovered)
        if budget == 1:
            common = allowed
            for e in elements:
                common &= self.by_element[e]
                if not common:
                    return None
            return [(common & -common).bit_length() - 1]
        best_opts = -1
        for e in elements:
            opts = self.by_element[e] & allowed
            if not opts:
                return None
            if best_opts < 0 or opts.bit_count() < best_opts.bit_count():
                best_opts = opts
        if self._lower_bound(uncovered, allowed) > budget:
            return None
        choices = sorted(_bits(best_opts), key=lambda j: -(self.cols[j] & uncovered).bit_count())
        for j in choices:
            sub = self.search(uncovered & ~self.cols[j], budget - 1, allowed)
            if sub is not None:
                return [j] + sub
        return None

    def minimum(self) -> int:
        everything = (1 << len(self.cols)) - 1
        size = self._lower_bound(self.full, everything)
        while self.search(self.full, size, everything) is None:
            size += 1
        return size

    def lex_least(self, size: int) -> list[int]:
        """Lexicographically least column set of the given (attainable) size, in column order."""
        everything = (1 << len(self.cols)) - 1
        chosen: list[int] = []
        uncovered = self.full
        lower = 0
        for slot in range(size):
            if not uncovered:
                break
            for j in range(lower, len(self.cols)):
                rest = uncovered & ~self.cols[j]
                above = everything & ~((1 << (j + 1)) - 1)
                if self.search(rest, size - slot - 1, above) is not None:
                    chosen.append(j)
                    uncovered = rest
                    lower = j + 1
                    break
            else:  # pragma: no cover - size is attainable by construction
                raise AssertionError("minimum size not attainable")
        return chosen


def _greedy(sets: list[int]) -> list[int]:
    chosen = []
    remaining = list(sets)
    while remaining:
        counts: dict[int, int] = {}
        for m in remaining:
            for c in _bits(m):
                counts[c] = counts.get(c, 0) + 1
        best = min(counts, key=lambda c: (-counts[c], c))
        chosen.append(best)
        remaining = [m for m in remaining if not m >> best & 1]
    return sorted(chosen)


def pierce_number(
    X: Sequence[IndexElement],
    limit: int | None = None,
    heuristic: bool = False,
) -> PierceResult:
    """Minimum size of a finite set escaping every element of X, with a witness.

    Optimal witnesses can be taken among endpoints of the complement arcs,
    since moving a point inside a cell of the combined decomposition to one of
    its ends only gains hits. Elements whose complement contains another's
    are dropped first, and ``limit`` bounds how many elements remain. Among
    minimum witnesses on the irredundant candidate points the
    lexicographically least is returned.
    """
    limit = DEFAULT_EXACT_LIMIT if limit is None else limit
    X = list(X)
    if not X:
        return PierceResult(0, ())
    cands, masks = _candidate_masks(X)
    kernel = _minimal_sets(masks)
    common = reduce(and_, kernel)
    if common:  # one shared escape point; the least such candidate is the lex-least witness
        return PierceResult(1, (Q1(cands[(common & -common).bit_length() - 1]),))
    if len(kernel) > limit:
        if not heuristic:
            raise SizeLimitExceeded(
                f"{len(kernel)} irredundant elements exceed the exact limit {limit}"
            )
        chosen = _greedy(kernel)
        return PierceResult(len(chosen), tuple(Q1(cands[c]) for c in chosen), "heuristic")
    cover = _Cover(kernel)
    size = cover.minimum()
    columns = cover.lex_least(size)
    return PierceResult(size, tuple(Q1(cands[cover.points[j]]) for j in columns))


def pierce_by_partition(X: Sequence[IndexElement], max_parts: int | None = None, max_size: int = 12) -> int | None:
    """Least number of parts in a partition of X whose parts' unions each miss a point of T.

    Exhaustive search over set partitions; returns None when more than
    ``max_parts`` parts would be needed.
    """
    X = list(X)
    if len(X) > max_size:
        raise SizeLimitExceeded(f"{len(X)} elements exceed the partition oracle limit {max_size}")
    if not X:
        return 0
    cap = len(X) if max_parts is None else min(max_parts, len(X))
    regions = [a.region for a in X]

    def assign(i: int, unions: list[Region], n: int) -> bool:
        if i == len(X):
            return True
        for k in range(len(unions)):
            merged = unions[k] | regions[i]
            if merged.covers_circle():
                continue
            saved = unions[k]
            unions[k] = merged
            if assign(i + 1, unions, n):
                return True
            unions[k] = saved
        if len(unions) < n and not regions[i].covers_circle():
            unions.append(regions[i])
            if assign(i + 1, unions, n):
                return True
            unions.pop()
        return False

    for n in range(1, cap + 1):
        if assign(0, [], n):
            return n
    return None


# streamed families ------------------------------------------------------------


@dataclass
class TrendReport:
    checkpoints: list[tuple[int, int]]
    verdict: str
    heuristic: bool = False
    params: dict = field(default_factory=dict)

    @property
    def values(self) -> list[int]:
        return [p for _, p in self.checkpoints]

    def to_json(self) -> dict:
        return {
            "checkpoints": [[m, p] for m, p in self.checkpoints],
            "verdict": self.verdict,
            "heuristic": self.heuristic,
            "params": self.params,
        }

    def to_csv(self) -> str:
        lines = ["m,p_m"] + [f"{m},{p}" for m, p in self.checkpoints]
        lines.append(f"# verdict: {self.verdict}" + (" (heuristic pierce)" if self.heuristic else ""))
        return "\n".join(lines) + "\n"


def verdict_for(values: Sequence[int]) -> str:
    """Bounded-looking when the last three checkpoints agree. A heuristic, nothing more."""
    if len(values) >= 3 and values[-1] == values[-2] == values[-3]:
        return "bounded-looking"
    if len(values) < 3 and len(set(values)) <= 1:
        return "bounded-looking"
    return "unbounded-looking"


def ideal_trend(
    member: Callable[[int, IndexElement], bool],
    checkpoints: Sequence[int],
    limit: int | None = None,
    jobs: int = 1,
    params: dict | None = None,
) -> TrendReport:
    """Pierce numbers of ``X & A|m`` at each checkpoint ``m`` of the canonical enumeration.

    ``member(position, element)`` decides membership in X. Checkpoints are
    evaluated independently (in parallel when ``jobs > 1``); output order is
    the sorted checkpoint order either way. When the exact solver's limit is
    exceeded the greedy bound is used and the report is flagged.
    """
    marks = sorted(set(checkpoints))
    if not marks or marks[0] < 1:
        raise ValueError("checkpoints must be positive")
    prefix = enumerate_index(marks[-1])
    flags = [member(i, a) for i, a in enumerate(prefix)]

    def at(m: int) -> tuple[int, PierceResult]:
        X = [a for a, f in zip(prefix[:m], flags) if f]
        try:
            return m, pierce_number(X, limit)
        except SizeLimitExceeded:
            return m, pierce_number(X, limit, heuristic=True)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(at, marks))
    else:
        results = [at(m) for m in marks]
    points = [(m, r.size) for m, r in results]
    heuristic = any(r.certificate == "heuristic" for _, r in results)
    return TrendReport(points, verdict_for([p for _, p in points]), heuristic, dict(params or {}))


def geometric_checkpoints(m_max: int, first: int = 25, ratio: int = 2) -> list[int]:
    marks = []
    m = first
    while m < m_max:
        marks.append(m)
        m *= ratio
    marks.append(m_max)
    return marks


__all__ = [
    "DEFAULT_EXACT_LIMIT",
    "PierceResult",
    "SizeLimitExceeded",
    "TrendReport",
    "check_witness",
    "escape_witness",
    "geometric_checkpoints",
    "ideal_trend",
    "pierce_by_partition",
    "pierce_number",
    "verdict_for",
]
