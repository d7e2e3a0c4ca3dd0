"""The map f : T -> T^A and its comparison with continuous homomorphisms.

``f_a(x) = x - r_i`` when ``x`` lies in the i-th ball of ``a``, and 0 when
``x`` is outside U^a. Additivity can only fail at ``a`` when one of
``x, y, x + y`` leaves U^a, so the failures at ``(x, y)`` are escaped by the
three-point set ``{x, y, x + y}``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .group import Q1, ZERO
from .ideal import TrendReport, check_witness, geometric_checkpoints, ideal_trend
from .index import IndexElement, enumerate_index


def eval_f(a: IndexElement, x: Q1) -> Q1:
    i = a.locate(x)
    if i is None:
        return ZERO
    return x - a.points[i]


def discrepancy_c(x: Q1, y: Q1, prefix: Sequence[IndexElement]) -> list[int]:
    """Positions ``p`` in ``prefix`` where ``f_a(x) + f_a(y) != f_a(x + y)``."""
    z = x + y
    return [
        p
        for p, a in enumerate(prefix)
        if eval_f(a, x) + eval_f(a, y) != eval_f(a, z)
    ]


@dataclass
class AdditivityReport:
    x: Q1
    y: Q1
    prefix_length: int
    discrepancies: list[int]
    violations: list[int]  # positions with x, y, x + y all inside U^a yet non-additive
    witness_ok: bool

    @property
    def ok(self) -> bool:
        return not self.violations and self.witness_ok

    def to_json(self) -> dict:
        return {
            "x": str(self.x),
            "y": str(self.y),
            "prefix": self.prefix_length,
            "discrepancies": self.discrepancies,
            "violations": self.violations,
            "witness_ok": self.witness_ok,
        }


def check_additivity(x: Q1, y: Q1, prefix: Sequence[IndexElement]) -> AdditivityReport:
    z = x + y
    bad = discrepancy_c(x, y, prefix)
    violations = [p for p in bad if x in prefix[p] and y in prefix[p] and z in prefix[p]]
    witness_ok = check_witness((x, y, z), [prefix[p] for p in bad])
    return AdditivityReport(x, y, len(prefix), bad, violations, witness_ok)


def random_rational(rng: random.Random, max_denominator: int) -> Q1:
    q = rng.randint(1, max_denominator)
    return Q1(Fraction(rng.randrange(q), q))


def random_pairs(count: int, seed: int = 0, max_denominator: int = 120) -> list[tuple[Q1, Q1]]:
    rng = random.Random(seed)
    return [(random_rational(rng, max_denominator), random_rational(rng, max_denominator)) for _ in range(count)]


def check_l1_suite(pairs: Sequence[tuple[Q1, Q1]], prefix: Sequence[IndexElement]) -> list[AdditivityReport]:
    return [check_additivity(x, y, prefix) for x, y in pairs]


@dataclass(frozen=True)
class MultiplierHom:
    """Coordinatewise continuous endomorphisms ``x -> c_p * x`` of T.

    ``kind`` is ``zero``, ``identity``, ``fixed`` (``values`` listed by
    position, 0 past the end) or ``seeded`` (``|c| <= bound`` drawn from
    ``seed`` and the position).
    """

    kind: str
    values: tuple[int, ...] = ()
    seed: int = 0
    bound: int = 0

    @classmethod
    def zero(cls) -> "MultiplierHom":
        return cls("zero")

    @classmethod
    def identity(cls) -> "MultiplierHom":
        return cls("identity")

    @classmethod
    def fixed(cls, values: Sequence[int]) -> "MultiplierHom":
        return cls("fixed", tuple(int(v) for v in values))

    @classmethod
    def seeded(cls, seed: int, bound: int) -> "MultiplierHom":
        return cls("seeded", seed=seed, bound=bound)

    @classmethod
    def parse(cls, text: str) -> "MultiplierHom":
        """``zero``, ``identity``, ``seed:S:C`` or ``fixed:c0,c1,...``."""
        if text == "zero":
            return cls.zero()
        if text == "identity":
            return cls.identity()
        head, _, rest = text.partition(":")
        if head == "seed":
            s, _, c = rest.partition(":")
            return cls.seeded(int(s), int(c))
        if head == "fixed":
            return cls.fixed([int(v) for v in rest.split(",") if v])
        raise ValueError(f"unknown homomorphism {text!r}")

    def __str__(self) -> str:
        if self.kind == "seeded":
            return f"seed:{self.seed}:{self.bound}"
        if self.kind == "fixed":
            return "fixed:" + ",".join(map(str, self.values))
        return self.kind

    def multiplier(self, position: int) -> int:
        if self.kind == "zero":
            return 0
        if self.kind == "identity":
            return 1
        if self.kind == "fixed":
            return self.values[position] if position < len(self.values) else 0
        rng = np.random.default_rng([self.seed, position])
        return int(rng.integers(-self.bound, self.bound + 1))

    def __call__(self, position: int, x: Q1) -> Q1:
        return self.multiplier(position) * x


def delta_set(g: MultiplierHom, x: Q1, prefix: Sequence[IndexElement]) -> list[int]:
    """Positions where ``f_a(x) != g_a(x)``."""
    return [p for p, a in enumerate(prefix) if eval_f(a, x) != g(p, x)]


@dataclass
class RefutationReport:
    g: str
    trends: dict[str, TrendReport]
    best_sample: str | None
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "best_sample": self.best_sample,
            "trends": {x: t.to_json() for x, t in self.trends.items()},
            "params": self.params,
        }

    def to_csv(self) -> str:
        lines = ["x,m,p_m"]
        for x, t in self.trends.items():
            lines += [f"{x},{m},{p}" for m, p in t.checkpoints]
        return "\n".join(lines) + "\n"


def refute(
    g: MultiplierHom,
    samples: Sequence[Q1],
    m_max: int,
    checkpoints: Sequence[int] | None = None,
    limit: int | None = None,
    jobs: int = 1,
) -> RefutationReport:
    """Trend of the pierce numbers of ``Delta_x`` along the enumeration for each sample ``x``.

    Growth suggests ``Delta_x`` is not in the ideal, i.e. ``g`` fails to
    approximate f at ``x``; the report only records the numbers and a verdict.
    The best sample is the one with the largest final pierce number (first
    on ties).
    """
    if not samples:
        raise ValueError("need at least one sample")
    marks = list(checkpoints) if checkpoints else geometric_checkpoints(m_max)
    marks = sorted({m for m in marks if m <= m_max} | {m_max})
    enumerate_index(m_max)  # warm the shared cache before threads start
    multipliers = [g.multiplier(p) for p in range(m_max)]

    def trend(x: Q1) -> tuple[str, TrendReport]:
        def member(p: int, a: IndexElement) -> bool:
            return eval_f(a, x) != multipliers[p] * x

        return str(x), ideal_trend(member, marks, limit=limit, params={"g": str(g), "x": str(x)})

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(trend, samples))
    else:
        results = [trend(x) for x in samples]
    trends = dict(results)
    best = max(trends, key=lambda k: trends[k].values[-1]) if trends else None
    return RefutationReport(
        str(g), trends, best, {"m_max": m_max, "checkpoints": marks, "samples": [str(x) for x in samples]}
    )
