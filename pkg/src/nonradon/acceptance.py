"""Acceptance suites shared by ``selftest`` and the test-suite.

Each runner returns a :class:`Outcome` whose ``detail`` is free of timings so
that reports are byte-identical across runs. Seeds and sizes are fixed here.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .apxhom import MultiplierHom, check_l1_suite, random_pairs, random_rational, refute
from .group import Q1, q1
from .ideal import check_witness, pierce_by_partition, pierce_number
from .index import enumerate_index, escape_witness, from_points, make_element, validate
from .linsolve import determinant, matmul, smith_normal_form, verify_star

L1_PREFIX = 300
L1_PAIRS = 50
L1_MAX_DENOMINATOR = 120
L1_SECONDS = 60.0

# refutation fixture, calibrated once against the exact pierce solver
REFUTE_SAMPLES = ("1/5", "1/16", "1/3", "7/64")
REFUTE_M_MAX = 1000
REFUTE_CHECKPOINTS = (1, 5, 10, 25, 50, 100, 200, 400, 700, 1000)
REFUTE_LIMIT = 512
REFUTE_SEEDS = tuple(range(10))
REFUTE_BOUND = 5

A0 = make_element([("0", "1/8", "0"), ("1/2", "1/8", "1/2")])


@dataclass(frozen=True)
class Outcome:
    number: int
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number}. {self.name}: {self.detail}"


def approximate_additivity(seed: int = 0) -> Outcome:
    start = time.perf_counter()
    prefix = enumerate_index(L1_PREFIX)
    reports = check_l1_suite(random_pairs(L1_PAIRS, seed, L1_MAX_DENOMINATOR), prefix)
    elapsed = time.perf_counter() - start
    violations = sum(len(r.violations) for r in reports)
    bad_witness = sum(not r.witness_ok for r in reports)
    discrepant = sum(len(r.discrepancies) for r in reports)
    ok = violations == 0 and bad_witness == 0 and elapsed < L1_SECONDS
    detail = (
        f"{len(reports)} pairs x {len(prefix)} elements, {discrepant} discrepancies, "
        f"{violations} violations, {bad_witness} witness failures"
        + ("" if elapsed < L1_SECONDS else f", over the {L1_SECONDS:.0f}s budget")
    )
    return Outcome(1, "approximate additivity", ok, detail)


def ideal_axioms(seed: int = 0, subsets: int = 100, pool: int = 50) -> Outcome:
    rng = random.Random(seed)
    base = enumerate_index(pool)
    failures = []
    if pierce_number([]).size != 0:
        failures.append("empty")
    for i, a in enumerate(base):
        r = pierce_number([a])
        if r.size != 1 or not check_witness(r.witness, [a]):
            failures.append(f"singleton {i}")
    for k in range(subsets):
        X = [a for a in base if rng.random() < 0.3]
        Y = [a for a in X if rng.random() < 0.5]
        Z = [a for a in base if rng.random() < 0.3]
        px, py, pz = pierce_number(X), pierce_number(Y), pierce_number(Z)
        if py.size > px.size:
            failures.append(f"monotone {k}")
        union = X + [a for a in Z if a not in X]
        pu = pierce_number(union)
        if pu.size > px.size + pz.size or not check_witness(px.witness + pz.witness, union):
            failures.append(f"subadditive {k}")
    detail = f"{subsets} subsets of the first {pool}, {len(failures)} failures"
    if failures:
        detail += " (" + ", ".join(failures[:5]) + ")"
    return Outcome(2, "ideal laws", not failures, detail)


def oracle_agreement(seed: int = 0, sets: int = 50, pool: int = 300, max_size: int = 10) -> Outcome:
    rng = random.Random(seed)
    base = enumerate_index(pool)
    disagreements = unverified = 0
    for _ in range(sets):
        X = rng.sample(base, rng.randint(0, max_size))
        r = pierce_number(X, limit=len(X) + 1)
        if r.size != pierce_by_partition(X):
            disagreements += 1
        if not check_witness(r.witness, X):
            unverified += 1
    ok = disagreements == 0 and unverified == 0
    return Outcome(3, "pierce vs partition oracle", ok, f"{sets} sets, {disagreements} disagreements, {unverified} bad witnesses")


def non_triviality(seed: int = 0, count: int = 100) -> Outcome:
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        u = sorted({random_rational(rng, 64) for _ in range(rng.randint(0, 4))})
        a = escape_witness(u)
        if not validate(a).ok or not all(x in a for x in u):
            failures += 1
    return Outcome(4, "escape witness", failures == 0, f"{count} point sets, {failures} failures")


def _snf_ok(B: list[list[int]]) -> bool:
    U, S, V = smith_normal_form(B)
    if matmul(matmul(U, S), V) != B:
        return False
    if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
        return False
    m, n = len(B), len(B[0])
    diag = []
    for i in range(m):
        for j in range(n):
            if i != j and S[i][j] != 0:
                return False
        if i < n:
            diag.append(S[i][i])
    if any(d < 0 for d in diag):
        return False
    for d, e in zip(diag, diag[1:]):
        if d == 0 and e != 0 or d != 0 and e % d != 0:
            return False
    return True


def linear_systems(seed: int = 0, matrices: int = 200, systems: int = 100) -> Outcome:
    rng = random.Random(seed)
    snf_bad = 0
    for _ in range(matrices):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        B = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        snf_bad += not _snf_ok(B)
    star = verify_star(systems, seed)
    ok = snf_bad == 0 and star.ok
    detail = (
        f"{matrices} matrices, {snf_bad} bad decompositions; {star.instances} systems, "
        f"{star.solver_solved} solved, {len(star.disagreements)} disagreements, {len(star.unsound)} unsound"
    )
    return Outcome(5, "Smith form and torus solver", ok, detail)


def from_points_suite(seed: int = 0, count: int = 200) -> Outcome:
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        n = rng.randint(1, 4)
        ys: set[Q1] = set()
        while len(ys) < n:
            ys.add(random_rational(rng, 64))
        ys_list = list(ys)
        rng.shuffle(ys_list)
        a = from_points(ys_list)
        if not validate(a).ok or a.n != n or any(y not in a.balls[i] for i, y in enumerate(ys_list)):
            failures += 1
    fixture = from_points([q1(0), q1(1, 2)]) == A0
    ok = failures == 0 and fixture
    detail = f"{count} tuples, {failures} failures, fixture {'reproduced' if fixture else 'differs'}"
    return Outcome(6, "point-built elements", ok, detail)


def refutation_candidates() -> list[MultiplierHom]:
    return [MultiplierHom.zero(), MultiplierHom.identity()] + [
        MultiplierHom.seeded(s, REFUTE_BOUND) for s in REFUTE_SEEDS
    ]


def qualifies(values: list[int]) -> bool:
    """Nondecreasing, at least three distinct values, ending at 3 or more."""
    rising = all(a <= b for a, b in zip(values, values[1:]))
    return rising and len(set(values)) >= 3 and values[-1] >= 3


def refutation(jobs: int = 1) -> Outcome:
    samples = [Q1.parse(s) for s in REFUTE_SAMPLES]
    missing = []
    for g in refutation_candidates():
        report = refute(g, samples, REFUTE_M_MAX, REFUTE_CHECKPOINTS, limit=REFUTE_LIMIT, jobs=jobs)
        good = [x for x, t in report.trends.items() if not t.heuristic and qualifies(t.values)]
        if not good:
            missing.append(str(g))
    detail = f"{len(refutation_candidates())} homomorphisms, m up to {REFUTE_M_MAX}, {len(missing)} without growth"
    if missing:
        detail += " (" + ", ".join(missing) + ")"
    return Outcome(7, "refutation growth", not missing, detail)


def determinism(run: Callable[[list[str]], tuple[int, bytes]], examples: list[list[str]]) -> Outcome:
    """Run each argv twice and under two thread counts; all outputs must match byte for byte."""
    unstable = []
    for argv in examples:
        outs = {run(argv) for _ in range(2)} | {run(argv + ["--jobs", "3"])}
        if len(outs) != 1:
            unstable.append(" ".join(argv))
    detail = f"{len(examples)} commands, {len(unstable)} unstable"
    if unstable:
        detail += " (" + "; ".join(unstable) + ")"
    return Outcome(8, "determinism", not unstable, detail)


SUITES: dict[int, Callable[..., Outcome]] = {
    1: approximate_additivity,
    2: ideal_axioms,
    3: oracle_agreement,
    4: non_triviality,
    5: linear_systems,
    6: from_points_suite,
    7: refutation,
}


__all__ = [
    "A0",
    "Outcome",
    "SUITES",
    "determinism",
    "qualifies",
    "refutation_candidates",
]
