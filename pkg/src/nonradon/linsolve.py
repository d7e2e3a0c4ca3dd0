"""Integer-coefficient linear systems over T with closed-ball constraints.

A system ``B x = r (mod 1)`` with ``x_i`` in the closed ball ``U_i`` is reduced
through the Smith decomposition ``S = P B Q``: with ``x = Q y`` it becomes the
diagonal system ``s_i y_i = (P r)_i``. Diagonal rows leave finitely many choices
for ``y_i``, zero rows are a pure consistency test, and the remaining
coordinates are free. The ball constraints are unwrapped into real interval
constraints over integer shifts and decided exactly by Fourier-Motzkin
elimination.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .group import HALF, Ball, Q1, format_fraction, parse_fraction

IntMatrix = list[list[int]]


class MalformedSystem(ValueError):
    pass


@dataclass(frozen=True)
class LinearSystem:
    """``coefficients @ x == constants (mod 1)`` with ``x[i]`` in ``constraints[i]``."""

    coefficients: tuple[tuple[int, ...], ...]
    constants: tuple[Q1, ...]
    constraints: tuple[Ball, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(b) for b in row) for row in self.coefficients)
        object.__setattr__(self, "coefficients", rows)
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(
            self,
            "constraints",
            tuple(Ball(b.center, b.radius, closed=True) for b in self.constraints),
        )
        m, n = len(rows), len(self.constraints)
        if m < 1 or n < 1:
            raise MalformedSystem("need at least one equation and one unknown")
        if any(len(row) != n for row in rows):
            raise MalformedSystem(f"every coefficient row must have {n} entries")
        if len(self.constants) != m:
            raise MalformedSystem(f"expected {m} constants, got {len(self.constants)}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.coefficients), len(self.constraints)

    def residuals(self, x: Sequence[Q1]) -> list[Q1]:
        return [
            sum((b * xi for b, xi in zip(row, x)), Q1(Fraction(0))) - r
            for row, r in zip(self.coefficients, self.constants)
        ]

    def is_solution(self, x: Sequence[Q1]) -> bool:
        if len(x) != len(self.constraints):
            return False
        if any(res.value != 0 for res in self.residuals(x)):
            return False
        return all(xi in ball for xi, ball in zip(x, self.constraints))

    def to_json(self) -> dict:
        return {
            "B": [list(row) for row in self.coefficients],
            "r": [str(c) for c in self.constants],
            "balls": [b.to_json() for b in self.constraints],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearSystem":
        try:
            return cls(
                tuple(tuple(row) for row in obj["B"]),
                tuple(Q1.parse(c) for c in obj["r"]),
                tuple(Ball.from_json(b, closed=True) for b in obj["balls"]),
            )
        except (KeyError, TypeError) as exc:
            raise MalformedSystem(f"bad system document: {exc}") from exc


# Smith normal form ---------------------------------------------------------


def _decompose(B: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(S, P, Q)`` with ``S == P @ B @ Q`` diagonal and P, Q unimodular."""
    S, P, Q = smith_normal_decomp(Matrix(B), domain=ZZ)
    return _tolist(S), _tolist(P), _tolist(Q)


def _tolist(M: Matrix) -> IntMatrix:
    return [[int(v) for v in row] for row in M.tolist()]


def smith_normal_form(B: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U @ S @ V == B``.

    U and V are unimodular and S is diagonal with nonnegative entries
    forming a divisibility chain.
    """
    m = len(B)
    n = len(B[0]) if m else 0
    if m == 0 or n == 0:
        raise MalformedSystem("empty matrix")
    S, P, Q = _decompose(B)
    U = _tolist(Matrix(P).inv())
    V = _tolist(Matrix(Q).inv())
    return U, S, V


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def determinant(A: IntMatrix) -> int:
    return int(Matrix(A).det())


# exact rational feasibility ------------------------------------------------

# an inequality sum(coeffs[i] * y[i]) <= bound
Ineq = tuple[tuple[Fraction, ...], Fraction]


def _eliminate_last(system: list[Ineq]) -> list[Ineq]:
    """Fourier-Motzkin step removing the last variable."""
    pos, neg, rest = [], [], []
    for coeffs, bound in system:
        c = coeffs[-1]
        if c > 0:
            pos.append((coeffs, bound))
        elif c < 0:
            neg.append((coeffs, bound))
        else:
            rest.append((coeffs[:-1], bound))
    for (cp, bp), (cn, bn) in itertools.product(pos, neg):
        lp, ln = cp[-1], -cn[-1]
        coeffs = tuple(a / lp + b / ln for a, b in zip(cp[:-1], cn[:-1]))
        rest.append((coeffs, bp / lp + bn / ln))
    return list(dict.fromkeys(rest))


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational of smallest denominator in the closed interval ``[lo, hi]`` (Stern-Brocot descent)."""
    if lo > hi:
        raise ValueError("empty interval")
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo, hi in (fl, fl + 1): recurse on reciprocals of the fractional parts
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


def fm_solve(system: list[Ineq], dim: int) -> list[Fraction] | None:
    """Exact feasibility of ``A y <= b`` in ``dim`` variables; returns a point or None.

    The point is built by back substitution, taking at each step the simplest
    rational in the admissible interval.
    """
    stages = [system]
    for _ in range(dim):
        stages.append(_eliminate_last(stages[-1]))
    if any(bound < 0 for _, bound in stages[-1]):
        return None
    point: list[Fraction] = []
    for k in range(1, dim + 1):
        lo, hi = None, None
        for coeffs, bound in stages[dim - k]:
            rhs = bound - sum(c * v for c, v in zip(coeffs[:-1], point))
            c = coeffs[-1]
            if c > 0:
                hi = rhs / c if hi is None else min(hi, rhs / c)
            elif c < 0:
                lo = rhs / c if lo is None else max(lo, rhs / c)
            elif rhs < 0:
                return None
        if lo is None and hi is None:
            lo = hi = Fraction(0)
        elif lo is None:
            lo = hi
        elif hi is None:
            hi = lo
        if lo > hi:
            return None
        point.append(simplest_between(lo, hi))
    return point


# the torus solver ------------------------------------------------------------


def _floor(v: Fraction) -> int:
    return v.numerator // v.denominator


def _ceil(v: Fraction) -> int:
    return -((-v.numerator) // v.denominator)


def solve_torus_system(system: LinearSystem) -> list[Q1] | None:
    """Find a rational solution of ``system`` inside its balls, or None if none exists over T."""
    B = [list(row) for row in system.coefficients]
    m, n = system.shape
    S, P, Q = _decompose(B)
    diag = [S[i][i] for i in range(min(m, n))]
    rank = sum(1 for d in diag if d != 0)
    target = [
        sum((p * r.value for p, r in zip(row, system.constants)), Fraction(0))
        for row in P
    ]
    for i in range(rank, m):
        if target[i].denominator != 1:
            return None
    fixed_choices = [range(abs(diag[i])) for i in range(rank)]
    free = n - rank

    # constraints that actually restrict x (a closed ball of radius 1/2 is T)
    active = [k for k, b in enumerate(system.constraints) if b.radius < HALF]

    for js in itertools.product(*fixed_choices):
        y_fixed = [_frac((target[i] + js[i]) / diag[i]) for i in range(rank)]
        # x_k = base_k + sum_f Q[k][rank + f] * y_free[f]  (mod 1)
        base = [sum((Q[k][l] * y_fixed[l] for l in range(rank)), Fraction(0)) for k in range(n)]
        y_free = _solve_free(system, Q, rank, free, base, active)
        if y_free is None:
            continue
        y = y_fixed + y_free
        x = [Q1(sum((Q[k][l] * y[l] for l in range(n)), Fraction(0))) for k in range(n)]
        assert system.is_solution(x), "solver produced a non-solution"
        return x
    return None


def _frac(v: Fraction) -> Fraction:
    return v - _floor(v)


def _solve_free(
    system: LinearSystem,
    Q: IntMatrix,
    rank: int,
    free: int,
    base: list[Fraction],
    active: list[int],
) -> list[Fraction] | None:
    """Choose free coordinates in [0, 1] meeting every active ball; depth-first over integer shifts."""
    box: list[Ineq] = []
    for f in range(free):
        e = tuple(Fraction(int(g == f)) for g in range(free))
        box.append((e, Fraction(1)))
        box.append((tuple(-c for c in e), Fraction(0)))

    rows = []
    for k in active:
        ball = system.constraints[k]
        coeffs = tuple(Fraction(Q[k][rank + f]) for f in range(free))
        lo = ball.center.value - ball.radius - base[k]
        hi = ball.center.value + ball.radius - base[k]
        span_lo = sum((c for c in coeffs if c < 0), Fraction(0))
        span_hi = sum((c for c in coeffs if c > 0), Fraction(0))
        # need lo <= coeffs . y + z <= hi for some integer z, coeffs . y in [span_lo, span_hi]
        shifts = range(_ceil(lo - span_hi), _floor(hi - span_lo) + 1)
        rows.append((coeffs, lo, hi, shifts))

    def extend(depth: int, system_so_far: list[Ineq]) -> list[Fraction] | None:
        if depth == len(rows):
            return fm_solve(system_so_far, free)
        coeffs, lo, hi, shifts = rows[depth]
        for z in shifts:
            trial = system_so_far + [
                (coeffs, hi - z),
                (tuple(-c for c in coeffs), z - lo),
            ]
            if fm_solve(trial, free) is None:
                continue
            found = extend(depth + 1, trial)
            if found is not None:
                return found
        return None

    return extend(0, box)


# independent oracle and sampled verification ------------------------------


def exhaustive_solve(system: LinearSystem, max_denominator: int) -> list[Q1] | None:
    """Search all points of the grids ``(1/q) Z^n``, ``q <= max_denominator``, for a solution.

    Shares no code with :func:`solve_torus_system`.
    """
    for q in range(1, max_denominator + 1):
        rhs = [c.value * q for c in system.constants]
        if any(v.denominator != 1 for v in rhs):
            continue
        rhs_arr = np.array([int(v) for v in rhs], dtype=np.int64)
        axes = []
        for ball in system.constraints:
            lo = _ceil((ball.center.value - ball.radius) * q)
            hi = _floor((ball.center.value + ball.radius) * q)
            ks = sorted({k % q for k in range(lo, hi + 1)})
            axes.append(np.array(ks, dtype=np.int64))
        if any(len(a) == 0 for a in axes):
            continue
        grids = np.meshgrid(*axes, indexing="ij")
        K = np.stack([g.ravel() for g in grids])  # n x N
        lhs = np.array(system.coefficients, dtype=np.int64) @ K
        ok = np.all((lhs - rhs_arr[:, None]) % q == 0, axis=0)
        hits = np.flatnonzero(ok)
        if hits.size:
            col = K[:, hits[0]]
            return [Q1(Fraction(int(k), q)) for k in col]
    return None


@dataclass
class StarReport:
    instances: int = 0
    oracle_solved: int = 0
    solver_solved: int = 0
    disagreements: list[dict] = field(default_factory=list)
    unsound: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.unsound

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "oracle_solved": self.oracle_solved,
            "solver_solved": self.solver_solved,
            "disagreements": self.disagreements,
            "unsound": self.unsound,
        }


def random_system(
    rng: random.Random,
    max_unknowns: int = 3,
    max_coefficient: int = 10,
    max_denominator: int = 48,
) -> LinearSystem:
    """Random system; about half are planted around a known rational solution."""
    n = rng.randint(1, max_unknowns)
    m = rng.randint(1, n)
    B = [[rng.randint(-max_coefficient, max_coefficient) for _ in range(n)] for _ in range(m)]

    def rand_q1(den_cap: int) -> Q1:
        q = rng.randint(1, den_cap)
        return Q1(Fraction(rng.randrange(q), q))

    if rng.random() < 0.5:
        x = [rand_q1(12) for _ in range(n)]
        r = [sum((b * xi for b, xi in zip(row, x)), Q1(Fraction(0))) for row in B]
        centers = [xi + Q1(Fraction(rng.randint(-3, 3), max_denominator)) for xi in x]
    else:
        r = [rand_q1(6) for _ in range(m)]
        centers = [rand_q1(max_denominator) for _ in range(n)]
    radii = [Fraction(rng.randint(1, 8), 64) for _ in range(n)]
    balls = tuple(Ball(c, rad, closed=True) for c, rad in zip(centers, radii))
    return LinearSystem(tuple(tuple(row) for row in B), tuple(r), balls)


def verify_star(
    count: int,
    seed: int = 0,
    max_unknowns: int = 3,
    max_coefficient: int = 10,
    max_denominator: int = 48,
) -> StarReport:
    """Check the solver against the exhaustive oracle on ``count`` random systems.

    A disagreement is an instance where the oracle finds a solution and the
    solver does not; an unsound result is a solver output that fails
    substitution.
    """
    rng = random.Random(seed)
    report = StarReport()
    for _ in range(count):
        system = random_system(rng, max_unknowns, max_coefficient, max_denominator)
        report.instances += 1
        found = exhaustive_solve(system, max_denominator)
        sol = solve_torus_system(system)
        if found is not None:
            report.oracle_solved += 1
        if sol is not None:
            report.solver_solved += 1
            if not system.is_solution(sol):
                report.unsound.append({"system": system.to_json(), "x": [str(v) for v in sol]})
        if found is not None and sol is None:
            report.disagreements.append(
                {"system": system.to_json(), "oracle": [str(v) for v in found]}
            )
    return report


def format_solution(x: list[Q1] | None) -> str:
    return "UNSAT" if x is None else " ".join(str(v) for v in x)


__all__ = [
    "LinearSystem",
    "MalformedSystem",
    "StarReport",
    "determinant",
    "exhaustive_solve",
    "fm_solve",
    "format_fraction",
    "format_solution",
    "matmul",
    "parse_fraction",
    "random_system",
    "simplest_between",
    "smith_normal_form",
    "solve_torus_system",
    "verify_star",
]
