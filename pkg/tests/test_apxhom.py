from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import q1s
from nonradon.apxhom import (
    MultiplierHom,
    check_additivity,
    delta_set,
    discrepancy_c,
    eval_f,
    random_pairs,
    refute,
)
from nonradon.group import Q1, ZERO, q1
from nonradon.ideal import check_witness
from nonradon.index import IndexElement, enumerate_index, make_element

A0 = make_element([("0", "1/8", "0"), ("1/2", "1/8", "1/2")])
PREFIX = enumerate_index(300)
A0_POS = PREFIX.index(A0)


@pytest.mark.parametrize("x, value", [("1/16", "1/16"), ("7/16", "15/16"), ("1/4", "0")])
def test_eval_f_examples(x, value):
    assert eval_f(A0, Q1.parse(x)) == Q1.parse(value)


def test_discrepancy_examples():
    assert A0_POS in discrepancy_c(q1(1, 16), q1(1, 16), PREFIX)
    assert A0_POS not in discrepancy_c(q1(1, 16), q1(7, 16), PREFIX)
    assert discrepancy_c(ZERO, ZERO, PREFIX) == []


def test_additivity_examples():
    r = check_additivity(q1(1, 16), q1(7, 16), PREFIX)
    assert r.ok and not r.violations
    z = check_additivity(ZERO, ZERO, PREFIX)
    assert z.ok and z.discrepancies == []


@settings(max_examples=40)
@given(q1s(120), q1s(120))
def test_additive_wherever_all_three_points_are_inside(x, y):
    r = check_additivity(x, y, PREFIX)
    assert r.violations == []
    assert check_witness((x, y, x + y), [PREFIX[p] for p in r.discrepancies])


def test_normalization_on_prefix():
    assert all(eval_f(a, ZERO) == ZERO for a in enumerate_index(1000))


@settings(max_examples=60)
@given(st.integers(0, len(PREFIX) - 1), q1s(200), st.integers(1, 50))
def test_locality(pos, x, shift):
    a = PREFIX[pos]
    i = a.locate(x)
    others = [k for k in range(a.n) if k != i]
    if not others:
        return
    # move every other designated point inside its own ball; f_a(x) must not change
    moved = list(a.points)
    for k in others:
        b = a.balls[k]
        moved[k] = b.center + Q1(b.radius * Fraction(shift, 51))
    changed = IndexElement(a.balls, tuple(moved))
    assert eval_f(changed, x) == eval_f(a, x)


def test_delta_examples():
    assert A0_POS in delta_set(MultiplierHom.zero(), q1(1, 16), PREFIX)
    assert A0_POS not in delta_set(MultiplierHom.identity(), q1(1, 16), PREFIX)
    for g in (MultiplierHom.zero(), MultiplierHom.identity(), MultiplierHom.seeded(4, 5)):
        assert delta_set(g, ZERO, PREFIX) == []


def test_multiplier_homs():
    for text in ("zero", "identity", "seed:3:5", "fixed:1,-2,3"):
        assert str(MultiplierHom.parse(text)) == text
    g = MultiplierHom.seeded(7, 5)
    cs = [g.multiplier(p) for p in range(500)]
    assert cs == [MultiplierHom.seeded(7, 5).multiplier(p) for p in range(500)]
    assert all(-5 <= c <= 5 for c in cs) and len(set(cs)) == 11
    f = MultiplierHom.fixed([2, -1])
    assert f(0, q1(1, 3)) == q1(2, 3) and f(1, q1(1, 3)) == q1(2, 3) and f(5, q1(1, 3)) == ZERO
    with pytest.raises(ValueError):
        MultiplierHom.parse("linear")


@given(q1s(), st.integers(-5, 5), st.integers(-5, 5))
def test_multipliers_are_homomorphisms(x, c, d):
    g = MultiplierHom.fixed([c])
    assert g(0, x + x) == g(0, x) + g(0, x)
    assert MultiplierHom.fixed([c + d])(0, x) == g(0, x) + MultiplierHom.fixed([d])(0, x)


def test_random_pairs_are_reproducible():
    assert random_pairs(5, seed=2) == random_pairs(5, seed=2)
    assert all(max(x.denominator, y.denominator) <= 120 for x, y in random_pairs(50))


def test_refute_zero_sample_is_empty():
    r = refute(MultiplierHom.seeded(1, 5), [ZERO], 200, [10, 100, 200], limit=512)
    assert r.trends["0/1"].values == [0, 0, 0]


def test_refute_report_is_monotone_and_parallel_safe():
    samples = [q1(1, 5), q1(7, 64)]
    one = refute(MultiplierHom.seeded(2, 5), samples, 300, [10, 50, 150, 300], limit=512)
    many = refute(MultiplierHom.seeded(2, 5), samples, 300, [10, 50, 150, 300], limit=512, jobs=4)
    assert one.to_json() == many.to_json() and one.to_csv() == many.to_csv()
    for t in one.trends.values():
        assert all(a <= b for a, b in zip(t.values, t.values[1:]))
    assert one.best_sample in {"1/5", "7/64"}
    assert one.to_csv().splitlines()[0] == "x,m,p_m"


def test_refute_needs_samples():
    with pytest.raises(ValueError):
        refute(MultiplierHom.zero(), [], 10)
