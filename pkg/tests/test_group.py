from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import q1s
from nonradon.group import (
    Ball,
    MalformedRational,
    Q1,
    Region,
    ZERO,
    ball_sum,
    covers_circle,
    dist,
    parse_fraction,
    q1,
)
from oracles import ball_sum_by_points, grid


def arc(c, r):
    return Ball(q1(c), Fraction(r))


# arithmetic --------------------------------------------------------------------


@pytest.mark.parametrize(
    "x, y, expected",
    [("1/2", "2/3", "1/6"), ("3/4", "1/4", "0/1"), ("0", "5/7", "5/7")],
)
def test_addition_examples(x, y, expected):
    assert str(q1(x) + q1(y)) == expected


@pytest.mark.parametrize("x, y, d", [("0", "3/4", "1/4"), ("1/8", "7/8", "1/4"), ("2/5", "2/5", "0")])
def test_distance_examples(x, y, d):
    assert dist(q1(x), q1(y)) == parse_fraction(d)


def test_normalization():
    assert q1(-1, 3) == q1(2, 3)
    assert q1(7, 3) == q1(1, 3)
    assert str(q1(2, 4)) == "1/2"
    assert str(ZERO) == "0/1"


@given(q1s(), q1s(), q1s())
def test_group_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x + ZERO == x
    assert x + (-x) == ZERO
    assert x - y == x + (-y)


@given(q1s())
def test_canonical_form(x):
    assert 0 <= x.value < 1
    assert Q1(x.value) == x
    assert Q1.parse(str(x)) == x


@given(q1s(), q1s(), q1s())
def test_metric_invariance(x, y, t):
    assert dist(x + t, y + t) == dist(x, y)
    assert dist(x, y) == dist(y, x)
    assert 0 <= dist(x, y) <= Fraction(1, 2)


@given(q1s(1000), q1s(1000), q1s(1000))
def test_triangle_inequality(x, y, z):
    assert dist(x, z) <= dist(x, y) + dist(y, z)


@pytest.mark.parametrize("text, position", [("x", 0), ("1/", 2), ("1.5", 1), ("1/2z", 3), ("1/0", 2), ("", 0)])
def test_malformed_rationals_report_position(text, position):
    with pytest.raises(MalformedRational) as info:
        parse_fraction(text)
    assert info.value.position == position


def test_ball_radius_bounds():
    with pytest.raises(ValueError):
        Ball(ZERO, Fraction(0))
    with pytest.raises(ValueError):
        Ball(ZERO, Fraction(3, 5))


def test_ball_membership_open_and_closed():
    b = arc("0", "1/8")
    assert q1(1, 16) in b and q1(1, 8) not in b and q1(15, 16) in b
    assert q1(1, 8) in Ball(ZERO, Fraction(1, 8), closed=True)


# ball sums -----------------------------------------------------------------------


def test_ball_sum_examples():
    assert ball_sum(arc("0", "1/8"), arc("1/2", "1/8")) == arc("1/2", "1/4").region()
    assert ball_sum(arc("1/3", "1/10"), arc("0", "1/5")) == arc("1/3", "3/10").region()
    assert ball_sum(arc("0", "3/8"), arc("0", "3/8")).covers_circle()


def test_ball_sum_at_half_is_circle_minus_point():
    s = ball_sum(arc("1/4", "1/4"), arc("0", "1/4"))
    assert not s.covers_circle()
    assert q1(3, 4) not in s
    assert s.measure() == 1
    assert s == Region.full() & ~Region.points([q1(3, 4)])


balls64 = st.builds(
    lambda c, r: Ball(Q1(Fraction(c, 16)), Fraction(r, 16)),
    st.integers(0, 15),
    st.integers(1, 8),
)


@given(balls64, balls64)
def test_ball_sum_matches_pointwise_sums(b1, b2):
    den = 32
    expected = ball_sum_by_points(b1, b2, den)
    got = {p for p in grid(den) if p in ball_sum(b1, b2)}
    assert got == expected


# regions ---------------------------------------------------------------------------


def test_covers_circle_examples():
    assert covers_circle(arc("0", "3/8").region() | arc("1/2", "3/8").region())
    a0 = arc("0", "1/8").region() | arc("1/2", "1/8").region()
    assert not covers_circle(a0)
    assert q1(1, 4) not in a0
    assert not covers_circle(Region.empty())


open_arcs = st.lists(
    st.builds(lambda s, l: (Fraction(s, 24), Fraction(l, 24)), st.integers(0, 23), st.integers(1, 23)),
    max_size=5,
)


@given(open_arcs, st.randoms(use_true_random=False))
def test_region_normal_form_order_independent(arcs, rnd):
    shuffled = list(arcs)
    rnd.shuffle(shuffled)
    r1 = Region.union_of(Region.arc(s, l) for s, l in arcs)
    r2 = Region.union_of(Region.arc(s, l) for s, l in shuffled)
    assert r1 == r2
    assert Region.from_open_arcs(shuffled) == r1


@given(open_arcs, open_arcs)
def test_region_algebra_pointwise(a, b):
    ra = Region.from_open_arcs(a)
    rb = Region.from_open_arcs(b)
    pts = grid(96)  # every endpoint and every midpoint of adjacent endpoints
    for p in pts:
        assert (p in ra | rb) == (p in ra or p in rb)
        assert (p in ra & rb) == (p in ra and p in rb)
        assert (p in ~ra) == (p not in ra)
        assert (p in ~~ra) == (p in ra)
    assert ~~ra == ra
    assert (ra & rb).is_subset(ra)
    assert ra.is_subset(ra | rb)


@given(open_arcs)
def test_measure_of_complement(a):
    r = Region.from_open_arcs(a)
    assert r.measure() + (~r).measure() == 1
    assert 0 <= r.measure() <= 1


def test_region_json_uses_strings():
    doc = arc("1/2", "1/8").region().to_json()
    assert doc["full"] is False
    assert all(isinstance(v, str) for pair in doc["arcs"] for v in pair)
