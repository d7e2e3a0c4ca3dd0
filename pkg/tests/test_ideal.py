import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nonradon.group import Region, q1
from nonradon.ideal import (
    PierceResult,
    SizeLimitExceeded,
    TrendReport,
    check_witness,
    geometric_checkpoints,
    ideal_trend,
    pierce_by_partition,
    pierce_number,
    verdict_for,
)
from nonradon.index import enumerate_index, grid_element, make_element
from oracles import pierce_by_subsets

A0 = make_element([("0", "1/8", "0"), ("1/2", "1/8", "1/2")])
A1 = make_element([("0", "3/8", "0")])
A2 = make_element([("1/2", "5/32", "1/2")])
POOL = enumerate_index(300)

subsets = st.lists(st.integers(0, len(POOL) - 1), max_size=7, unique=True).map(lambda ix: [POOL[i] for i in ix])


def test_check_witness_examples():
    assert check_witness([q1(1, 4)], [A0])
    assert not check_witness([], [A0])
    assert check_witness([], [])
    assert not check_witness([q1(1, 16)], [A0])


def test_pierce_examples():
    assert pierce_number([]) == PierceResult(0, ())
    one = pierce_number([A0])
    assert one.size == 1 and check_witness(one.witness, [A0])
    assert one.witness == (q1(1, 8),)  # least boundary point of the complement
    two = pierce_number([A1, A2])
    assert two.size == 2 and check_witness(two.witness, [A1, A2])
    assert check_witness([q1(1, 2), q1(0)], [A1, A2])
    assert (Region.union_of([A1.region, A2.region])).covers_circle()


def test_partition_oracle_examples():
    assert pierce_by_partition([]) == 0
    assert pierce_by_partition([A0]) == 1
    assert pierce_by_partition([A1, A2]) == 2
    assert pierce_by_partition([A1, A2], max_parts=1) is None


@settings(max_examples=80)
@given(subsets)
def test_three_routes_agree(X):
    r = pierce_number(X, limit=100)
    assert r.certificate == "exact"
    assert len(r.witness) == r.size
    assert check_witness(r.witness, X)
    assert r.size == pierce_by_partition(X)
    assert r.size == pierce_by_subsets(X)


@settings(max_examples=60)
@given(subsets, subsets)
def test_ideal_laws(X, Y):
    assert pierce_number([]).size == 0
    for a in X[:3]:
        assert pierce_number([a]).size == 1
    px, py = pierce_number(X), pierce_number(Y)
    assert pierce_number(X[: len(X) // 2]).size <= px.size
    union = X + [a for a in Y if a not in X]
    assert pierce_number(union).size <= px.size + py.size
    assert check_witness(px.witness + py.witness, union)


@settings(max_examples=40)
@given(subsets)
def test_witness_is_deterministic_and_order_free(X):
    shuffled = list(X)
    random.Random(len(X)).shuffle(shuffled)
    assert pierce_number(X) == pierce_number(shuffled)


def test_size_limit_and_heuristic():
    X = [grid_element(q, wide=True) for q in range(1, 40)] + POOL[:200]
    with pytest.raises(SizeLimitExceeded):
        pierce_number(X, limit=4)
    h = pierce_number(X, limit=4, heuristic=True)
    assert h.certificate == "heuristic" and check_witness(h.witness, X)
    exact = pierce_number(X, limit=10_000)
    assert exact.certificate == "exact" and exact.size <= h.size


def test_shared_point_needs_no_search():
    X = [make_element([(f"{k}/97", "1/200", f"{k}/97")]) for k in range(1, 90)]
    r = pierce_number(X, limit=1)
    assert r.size == 1 and r.certificate == "exact" and check_witness(r.witness, X)


def test_result_json_round_trip():
    r = pierce_number([A1, A2])
    assert PierceResult.from_json(r.to_json()) == r
    assert pierce_number([]).to_json() == {"size": 0, "witness": []}
    h = PierceResult(2, (q1(0), q1(1, 2)), "heuristic")
    assert h.to_json()["certificate"] == "heuristic"
    assert PierceResult.from_json(h.to_json()) == h


# trends -----------------------------------------------------------------------------------


def test_verdict_rule():
    assert verdict_for([1, 2, 3, 3, 3]) == "bounded-looking"
    assert verdict_for([1, 2, 3, 3, 4]) == "unbounded-looking"
    assert verdict_for([0]) == "bounded-looking"


def test_geometric_checkpoints():
    assert geometric_checkpoints(1000) == [25, 50, 100, 200, 400, 800, 1000]
    assert geometric_checkpoints(10) == [10]


def test_empty_family_trend():
    t = ideal_trend(lambda p, a: False, [10, 50, 100])
    assert t.values == [0, 0, 0] and t.verdict == "bounded-looking"


def tiny(p, a):
    return a.region.measure() < Fraction(1, 8)


def test_tiny_family_trend():
    marks = [50, 100, 200, 400]
    t = ideal_trend(tiny, marks, limit=512)
    assert t.values == [1, 1, 1, 1] and t.verdict == "bounded-looking"
    members = [a for a in enumerate_index(400) if tiny(0, a)]
    # independent confirmation that one point suffices: the union misses a point
    assert not Region.union_of(a.region for a in members).covers_circle()


def test_frozen_disagreement_trend():
    from nonradon.apxhom import MultiplierHom, delta_set

    x = q1(1, 16)
    members = set(delta_set(MultiplierHom.zero(), x, enumerate_index(400)))
    t = ideal_trend(lambda p, a: p in members, [1, 10, 50, 100, 200, 400], limit=512)
    assert t.values == [1, 2, 2, 2, 2, 3]
    assert not t.heuristic
    small = [a for p, a in enumerate(enumerate_index(10)) if p in members]
    assert pierce_by_partition(small) == 2


def test_trend_does_not_depend_on_jobs():
    marks = [5, 20, 80, 160]

    def member(p, a):
        return p % 3 != 1

    one = ideal_trend(member, marks, limit=512)
    many = ideal_trend(member, list(reversed(marks)), limit=512, jobs=4)
    assert one == many
    assert all(a <= b for a, b in zip(one.values, one.values[1:]))


def test_trend_rejects_bad_checkpoints():
    with pytest.raises(ValueError):
        ideal_trend(lambda p, a: True, [0, 5])


def test_trend_csv():
    t = TrendReport([(10, 1), (20, 2)], "unbounded-looking")
    assert t.to_csv() == "m,p_m\n10,1\n20,2\n# verdict: unbounded-looking\n"
