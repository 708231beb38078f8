import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import SYMBOLS, integer_intervals, oracle_classify, relations_holding
from qxgraph.intervals import (AllenRelation, AllenRelationSet, COMPOSITION_MASKS, Interval,
                               classify_intervals, compose, converse, holds)

R = AllenRelation
ALL = list(AllenRelation)


def iv(lo, hi):
    return Interval(lo, hi)


def test_symbol_order_and_roundtrip():
    assert tuple(r.symbol for r in ALL) == SYMBOLS
    for i, s in enumerate(SYMBOLS):
        assert R.from_symbol(s) == i
        assert R(i).symbol == s
    with pytest.raises(ValueError):
        R.from_symbol("xx")


@pytest.mark.parametrize("lo,hi", [(1, 1), (2, 1)])
def test_degenerate_interval_rejected(lo, hi):
    with pytest.raises(ValueError):
        Interval(lo, hi)


@pytest.mark.parametrize("a,b,expected", [
    ((0, 2), (3, 5), R.P),
    ((0, 2), (0, 2), R.EQ),
    ((0, 4), (2, 6), R.O),
])
def test_classify_examples(a, b, expected):
    assert classify_intervals(iv(*a), iv(*b)) == expected
    assert oracle_classify(a, b) == expected.symbol


@pytest.mark.parametrize("r,expected", [(R.P, R.PI), (R.EQ, R.EQ), (R.O, R.OI)])
def test_converse_examples(r, expected):
    assert converse(r) == expected
    assert r.converse() == expected


def test_holds_examples():
    assert holds(iv(0, 2), R.P, iv(3, 5))
    assert not holds(iv(0, 2), R.M, iv(3, 5))
    assert holds(iv(0, 4), R.O, iv(2, 6))


def test_classification_matches_definitions_exhaustively():
    ivs = integer_intervals(6)
    for a, b in itertools.product(ivs, repeat=2):
        r = classify_intervals(iv(*a), iv(*b))
        assert r.symbol == oracle_classify(a, b)
        assert [x for x in ALL if holds(iv(*a), x, iv(*b))] == [r]


def test_converse_coherence_exhaustive():
    ivs = integer_intervals(6)
    for a, b in itertools.product(ivs, repeat=2):
        assert classify_intervals(iv(*a), iv(*b)) == converse(classify_intervals(iv(*b), iv(*a)))


def test_converse_is_involution():
    for r in ALL:
        assert converse(converse(r)) == r


@pytest.mark.parametrize("r1,r2,expected", [
    (R.P, R.P, {R.P}),
    (R.M, R.M, {R.P}),
])
def test_compose_examples(r1, r2, expected):
    assert compose(r1, r2) == AllenRelationSet(expected)


def test_compose_identity():
    for r in ALL:
        assert compose(R.EQ, r) == AllenRelationSet([r]) == compose(r, R.EQ)


def test_table_matches_witness_enumeration(composition_oracle):
    for r1, r2 in itertools.product(ALL, repeat=2):
        expected = composition_oracle[r1.symbol, r2.symbol]
        assert {x.symbol for x in compose(r1, r2)} == expected, (r1, r2)


def test_compose_converse_law():
    for r1, r2 in itertools.product(ALL, repeat=2):
        assert compose(r1, r2).converse() == compose(converse(r2), converse(r1))


def test_set_composition_is_union_of_atoms():
    sets = [AllenRelationSet(["p", "o"]), AllenRelationSet(["d", "s", "eq"]), AllenRelationSet.full()]
    for s1, s2 in itertools.product(sets, repeat=2):
        expected = AllenRelationSet()
        for a in s1:
            for b in s2:
                expected = expected | compose(a, b)
        assert compose(s1, s2) == expected


def test_set_operations():
    full = AllenRelationSet.full()
    assert len(full) == 13
    s = AllenRelationSet(["p", R.M, 2])
    assert "p" in s and R.O in s and R.D not in s
    assert len(~s) == 10
    assert (s & AllenRelationSet(["p", "d"])) == {R.P}
    assert (s | AllenRelationSet(["d"])) == {R.P, R.M, R.O, R.D}
    assert (s - AllenRelationSet(["p"])) == {R.M, R.O}
    assert list(s) == [R.P, R.M, R.O]
    assert repr(s) == "{p, m, o}"


def test_mask_rows_are_nonempty():
    assert all(m for row in COMPOSITION_MASKS for m in row)


def test_epsilon_snaps_near_equal_endpoints():
    a, b = iv(0, 2.0), iv(2.001, 5)
    assert classify_intervals(a, b) == R.P
    assert classify_intervals(a, b, eps=0.01) == R.M
    assert holds(a, R.M, b, eps=0.01)
    assert not holds(a, R.P, b, eps=0.01)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw):
    lo = draw(finite)
    hi = draw(finite.filter(lambda v: v > lo))
    return Interval(lo, hi)


@given(intervals(), intervals(), st.sampled_from([0.0, 1e-3, 0.5, 10.0]))
def test_exactly_one_relation_holds_with_any_epsilon(a, b, eps):
    held = [r for r in ALL if holds(a, r, b, eps)]
    assert held == [classify_intervals(a, b, eps)]


@given(intervals(), intervals())
def test_float_classification_matches_definitions(a, b):
    assert relations_holding((a.lo, a.hi), (b.lo, b.hi)) == [classify_intervals(a, b).symbol]


@given(intervals(), intervals(), st.floats(0, 0.999))
def test_converse_coherence_with_small_epsilon(a, b, frac):
    eps = frac * min(a.hi - a.lo, b.hi - b.lo)
    assert classify_intervals(a, b, eps) == converse(classify_intervals(b, a, eps))
