import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import oracle_box_relation
from qxgraph.acquisition import (ALLEN, RECTANGLE, BoxOracle, IntervalOracle, QualitativeGraph,
                                 acquire_pair, acquire_pair_flat, bruteforce_pair, geqca,
                                 path_consistency)
from qxgraph.errors import Inconsistent
from qxgraph.intervals import AllenRelationSet, Interval, classify_intervals
from qxgraph.rectangles import BBox, RARelation, RARelationSet, classify_boxes


def random_boxes(rng, n, span=12, size=5):
    # small integer grid so meets/starts/finishes/equals actually occur
    return {f"v{i}": BBox(rng.randint(0, span), rng.randint(0, span), rng.randint(1, size), rng.randint(1, size))
            for i in range(n)}


def truth(boxes, a, b):
    return RARelation.parse("(%s,%s)" % oracle_box_relation(
        *[(bb.x, bb.y, bb.w, bb.h) for bb in (boxes[a], boxes[b])]))


class SpyOracle(BoxOracle):
    def __init__(self, boxes):
        super().__init__(boxes)
        self.per_pair = {}

    def ask(self, xi, r, xj):
        self.per_pair[xi, xj] = self.per_pair.get((xi, xj), 0) + 1
        return super().ask(xi, r, xj)


def test_geqca_two_boxes():
    boxes = {"a": BBox(0, 0, 4, 2), "b": BBox(2, 4, 4, 2)}
    g = geqca(["a", "b"], BoxOracle(boxes))
    assert g.label("a", "b") == RARelationSet(["(o,p)"])
    assert g.label("b", "a") == RARelationSet(["(oi,pi)"])


def test_geqca_identical_boxes():
    boxes = {v: BBox(1, 1, 2, 2) for v in "abc"}
    g = geqca(list("abc"), BoxOracle(boxes))
    for a, b in itertools.combinations("abc", 2):
        assert g.label(a, b) == RARelationSet(["(eq,eq)"])


def test_geqca_collinear_boxes_pc_saves_queries():
    boxes = {"x1": BBox(0, 0, 2, 2), "x2": BBox(10, 0, 2, 2), "x3": BBox(20, 0, 2, 2)}
    with_pc = SpyOracle(boxes)
    g = geqca(["x1", "x2", "x3"], with_pc)
    without = SpyOracle(boxes)
    g2 = geqca(["x1", "x2", "x3"], without, use_pc=False)
    for gg in (g, g2):
        assert gg.label("x1", "x3") == RARelationSet(["(p,eq)"])
        assert gg.label("x1", "x2") == RARelationSet(["(p,eq)"])
        assert gg.label("x2", "x3") == RARelationSet(["(p,eq)"])
    assert without.queries == g2.queries == 3 * 169
    assert with_pc.queries == g.queries < without.queries
    # once x1-x2 and x1-x3 are known, only the y-equal candidates remain for x2-x3
    assert with_pc.per_pair["x2", "x3"] <= 13


def test_pc_prunes_with_known_path():
    g = QualitativeGraph(["x1", "x2", "x3"], ALLEN)
    g.constrain("x1", "x2", AllenRelationSet(["p"]))
    g.constrain("x2", "x3", AllenRelationSet(["p"]))
    path_consistency(g)
    assert g.label("x1", "x3") == AllenRelationSet(["p"])


def test_pc_leaves_real_configuration_alone():
    ivs = {"a": Interval(0, 3), "b": Interval(2, 6), "c": Interval(6, 9)}
    g = geqca(list(ivs), IntervalOracle(ivs), ALLEN)
    before = dict(g.labels)
    path_consistency(g)
    assert g.labels == before
    assert g.label("a", "b") == AllenRelationSet(["o"])
    assert g.label("b", "c") == AllenRelationSet(["m"])
    assert g.label("a", "c") == AllenRelationSet(["p"])


def test_pc_detects_inconsistency():
    g = QualitativeGraph(["x1", "x2", "x3"], ALLEN)
    g.constrain("x1", "x2", AllenRelationSet(["m"]))
    g.constrain("x2", "x3", AllenRelationSet(["m"]))
    g.constrain("x1", "x3", AllenRelationSet(["eq"]))
    with pytest.raises(Inconsistent):
        path_consistency(g)
    assert not g.consistent


def test_pc_rejects_already_empty_label():
    g = QualitativeGraph(["a", "b"], ALLEN)
    g.constrain("a", "b", 0)
    with pytest.raises(Inconsistent):
        path_consistency(g)


def test_pc_is_noop_below_three_variables():
    g = QualitativeGraph(["a", "b"], RECTANGLE)
    g.constrain("a", "b", RARelationSet(["(o,p)", "(p,p)"]))
    path_consistency(g)
    assert len(g.label("a", "b")) == 2


def test_inconsistent_oracle_is_reported():
    class Liar:
        def ask(self, xi, r, xj):
            return False
    with pytest.raises(Inconsistent):
        geqca(["a", "b"], Liar(), ALLEN)


def test_geqca_needs_two_variables():
    with pytest.raises(ValueError):
        geqca(["a"], BoxOracle({"a": BBox(0, 0, 1, 1)}))


@pytest.mark.parametrize("seed", range(12))
def test_geqca_soundness(seed):
    rng = random.Random(seed)
    n = 3 + seed % 6
    boxes = random_boxes(rng, n)
    names = list(boxes)
    g = geqca(names, BoxOracle(boxes))
    for a, b in itertools.combinations(names, 2):
        assert g.label(a, b) == RARelationSet([truth(boxes, a, b)])


def test_geqca_allen_soundness():
    rng = random.Random(5)
    for _ in range(20):
        ivs = {}
        for i in range(6):
            lo = rng.randint(0, 8)
            ivs[i] = Interval(lo, lo + rng.randint(1, 4))
        g = geqca(list(ivs), IntervalOracle(ivs), ALLEN)
        for a, b in itertools.combinations(ivs, 2):
            assert g.label(a, b) == AllenRelationSet([classify_intervals(ivs[a], ivs[b])])


def test_geqca_is_deterministic():
    boxes = random_boxes(random.Random(3), 5)
    g1 = geqca(list(boxes), BoxOracle(boxes))
    g2 = geqca(list(boxes), BoxOracle(boxes))
    assert g1.labels == g2.labels and g1.queries == g2.queries


def _loosened_graph(rng, boxes, algebra=RECTANGLE):
    # every label is a random superset of the true relation
    names = list(boxes)
    g = QualitativeGraph(names, algebra)
    for a, b in itertools.combinations(names, 2):
        t = truth(boxes, a, b).flat
        extra = sum(1 << rng.randrange(169) for _ in range(rng.choice([0, 3, 40, 160])))
        g.constrain(a, b, (1 << t) | extra)
    return g


@pytest.mark.parametrize("seed", range(8))
def test_pc_safety_monotonicity_and_fixpoint(seed):
    rng = random.Random(100 + seed)
    boxes = random_boxes(rng, 3 + seed % 4)
    g = _loosened_graph(rng, boxes)
    before = dict(g.labels)
    path_consistency(g)
    names = list(boxes)
    for (i, j), m in g.labels.items():
        assert m & ~before[i, j] == 0
        assert m >> truth(boxes, names[i], names[j]).flat & 1
    again = g.copy()
    path_consistency(again)
    assert again.labels == g.labels
    n = len(names)
    for i, j, k in itertools.permutations(range(n), 3):
        assert g.get(i, j) & ~RECTANGLE.compose(g.get(i, k), g.get(k, j)) == 0


@pytest.mark.parametrize("b1,b2,expected", [
    (BBox(0, 0, 4, 2), BBox(2, 4, 4, 2), "(o,p)"),
    (BBox(3, 3, 1, 1), BBox(3, 3, 1, 1), "(eq,eq)"),
])
def test_acquire_pair_examples(b1, b2, expected):
    r, q = acquire_pair(b1, b2)
    assert r == RARelation.parse(expected)
    assert q <= 26


coord = st.integers(-10, 10)
size = st.integers(1, 6)
boxes_st = st.builds(BBox, coord, coord, size, size)


@given(boxes_st, boxes_st)
@settings(max_examples=300)
def test_pair_strategies_agree(b1, b2):
    expected = classify_boxes(b1, b2)
    r, q = acquire_pair(b1, b2)
    assert r == expected and 2 <= q <= 26
    assert q == int(r.rx) + int(r.ry) + 2
    rf, qf = acquire_pair_flat(b1, b2)
    assert rf == expected and qf <= 169
    rb, qb = bruteforce_pair(b1, b2)
    assert rb == expected and qb == 169


def test_graph_copy_and_reverse_access():
    g = QualitativeGraph(["a", "b", "c"], ALLEN)
    g.constrain("b", "a", AllenRelationSet(["p"]))
    assert g.label("a", "b") == AllenRelationSet(["pi"])
    h = g.copy()
    h.constrain("a", "c", AllenRelationSet(["d"]))
    assert len(g.label("a", "c")) == 13
    assert len(h) == 3
    with pytest.raises(ValueError):
        QualitativeGraph(["a", "a"])
