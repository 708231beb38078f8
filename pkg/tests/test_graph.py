import itertools

import pytest

from oracles import oracle_box_relation
from qxgraph.errors import DuplicateEntry, InvalidScene, UnknownObject, UnknownPair
from qxgraph.graph import QXG, QXGBuilder, build, density, describe, stats
from qxgraph.rectangles import BBox, RARelation
from qxgraph.scene import Detection, FrameDetections, Scene
from qxgraph.sceneio import SynthParams, synth_scene
from qxgraph.serialize import decode_qxg, encode_qxg

rel = RARelation.parse


@pytest.fixture(scope="module")
def running_qxg(running_scene):
    return build(running_scene)


def test_running_example_relations(running_qxg):
    g = running_qxg
    assert g.relation_at("o2", "o3", 1) == rel("(p,pi)")
    assert g.relation_at("o1", "o3", 2) == rel("(p,pi)")
    assert g.relation_at("o3", "o4", 2) == rel("(p,oi)")
    assert g.relation_at("o1", "o3", 3) == rel("(di,pi)")
    # o3 and o4 share frames 2 and 3 only, with the same relation
    assert dict(g.edge_vector("o3", "o4")) == {2: rel("(p,oi)"), 3: rel("(p,oi)")}
    for other in ("o1", "o2", "o4"):
        assert g.relation_at("o3", other, 4) is None
    assert set(g.objects) == {"o1", "o2", "o3", "o4"}
    assert len(g.edges) == 6 and g.frame_count == 4


def test_relation_at_orientation(running_qxg):
    assert running_qxg.relation_at("o3", "o1", 3) == rel("(d,p)")
    assert running_qxg.relation_at("o3", "o4", 4) is None
    with pytest.raises(UnknownObject):
        running_qxg.relation_at("o1", "o9", 1)


def test_methods_agree_on_running_example(running_scene, running_qxg):
    assert build(running_scene, "bruteforce") == running_qxg


def test_update_and_canonical_orientation():
    g = QXG()
    g.update(1, "o2", "o3", rel("(p,pi)"))
    assert set(g.objects) == {"o2", "o3"}
    assert g.edges == {("o2", "o3"): {1: rel("(p,pi)").flat}}
    h = QXG()
    h.update(1, "o3", "o2", rel("(pi,p)"))
    assert h.edges == g.edges
    g.update(1, "o2", "o3", rel("(p,pi)"))
    assert g.n_entries == 1
    with pytest.raises(DuplicateEntry):
        g.update(1, "o2", "o3", rel("(p,p)"))
    with pytest.raises(ValueError):
        g.update(0, "o2", "o3", rel("(p,p)"))
    with pytest.raises(ValueError):
        g.update(1, "o2", "o2", rel("(eq,eq)"))


def test_density():
    g = QXG()
    for o in ("a", "b", "c"):
        g.add_object(o)
    assert density(g) == 0.0
    g.update(1, "a", "b", rel("(p,p)"))
    assert density(g) == pytest.approx(1 / 3)
    assert density(QXG()) == 0.0


def test_density_running_example(running_qxg):
    assert density(running_qxg) == 1.0
    assert density(running_qxg, 4) == 1.0


def test_never_cooccurring_objects_have_no_edges():
    scene = Scene.from_frames("solo", [[("a", "car", (0, 0, 1, 1))], [("b", "car", (0, 0, 1, 1))]])
    g = build(scene)
    assert len(g.objects) == 2 and not g.edges and density(g) == 0.0


def test_stats_running_example(running_qxg):
    st = stats(running_qxg)
    assert (st.objects, st.edges, st.frames) == (4, 6, 4)
    # 3 pairs in frames 1 and 4, 6 pairs in frames 2 and 3
    assert st.relations_per_frame == {1: 3, 2: 6, 3: 6, 4: 3}
    assert st.entries == 18
    assert st.lifespans == {"o1": (1, 4), "o2": (1, 4), "o3": (1, 3), "o4": (2, 4)}
    assert st.serialized_bytes == len(encode_qxg(running_qxg))
    assert "objects=4" in st.summary()


def test_stats_empty():
    st = stats(build(Scene("empty")))
    assert (st.objects, st.edges, st.frames, st.entries, st.density) == (0, 0, 0, 0, 0.0)
    assert st.relations_per_frame == {} and st.lifespans == {}


def test_stats_survive_serialization():
    g = build(synth_scene(42, 50, 40))
    assert stats(decode_qxg(encode_qxg(g))).to_dict() == stats(g).to_dict()


def test_describe(running_qxg):
    lines = describe(running_qxg, "o2", "o3")
    assert lines == ["o2 precedes o3 on x, preceded-by on y @ frames 1-3"]
    assert describe(running_qxg, "o3", "o4") == ["o3 precedes o4 on x, overlapped-by on y @ frames 2-3"]
    assert describe(running_qxg, "o4", "o3") == ["o4 preceded-by o3 on x, overlaps on y @ frames 2-3"]
    assert describe(running_qxg, "o1", "o4") == [
        "o1 precedes o4 on x, preceded-by on y @ frames 2-2",
        "o1 finished-by o4 on x, preceded-by on y @ frames 3-3",
        "o1 overlaps o4 on x, preceded-by on y @ frames 4-4",
    ]


def test_describe_errors():
    g = QXG()
    g.add_object("a")
    g.add_object("b")
    with pytest.raises(UnknownPair):
        describe(g, "a", "b")
    with pytest.raises(UnknownObject):
        describe(g, "a", "zz")


def test_describe_splits_runs_on_gaps():
    g = QXG()
    for k in (1, 2, 4):
        g.update(k, "a", "b", rel("(p,p)"))
    assert describe(g, "a", "b") == ["a precedes b on x, precedes on y @ frames 1-2",
                                     "a precedes b on x, precedes on y @ frames 4-4"]


def _check_against_scene(g, scene):
    expected = {}
    for f in scene.frames:
        for d1, d2 in itertools.combinations(sorted(f.entries, key=lambda d: d.id), 2):
            r = oracle_box_relation(tuple(d1.bbox.as_list()), tuple(d2.bbox.as_list()))
            expected.setdefault((d1.id, d2.id), {})[f.frame_index] = rel("(%s,%s)" % r).flat
    assert g.edges == expected
    assert set(g.objects) == set(scene.object_ids())


@pytest.mark.parametrize("seed", range(6))
def test_build_matches_oracle_and_presence(seed):
    scene = synth_scene(seed, 12, 15, SynthParams(birth_rate=0.4, death_rate=0.1, step=3, extent=20))
    g = build(scene)
    _check_against_scene(g, scene)
    assert build(scene, "bruteforce") == g
    for (a, b), vec in g.edges.items():
        for k in vec:
            assert scene.bbox(a, k) is not None and scene.bbox(b, k) is not None
        assert g.relation_at(a, b, min(vec)) == g.relation_at(b, a, min(vec)).converse()


def test_incremental_equals_batch():
    scene = synth_scene(3, 20, 10)
    batch = build(scene)
    b = QXGBuilder()
    snapshots = []
    for f in scene.frames:
        b.process_frame(f)
        snapshots.append(b.qxg.n_entries)
    assert b.qxg == batch
    assert snapshots == sorted(snapshots)
    g = QXG()
    for f in scene.frames:
        for d1, d2 in itertools.combinations(f.entries, 2):
            g.update(f.frame_index, d1.id, d2.id, RARelation.from_flat(
                13 * "p m o d s f eq pi mi oi di si fi".split().index(
                    oracle_box_relation(tuple(d1.bbox.as_list()), tuple(d2.bbox.as_list()))[0])
                + "p m o d s f eq pi mi oi di si fi".split().index(
                    oracle_box_relation(tuple(d1.bbox.as_list()), tuple(d2.bbox.as_list()))[1])))
        for d in f.entries:
            g.add_object(d.id, d.class_label)
    g.objects = {k: g.objects[k] for k in batch.objects}
    for o in g.objects.values():
        o.class_label = batch.objects[o.id].class_label
    assert g == batch


@pytest.mark.parametrize("method", ["acquisition", "bruteforce"])
def test_threads_give_identical_graph(method):
    scene = synth_scene(11, 60, 5)
    assert build(scene, method, threads=3) == build(scene, method)


def test_builder_rejects_bad_frames():
    b = QXGBuilder()
    b.process_frame(FrameDetections(2, ()))
    with pytest.raises(InvalidScene):
        b.process_frame(FrameDetections(2, ()))
    with pytest.raises(InvalidScene):
        FrameDetections(1, (Detection("a", "car", BBox(0, 0, 1, 1)), Detection("a", "car", BBox(0, 0, 1, 1))))
    with pytest.raises(ValueError):
        QXGBuilder(method="magic")
    with pytest.raises(ValueError):
        QXGBuilder(threads=0)


def test_scene_level_validation():
    with pytest.raises(InvalidScene):
        Scene.from_frames("bad", [[("a", "car", (0, 0, 0, 1))]])
    with pytest.raises(InvalidScene):
        Scene("bad", "x", (FrameDetections(2, ()),))


def test_epsilon_is_applied():
    scene = Scene.from_frames("eps", [[("a", "car", (0, 0, 2, 2)), ("b", "car", (2.001, 0, 2, 2))]])
    assert build(scene).relation_at("a", "b", 1) == rel("(p,eq)")
    assert build(scene, eps=0.01).relation_at("a", "b", 1) == rel("(m,eq)")
    assert build(scene, "bruteforce", eps=0.01).relation_at("a", "b", 1) == rel("(m,eq)")


def test_frame_results_report_queries(running_scene):
    results = []
    build(running_scene, results=results)
    assert [r.pairs for r in results] == [3, 6, 6, 3]
    assert all(r.queries <= 26 * r.pairs for r in results)
    bf = []
    build(running_scene, "bruteforce", results=bf)
    assert [r.queries for r in bf] == [169 * r.pairs for r in bf]
