import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from viewprm import (
    Box,
    CentroidSet,
    Cylinder,
    FileFormatError,
    ObjectNode,
    SceneError,
    SceneGraph,
    extract_centroids,
    load_scene,
    make_gallery_scene,
    make_office_scene,
    save_scene,
)
from viewprm.scenegraph import scene_from_dict, scene_to_dict

UNIT_Y = (0.0, 1.0, 0.0)
EXTENT = (0.4, 0.1, 0.3)


def obj(oid, centroid, weight=1.0, cls="monitor"):
    return ObjectNode(oid, cls, centroid, UNIT_Y, EXTENT, weight)


def test_object_validation_messages_name_the_field():
    with pytest.raises(SceneError, match="id"):
        ObjectNode("", "monitor", (0, 0, 0), UNIT_Y, EXTENT, 1.0)
    with pytest.raises(SceneError, match="weight"):
        obj("m", (0, 0, 0), weight=-0.5)
    with pytest.raises(SceneError, match="extent"):
        ObjectNode("m", "monitor", (0, 0, 0), UNIT_Y, (0.0, 0.1, 0.1), 1.0)
    with pytest.raises(SceneError, match="face_normal"):
        ObjectNode("m", "monitor", (0, 0, 0), (0.0, 2.0, 0.0), EXTENT, 1.0)


def test_scene_validation():
    ws = Box((0, 0, 0), (10, 10, 3))
    with pytest.raises(SceneError, match="duplicate"):
        SceneGraph(ws, (), (obj("a", (1, 1, 1)), obj("a", (2, 2, 1))), ("monitor",))
    with pytest.raises(SceneError, match="vocabulary"):
        SceneGraph(ws, (), (obj("a", (1, 1, 1), cls="plant"),), ("monitor",))
    with pytest.raises(SceneError, match="outside workspace"):
        SceneGraph(ws, (), (obj("a", (11, 1, 1)),), ("monitor",))


def test_monitored_filters_zero_weight():
    ws = Box((0, 0, 0), (10, 10, 3))
    scene = SceneGraph(
        ws, (), (obj("a", (1, 1, 1)), obj("b", (2, 2, 1), weight=0.0)), ("monitor",))
    assert [o.id for o in scene.monitored()] == ["a"]
    assert scene.object_by_id("b").weight == 0.0
    with pytest.raises(SceneError, match="unknown object id"):
        scene.object_by_id("c")


def test_reweighted_swaps_weights():
    scene = make_gallery_scene()
    flipped = scene.reweighted({"painting_1": 0.2, "painting_2": 1.0})
    assert flipped.object_by_id("painting_1").weight == 0.2
    assert flipped.object_by_id("painting_2").weight == 1.0
    # untouched objects keep their weight; original scene unchanged
    assert flipped.object_by_id("desk_monitor").weight == scene.object_by_id("desk_monitor").weight
    assert scene.object_by_id("painting_1").weight == 1.0
    with pytest.raises(SceneError, match="unknown object ids"):
        scene.reweighted({"nope": 1.0})


def test_centroid_entries_for_known_triangle():
    objs = (obj("a", (0.0, 0.0, 0.0)), obj("b", (2.0, 0.0, 0.0)),
            obj("c", (0.0, 2.0, 0.0)))
    cs = extract_centroids(objs)
    got = dict(cs.entries)
    assert got["obj:a"] == (0.0, 0.0, 0.0)
    assert got["obj:b"] == (2.0, 0.0, 0.0)
    assert got["obj:c"] == (0.0, 2.0, 0.0)
    assert got["pair:a+b"] == (1.0, 0.0, 0.0)
    assert got["pair:a+c"] == (0.0, 1.0, 0.0)
    assert got["pair:b+c"] == (1.0, 1.0, 0.0)
    assert got["all"] == pytest.approx((2.0 / 3.0, 2.0 / 3.0, 0.0))
    assert len(cs) == 7


def test_centroid_single_object_has_no_pairs():
    cs = extract_centroids((obj("a", (1.0, 2.0, 3.0)),))
    assert cs.entries == (("obj:a", (1.0, 2.0, 3.0)),)


def test_centroid_dedup_keeps_first_label():
    # b sits exactly at the a-c midpoint, so pair:a+c duplicates obj:b
    objs = (obj("a", (0.0, 0.0, 0.0)), obj("b", (1.0, 0.0, 0.0)),
            obj("c", (2.0, 0.0, 0.0)))
    cs = extract_centroids(objs)
    labels = [lab for lab, _ in cs.entries]
    assert "obj:b" in labels
    assert "pair:a+c" not in labels          # dropped as duplicate of obj:b
    assert "all" not in labels               # collective mean also equals obj:b
    assert labels == ["obj:a", "obj:b", "obj:c", "pair:a+b", "pair:b+c"]


def test_centroid_requires_objects():
    with pytest.raises(SceneError):
        extract_centroids(())


@given(st.permutations(range(4)))
def test_centroid_positions_are_permutation_invariant(order):
    pts = [(0.0, 0.0, 0.0), (3.0, 0.0, 0.5), (0.0, 4.0, 1.0), (5.0, 5.0, 0.1)]
    base = extract_centroids(tuple(obj(f"o{i}", pts[i]) for i in range(4)))
    perm = extract_centroids(tuple(obj(f"o{i}", pts[i]) for i in order))
    assert {c for _, c in base.entries} == {c for _, c in perm.entries}


def test_office_scene_shape():
    scene = make_office_scene()
    assert scene.workspace_bounds.min_corner == (0.0, 0.0, 0.0)
    assert scene.workspace_bounds.max_corner == (12.0, 8.0, 3.0)
    monitors = [o for o in scene.objects if o.class_name == "monitor"]
    assert len(monitors) == 4
    assert all(o.weight == 1.0 for o in monitors)
    # one weight-zero human distractor
    humans = [o for o in scene.objects if o.class_name == "human"]
    assert len(humans) == 1 and humans[0].weight == 0.0
    assert len(scene.monitored()) == 4
    kinds = {type(ob) for ob in scene.obstacles}
    assert kinds == {Box, Cylinder}


def test_office_monitor_weights_override():
    scene = make_office_scene(monitor_weights=(1.0, 0.5, 0.25, 0.1))
    ws = [o.weight for o in scene.objects if o.class_name == "monitor"]
    assert ws == [1.0, 0.5, 0.25, 0.1]


def test_gallery_scene_shape():
    scene = make_gallery_scene()
    ids = [o.id for o in scene.objects]
    assert ids == ["desk_monitor", "person_start", "person_goal",
                   "painting_1", "painting_2"]
    assert scene.object_by_id("painting_1").weight == 1.0
    assert scene.object_by_id("painting_2").weight == 0.2


def test_scene_json_round_trip_is_byte_stable(tmp_path):
    scene = make_office_scene()
    p1 = tmp_path / "scene1.json"
    p2 = tmp_path / "scene2.json"
    save_scene(scene, p1)
    loaded = load_scene(p1)
    assert loaded == scene
    save_scene(loaded, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_scene_dict_round_trip():
    scene = make_gallery_scene()
    assert scene_from_dict(scene_to_dict(scene)) == scene


def test_load_rejects_bad_documents(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FileFormatError, match="invalid JSON"):
        load_scene(bad)
    wrong_version = tmp_path / "v9.json"
    wrong_version.write_text(json.dumps({"format": 9}))
    with pytest.raises(FileFormatError, match="format"):
        load_scene(wrong_version)


def test_scene_from_dict_reports_missing_fields():
    with pytest.raises(SceneError, match="workspace"):
        scene_from_dict({"format": 1})
    doc = scene_to_dict(make_office_scene())
    del doc["objects"][0]["centroid"]
    with pytest.raises(SceneError, match="objects\\[0\\]"):
        scene_from_dict(doc)


def test_scene_from_dict_normalizes_sloppy_normal():
    doc = scene_to_dict(make_office_scene())
    doc["objects"][0]["face_normal"] = [0.0, -2.0, 0.0]
    with pytest.warns(UserWarning, match="normalizing"):
        scene = scene_from_dict(doc)
    assert scene.objects[0].face_normal == (0.0, -1.0, 0.0)


def test_centroid_set_len():
    assert len(CentroidSet(())) == 0
