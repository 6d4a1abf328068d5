import csv
import json

import pytest

from viewprm import (
    Box,
    ObjectNode,
    SceneGraph,
    load_roadmap,
    save_scene,
)
from viewprm.cli import main, parse_config, resolve_scene
from viewprm.costmap import load_model
from viewprm.geometry import RobotModel
from viewprm.search import load_path_waypoints


@pytest.fixture(scope="module")
def scene_file(tmp_path_factory):
    scene = SceneGraph(
        workspace_bounds=Box((-4.0, -4.0, 0.0), (4.0, 4.0, 3.0)),
        obstacles=(Box((-0.3, -1.5, 0.0), (0.3, 1.5, 2.0)),),
        objects=(
            ObjectNode(id="east", class_name="monitor", centroid=(3.5, 0.0, 1.2),
                       face_normal=(-1.0, 0.0, 0.0), extent=(0.4, 0.1, 0.3),
                       weight=1.0),
            ObjectNode(id="west", class_name="monitor", centroid=(-3.5, 0.0, 1.2),
                       face_normal=(1.0, 0.0, 0.0), extent=(0.4, 0.1, 0.3),
                       weight=0.5),
        ),
        class_vocabulary=("monitor",))
    path = tmp_path_factory.mktemp("scene") / "room.json"
    save_scene(scene, path)
    return str(path)


def test_resolve_scene_stock_and_file(scene_file):
    assert len(resolve_scene("office").monitored()) > 0
    assert len(resolve_scene(scene_file).objects) == 2
    from viewprm.errors import PlanningError
    with pytest.raises(PlanningError):
        resolve_scene("atlantis")


def test_parse_config_rejects_malformed():
    import argparse
    assert parse_config("1,2,0.5,0,0").x == 1.0
    with pytest.raises(argparse.ArgumentTypeError):
        parse_config("1,2,3")
    with pytest.raises(argparse.ArgumentTypeError):
        parse_config("a,b,c,d,e")


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen-dataset", "--scene", "office"])  # missing --out
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_domain_errors_exit_1(tmp_path, capsys):
    rc = main(["gen-dataset", "--scene", "atlantis",
               "--out", str(tmp_path / "x.jsonl")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
    rc = main(["plan", "--scene", "office",
               "--roadmap", str(tmp_path / "missing.json"),
               "--start", "0,0,0,0,0", "--goal", "1,1,0,0,0",
               "--out", str(tmp_path / "p.json")])
    assert rc == 1


def test_dataset_then_training_pipeline(tmp_path, scene_file, capsys):
    data = tmp_path / "data.jsonl"
    rc = main(["gen-dataset", "--scene", scene_file, "--count", "400",
               "--seed", "3", "--out", str(data)])
    assert rc == 0
    assert "400 samples" in capsys.readouterr().out
    assert sum(1 for _ in open(data)) == 400

    model_file = tmp_path / "model.json"
    rc = main(["train-costmap", "--scene", scene_file, "--data", str(data),
               "--epochs", "30", "--hidden", "16,16", "--seed", "0",
               "--out", str(model_file)])
    assert rc == 0
    assert "holdout mse" in capsys.readouterr().out
    model = load_model(str(model_file), RobotModel())
    assert model.robot is not None


def test_build_plan_eval_pipeline(tmp_path, scene_file, capsys):
    rm_file = tmp_path / "roadmap.json"
    rc = main(["build-prm", "--scene", scene_file, "--method", "mops_prm",
               "--nodes", "40", "--quadrature", "3", "--seed", "5",
               "--out", str(rm_file)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "40 nodes" in out
    rm = load_roadmap(rm_file)
    assert len(rm.nodes) == 40
    assert rm.metadata.method == "mops_prm"

    path_file = tmp_path / "path.json"
    rc = main(["plan", "--scene", scene_file, "--roadmap", str(rm_file),
               "--start=-3,-3,0,0,0", "--goal", "3,3,0,0,0",
               "--alpha", "1.0", "--out", str(path_file)])
    assert rc == 0
    assert "expansions" in capsys.readouterr().out
    waypoints = load_path_waypoints(path_file)
    assert waypoints[0].x == -3.0
    doc = json.loads(path_file.read_text())
    assert doc["metadata"]["alpha"] == 1.0
    assert doc["metadata"]["roadmap_hash"]

    eval_file = tmp_path / "eval.json"
    rc = main(["eval-path", "--scene", scene_file, "--path", str(path_file),
               "--frames", "20", "--out", str(eval_file)])
    assert rc == 0
    metrics = json.loads(eval_file.read_text())
    assert metrics["frames"] == 20
    assert 0.0 <= metrics["track_rate"] <= 1.0
    assert metrics["path_length"] > 0.0


def test_plan_goal_ball_flag(tmp_path, scene_file):
    rm_file = tmp_path / "rm.json"
    assert main(["build-prm", "--scene", scene_file, "--method", "uniform",
                 "--nodes", "30", "--quadrature", "3",
                 "--out", str(rm_file)]) == 0
    path_file = tmp_path / "ball.json"
    rc = main(["plan", "--scene", scene_file, "--roadmap", str(rm_file),
               "--start=-3,-3,0,0,0", "--goal-ball", "3,3,0,0,0,2.0",
               "--out", str(path_file)])
    assert rc == 0
    # malformed ball spec is a domain error, not a crash
    rc = main(["plan", "--scene", scene_file, "--roadmap", str(rm_file),
               "--start=-3,-3,0,0,0", "--goal-ball", "3,3,0",
               "--out", str(path_file)])
    assert rc == 1


def test_benchmark_writes_three_files_deterministically(tmp_path, scene_file, capsys):
    args = ["benchmark", "--scene", scene_file, "--problems", "2",
            "--nodes", "25", "--frames", "8", "--scenario", "smoke",
            "--seed", "11"]
    out1 = tmp_path / "m1.csv"
    out2 = tmp_path / "m2.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert (tmp_path / "m1.json").exists()
    assert (tmp_path / "m1.timings.csv").exists()
    with open(out1) as fh:
        table = list(csv.reader(fh))
    methods = {row[0] for row in table[1:]}
    assert "mops_prm" in methods and "closest_object" in methods
    # per-method: 2 problem rows + 1 aggregate
    assert len(table) - 1 == 4 * 3


def test_sweep_smoke(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", "--prm-sizes", "8,14", "--object-counts", "2",
               "--seeds", "1", "--fixed-size", "12", "--fixed-objects", "2",
               "--frames", "6", "--out", str(out)])
    assert rc == 0
    with open(out) as fh:
        table = list(csv.reader(fh))
    assert len(table) - 1 == 3  # 2 sizes + 1 object count
    assert {row[0] for row in table[1:]} == {"prm_size", "num_objects"}
