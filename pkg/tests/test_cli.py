"""Command line behaviour, run in process through cli.main."""

import json

import pytest

from retrocam.cli import main
from retrocam.kinematics import StaticWorldline
from retrocam.optics import FilmConfig
from retrocam.scenes import ObjectSpec, Scene, Tolerances, parse_scene, scene_to_json


def test_demo_writes_parseable_scene(tmp_path):
    out = tmp_path / "needle.json"
    assert main(["demo", "needle", "--out", str(out)]) == 0
    scene = parse_scene(out.read_text())
    assert scene.t_min == -5.0


def test_verify_passes_on_permanent(tmp_path, capsys):
    assert main(["verify", "--demo", "permanent", "--threads", "2"]) == 0
    text = capsys.readouterr().out
    for aid in ("1", "2", "3", "4a", "4b", "5"):
        assert f"assertion {aid}: pass" in text
    assert "assertion 4c: vacuous" in text
    assert "rail_containment" not in text  # no rail in this scene
    assert text.strip().endswith("overall: pass")


def test_verify_reports_failure_when_grid_misses_the_instant(capsys):
    # an even grid never samples t = -2, where the couple is photographed
    assert main(["verify", "--demo", "permanent", "--grid", "2000"]) == 1
    text = capsys.readouterr().out
    assert "assertion 3: fail" in text
    assert text.strip().endswith("overall: fail")


def test_verify_report_file(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "--demo", "needle", "--report", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert {"interval", "shell", "contacts", "regions", "assertions"} <= set(doc)
    assert {r["id"] for r in doc["assertions"]} == {
        "1", "2", "3", "4a", "4b", "4c", "5",
    }


def test_scene_and_demo_are_mutually_exclusive(tmp_path):
    out = tmp_path / "scene.json"
    assert main(["demo", "needle", "--out", str(out)]) == 0
    assert main(["regions", "--scene", str(out), "--demo", "needle"]) == 2
    assert main(["regions"]) == 2


def test_missing_scene_file_is_an_input_error(tmp_path):
    assert main(["regions", "--scene", str(tmp_path / "absent.json")]) == 2


def test_malformed_scene_is_an_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"version\": \"nope\"}")
    assert main(["regions", "--scene", str(bad)]) == 2


def test_unreachable_emission_is_a_numerical_error(tmp_path):
    scene = Scene(
        objects=(
            ObjectSpec(1, (StaticWorldline((0.0, 10.0, 0.0), -5.0, object_id=1),)),
            ObjectSpec(2, (StaticWorldline((0.0, 3.0, 0.0), -5.0, object_id=2),)),
        ),
        film=FilmConfig(film_distance=1.0, rail_plane_height=-1.0),
        t_min=-5.0,  # light from y = 10 needs 10 time units
        tolerances=Tolerances(),
    )
    path = tmp_path / "stuck.json"
    path.write_text(scene_to_json(scene))
    assert main(["render", "--scene", str(path), "--points",
                 str(tmp_path / "pts.csv")]) == 3


def test_render_outputs_are_thread_independent(tmp_path):
    csvs = []
    for threads in (1, 2):
        out = tmp_path / f"needle-{threads}.csv"
        assert main([
            "render", "--demo", "needle", "--points", str(out),
            "--threads", str(threads),
        ]) == 0
        csvs.append(out.read_bytes())
    assert csvs[0] == csvs[1]


def test_render_raster_roundtrip(tmp_path):
    out = tmp_path / "shot.ppm"
    assert main([
        "render", "--demo", "permanent", "--raster", "40x30", "--out", str(out),
        "--window=-1,1,-1,1",
    ]) == 0
    data = out.read_bytes()
    assert data.startswith(b"P6\n40 30\n255\n")
    assert main([
        "render", "--demo", "permanent", "--raster", "40", "--out", str(out),
    ]) == 2  # malformed WIDTHxHEIGHT


def test_rail_image_csv(tmp_path):
    out = tmp_path / "rail.csv"
    assert main([
        "rail-image", "--demo", "train", "--points", "256", "--out", str(out),
    ]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "U,V"
    assert len(lines) == 257
    assert main(["rail-image", "--demo", "needle"]) == 2  # scene has no rail


def test_verify_includes_rail_containment_for_trains(capsys):
    assert main(["verify", "--demo", "train"]) == 0
    text = capsys.readouterr().out
    assert "rail_containment: pass" in text
    assert text.strip().endswith("overall: pass")
