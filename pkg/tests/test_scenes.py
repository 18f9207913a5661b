"""Scene documents: strict parsing, round trips, demos, and train assembly."""

import json

import pytest

from retrocam.errors import (
    BadTolerance,
    BetaOutOfRange,
    RailTooShort,
    SchemaError,
    SuperluminalWorldline,
    UnknownDemo,
)
from retrocam.expressions import parse_expression
from retrocam.optics import RailCurve
from retrocam.scenes import (
    DEMO_NAMES,
    SCENE_VERSION,
    Scene,
    Tolerances,
    build_rail_train,
    demo_scene,
    parse_scene,
    scene_to_json,
)


def _minimal_doc() -> dict:
    return {
        "version": SCENE_VERSION,
        "film": {"D": 1.0, "C": -1.0, "c": 1.0},
        "t_min": -5.0,
        "tolerances": {
            "tol_root": 1e-12, "eps_contact": 1e-6, "eps_set": 1e-6, "eps_time": 1e-9,
        },
        "time_grid_n": 101,
        "seed": 0,
        "objects": [
            {"id": 1, "particles": [{"kind": "static", "position": [0.0, 2.0, 0.0]}]},
            {"id": 2, "particles": [{"kind": "static", "position": [0.0, 3.0, 0.0]}]},
        ],
    }


def test_minimal_scene_parses():
    scene = parse_scene(json.dumps(_minimal_doc()))
    assert scene.t_min == -5.0
    assert [o.object_id for o in scene.objects] == [1, 2]
    grid = scene.time_grid()
    assert grid[0] == -5.0 and grid[-1] == 0.0 and len(grid) == 101


def test_tolerance_validation():
    with pytest.raises(BadTolerance):
        Tolerances(tol_root=0.0)
    with pytest.raises(BadTolerance):
        Tolerances(eps_contact=-1e-6)
    with pytest.raises(BadTolerance):
        Tolerances(eps_time=float("nan"))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("version"),
    lambda d: d.update(version="retrocam-scene/2"),
    lambda d: d.update(extra=1),
    lambda d: d["film"].pop("D"),
    lambda d: d["film"].update(focal=2.0),
    lambda d: d["tolerances"].pop("eps_set"),
    lambda d: d["objects"].pop(),
    lambda d: d["objects"].append({"id": 3, "particles": []}),
    lambda d: d["objects"][0].update(id=7),
    lambda d: d["objects"][0]["particles"][0].pop("position"),
    lambda d: d["objects"][0]["particles"][0].update(kind="wobbly"),
    lambda d: d["objects"][0]["particles"][0].update(velocity=[0.1, 0.0, 0.0]),
    lambda d: d["objects"][0].update(particles=[]),
])
def test_malformed_documents_rejected(mutate):
    doc = _minimal_doc()
    mutate(doc)
    with pytest.raises(SchemaError):
        parse_scene(json.dumps(doc))


def test_nan_constants_rejected():
    text = json.dumps(_minimal_doc()).replace("-5.0", "NaN")
    with pytest.raises(SchemaError):
        parse_scene(text)


def test_rail_constrained_requires_rail_block():
    doc = _minimal_doc()
    doc["objects"][0]["particles"] = [
        {"kind": "rail_constrained", "beta": "0.5", "arclength0": 3.0}
    ]
    with pytest.raises(SchemaError):
        parse_scene(json.dumps(doc))
    doc["rail"] = {"g": "2", "x_domain": [-20.0, 20.0]}
    scene = parse_scene(json.dumps(doc))
    assert scene.rail is not None


def test_sampled_must_start_at_t_min():
    doc = _minimal_doc()
    doc["objects"][0]["particles"] = [
        {"kind": "sampled",
         "samples": [[-4.0, [0.0, 2.0, 0.0]], [0.0, [0.0, 2.0, 0.0]]]}
    ]
    with pytest.raises(SchemaError):
        parse_scene(json.dumps(doc))


def test_superluminal_scene_rejected():
    doc = _minimal_doc()
    doc["objects"][0]["particles"] = [
        {"kind": "uniform", "position": [0.0, 2.0, 0.0], "velocity": [1.5, 0.0, 0.0]}
    ]
    with pytest.raises(SuperluminalWorldline):
        parse_scene(json.dumps(doc))


def test_unknown_demo():
    with pytest.raises(UnknownDemo):
        demo_scene("does_not_exist")


@pytest.mark.parametrize("name", DEMO_NAMES)
def test_demo_round_trip_is_byte_stable(name):
    scene = demo_scene(name)
    text = scene_to_json(scene)
    assert scene_to_json(parse_scene(text)) == text


def test_demo_shapes():
    train = demo_scene("train")
    assert train.rail is not None
    assert len(train.objects[0].particles) == 200
    assert len(train.objects[1].particles) == 1
    sphere = demo_scene("sphere")
    assert len(sphere.objects[0].particles) == 2000
    box = demo_scene("box")
    assert len(box.objects[0].particles) == 150


def test_build_rail_train_guards():
    rail = RailCurve(parse_expression("2"), (-18.0, 4.0), plane_height=-1.0)
    with pytest.raises(BetaOutOfRange):
        build_rail_train(rail, "1.5", n=3, spacing=0.1, s0=5.0, t_min=-10.0)
    with pytest.raises(RailTooShort):
        # 0.5 * 10 of backward travel exceeds s0 = 4
        build_rail_train(rail, "0.5", n=3, spacing=0.1, s0=4.0, t_min=-10.0)
    train = build_rail_train(rail, "0.5", n=3, spacing=0.1, s0=6.0, t_min=-10.0)
    assert len(train.particles) == 3


def test_scene_requires_two_specific_ids():
    film_doc = _minimal_doc()
    scene = parse_scene(json.dumps(film_doc))
    with pytest.raises(SchemaError):
        Scene(
            objects=(scene.objects[0], scene.objects[0]),
            film=scene.film,
            t_min=scene.t_min,
            tolerances=scene.tolerances,
        )
