"""Scene model: two photographed objects, a camera, tolerances, demos.

A scene is everything needed to take one photograph at t = 0: exactly two
objects (each a set of particle worldlines on [t_min, 0]), the film
geometry, optionally a rail, and the numerical tolerances.  Scenes travel
as JSON documents with version tag "retrocam-scene/1"; parsing is strict,
unknown fields are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import expressions
from .errors import (
    BadTolerance,
    BetaOutOfRange,
    RailTooShort,
    SchemaError,
    UnknownDemo,
)
from .expressions import ExpressionAst, parse_expression
from .kinematics import (
    DEFAULT_C,
    RailMotion,
    RailWorldline,
    SampledWorldline,
    SpatialPoint,
    StaticWorldline,
    UniformWorldline,
    CircularWorldline,
    Worldline,
)
from .optics import FilmConfig, RailCurve

SCENE_VERSION = "retrocam-scene/1"

DEMO_NAMES = ("train", "sphere", "needle", "permanent", "semi_permanent", "box")


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used throughout the pipeline.

    tol_root bounds the emission-time residual, eps_contact the distance
    that counts as touching, eps_set the distance that identifies two
    region points, eps_time the resolution of refined contact times.
    """

    tol_root: float = 1e-12
    eps_contact: float = 1e-6
    eps_set: float = 1e-6
    eps_time: float = 1e-9

    def __post_init__(self):
        for name in ("tol_root", "eps_contact", "eps_set", "eps_time"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise BadTolerance(f"{name} must be positive and finite, got {value!r}")


@dataclass
class ObjectSpec:
    """One photographed object: an id (1 or 2) and its particle worldlines."""

    object_id: int
    particles: tuple[Worldline, ...]

    def __post_init__(self):
        self.particles = tuple(self.particles)
        if not self.particles:
            raise SchemaError(f"object {self.object_id} has no particles")
        seen = set()
        for p in self.particles:
            if p.object_id != self.object_id:
                raise SchemaError(
                    f"particle {p.label()} filed under object {self.object_id}"
                )
            if p.particle_id in seen:
                raise SchemaError(
                    f"duplicate particle id {p.particle_id} in object {self.object_id}"
                )
            seen.add(p.particle_id)


@dataclass
class Scene:
    """A complete photographic setup; see the module docstring."""

    objects: tuple[ObjectSpec, ObjectSpec]
    film: FilmConfig
    t_min: float
    tolerances: Tolerances = field(default_factory=Tolerances)
    time_grid_n: int = 2001
    seed: int = 0
    rail: RailCurve | None = None

    def __post_init__(self):
        self.objects = tuple(sorted(self.objects, key=lambda o: o.object_id))
        if [o.object_id for o in self.objects] != [1, 2]:
            raise SchemaError(
                f"scene needs exactly objects 1 and 2, got ids "
                f"{[o.object_id for o in self.objects]}"
            )
        if not (math.isfinite(self.t_min) and self.t_min < 0):
            raise SchemaError(f"t_min must be negative, got {self.t_min}")
        if self.time_grid_n < 2:
            raise BadTolerance(f"time_grid_n must be at least 2, got {self.time_grid_n}")
        for obj in self.objects:
            for p in obj.particles:
                if p.t_min > self.t_min + 1e-9:
                    raise SchemaError(
                        f"particle {p.label()} covers [{p.t_min}, 0], scene needs "
                        f"[{self.t_min}, 0]"
                    )

    def all_particles(self) -> list[Worldline]:
        return [p for obj in self.objects for p in obj.particles]

    def time_grid(self) -> np.ndarray:
        return np.linspace(self.t_min, 0.0, self.time_grid_n)


# ---------------------------------------------------------------------------
# strict JSON schema

def _require_keys(mapping: dict, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(mapping, dict):
        raise SchemaError(f"{where} must be an object, got {type(mapping).__name__}")
    keys = set(mapping)
    missing = required - keys
    if missing:
        raise SchemaError(f"{where} missing fields: {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise SchemaError(f"{where} has unknown fields: {sorted(unknown)}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{where} must be finite, got {value!r}")
    return value


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where} must be an integer, got {value!r}")
    return value


def _triple(value, where: str) -> tuple[float, float, float]:
    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError(f"{where} must be a list of three numbers, got {value!r}")
    return tuple(_number(v, where) for v in value)  # type: ignore[return-value]


_PARTICLE_FIELDS = {
    "static": {"position"},
    "uniform": {"position", "velocity"},
    "circular": {"center", "radius", "angular_rate", "phase", "plane"},
    "rail_constrained": {"beta", "arclength0"},
    "sampled": {"samples"},
}


def parse_scene(text: str) -> Scene:
    """Parse and validate a scene document; strict about every field."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    _require_keys(
        doc,
        {"version", "film", "t_min", "tolerances", "time_grid_n", "seed", "objects"},
        {"rail"},
        "scene",
    )
    if doc["version"] != SCENE_VERSION:
        raise SchemaError(
            f"unsupported version {doc['version']!r}, expected {SCENE_VERSION!r}"
        )
    _require_keys(doc["film"], {"D", "C", "c"}, set(), "film")
    film = FilmConfig(
        film_distance=_number(doc["film"]["D"], "film.D"),
        rail_plane_height=_number(doc["film"]["C"], "film.C"),
        c=_number(doc["film"]["c"], "film.c"),
    )
    t_min = _number(doc["t_min"], "t_min")
    _require_keys(
        doc["tolerances"],
        {"tol_root", "eps_contact", "eps_set", "eps_time"},
        set(),
        "tolerances",
    )
    tolerances = Tolerances(
        tol_root=_number(doc["tolerances"]["tol_root"], "tolerances.tol_root"),
        eps_contact=_number(doc["tolerances"]["eps_contact"], "tolerances.eps_contact"),
        eps_set=_number(doc["tolerances"]["eps_set"], "tolerances.eps_set"),
        eps_time=_number(doc["tolerances"]["eps_time"], "tolerances.eps_time"),
    )
    time_grid_n = _integer(doc["time_grid_n"], "time_grid_n")
    seed = _integer(doc["seed"], "seed")

    rail = None
    if "rail" in doc:
        _require_keys(doc["rail"], {"g", "x_domain"}, set(), "rail")
        if not isinstance(doc["rail"]["g"], str):
            raise SchemaError("rail.g must be an expression string")
        domain = doc["rail"]["x_domain"]
        if not isinstance(domain, list) or len(domain) != 2:
            raise SchemaError("rail.x_domain must be [min, max]")
        rail = RailCurve(
            parse_expression(doc["rail"]["g"]),
            (_number(domain[0], "rail.x_domain[0]"), _number(domain[1], "rail.x_domain[1]")),
            plane_height=film.rail_plane_height,
        )

    if not isinstance(doc["objects"], list) or len(doc["objects"]) != 2:
        raise SchemaError("objects must be a list of exactly two entries")
    motions: dict[str, RailMotion] = {}
    objects = []
    for entry in doc["objects"]:
        _require_keys(entry, {"id", "particles"}, set(), "object")
        object_id = _integer(entry["id"], "object.id")
        if not isinstance(entry["particles"], list) or not entry["particles"]:
            raise SchemaError(f"object {object_id} needs a non-empty particle list")
        particles = []
        for index, pdoc in enumerate(entry["particles"]):
            particles.append(
                _parse_particle(pdoc, object_id, index, t_min, film, rail, motions)
            )
        objects.append(ObjectSpec(object_id, tuple(particles)))
    return Scene(
        objects=tuple(objects),
        film=film,
        t_min=t_min,
        tolerances=tolerances,
        time_grid_n=time_grid_n,
        seed=seed,
        rail=rail,
    )


def _reject_constant(name: str):
    raise SchemaError(f"non-finite JSON constant {name!r} not allowed")


def _parse_particle(pdoc, object_id, particle_id, t_min, film, rail, motions) -> Worldline:
    where = f"objects[{object_id}].particles[{particle_id}]"
    if not isinstance(pdoc, dict) or "kind" not in pdoc:
        raise SchemaError(f"{where} must be an object with a 'kind' field")
    kind = pdoc["kind"]
    if kind not in _PARTICLE_FIELDS:
        raise SchemaError(f"{where} has unknown kind {kind!r}")
    _require_keys(pdoc, _PARTICLE_FIELDS[kind] | {"kind"}, set(), where)
    common = dict(object_id=object_id, particle_id=particle_id, c=film.c)
    if kind == "static":
        return StaticWorldline(_triple(pdoc["position"], where), t_min, **common)
    if kind == "uniform":
        return UniformWorldline(
            _triple(pdoc["position"], where), _triple(pdoc["velocity"], where),
            t_min, **common,
        )
    if kind == "circular":
        plane = pdoc["plane"]
        if plane not in ("xy", "xz", "yz"):
            raise SchemaError(f"{where}.plane must be one of xy, xz, yz")
        return CircularWorldline(
            _triple(pdoc["center"], where),
            _number(pdoc["radius"], f"{where}.radius"),
            _number(pdoc["angular_rate"], f"{where}.angular_rate"),
            _number(pdoc["phase"], f"{where}.phase"),
            plane, t_min, **common,
        )
    if kind == "rail_constrained":
        if rail is None:
            raise SchemaError(f"{where} is rail_constrained but the scene has no rail")
        beta_text = pdoc["beta"]
        if not isinstance(beta_text, str):
            raise SchemaError(f"{where}.beta must be an expression string")
        if beta_text not in motions:
            motions[beta_text] = RailMotion(
                rail, parse_expression(beta_text), t_min, c=film.c
            )
        return RailWorldline(
            motions[beta_text], _number(pdoc["arclength0"], f"{where}.arclength0"),
            **common,
        )
    samples = pdoc["samples"]
    if not isinstance(samples, list) or len(samples) < 2:
        raise SchemaError(f"{where}.samples must list at least two [t, [x,y,z]] pairs")
    parsed = []
    for pair in samples:
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}.samples entries must be [t, [x,y,z]] pairs")
        parsed.append((_number(pair[0], where), _triple(pair[1], where)))
    if abs(parsed[0][0] - t_min) > 1e-9:
        raise SchemaError(
            f"{where}.samples must start at t_min = {t_min}, got {parsed[0][0]}"
        )
    return SampledWorldline(parsed, **common)


def scene_to_dict(scene: Scene) -> dict:
    """Scene as a schema-conforming plain dictionary."""
    doc: dict = {
        "version": SCENE_VERSION,
        "film": {
            "D": scene.film.film_distance,
            "C": scene.film.rail_plane_height,
            "c": scene.film.c,
        },
        "t_min": scene.t_min,
        "tolerances": {
            "tol_root": scene.tolerances.tol_root,
            "eps_contact": scene.tolerances.eps_contact,
            "eps_set": scene.tolerances.eps_set,
            "eps_time": scene.tolerances.eps_time,
        },
        "time_grid_n": scene.time_grid_n,
        "seed": scene.seed,
    }
    if scene.rail is not None:
        doc["rail"] = {
            "g": scene.rail.g.to_string(),
            "x_domain": [scene.rail.x_domain[0], scene.rail.x_domain[1]],
        }
    doc["objects"] = [
        {"id": obj.object_id, "particles": [_particle_to_dict(p) for p in obj.particles]}
        for obj in scene.objects
    ]
    return doc


def _particle_to_dict(p: Worldline) -> dict:
    if isinstance(p, StaticWorldline):
        return {"kind": "static", "position": list(p.position.as_tuple())}
    if isinstance(p, UniformWorldline):
        return {
            "kind": "uniform",
            "position": list(p.position.as_tuple()),
            "velocity": list(p.velocity),
        }
    if isinstance(p, CircularWorldline):
        return {
            "kind": "circular",
            "center": list(p.center.as_tuple()),
            "radius": p.radius,
            "angular_rate": p.angular_rate,
            "phase": p.phase,
            "plane": p.plane,
        }
    if isinstance(p, RailWorldline):
        return {
            "kind": "rail_constrained",
            "beta": p.motion.beta.to_string(),
            "arclength0": p.arclength0,
        }
    if isinstance(p, SampledWorldline):
        return {
            "kind": "sampled",
            "samples": [[e.t, list(e.pos.as_tuple())] for e in p.samples],
        }
    raise SchemaError(f"cannot serialize worldline kind {p.kind!r}")


def scene_to_json(scene: Scene) -> str:
    from ._util import dump_json

    return dump_json(scene_to_dict(scene))


# ---------------------------------------------------------------------------
# rail trains

def build_rail_train(
    rail: RailCurve,
    beta: ExpressionAst | str,
    n: int,
    spacing: float,
    s0: float,
    t_min: float,
    c: float = DEFAULT_C,
    object_id: int = 1,
    v_max_fraction: float = 0.999,
) -> ObjectSpec:
    """Build a train of n rail-bound particles sharing one speed profile.

    Particle k sits at arclength s0 + k * spacing at the exposure time
    t = 0 and advances along the rail with ds/dt = c * beta(t).  Raises
    BetaOutOfRange when the profile leaves (-v_max, v_max)/c, and
    RailTooShort when any particle would leave the rail's x domain at some
    time in [t_min, 0].
    """
    if n < 1:
        raise SchemaError(f"train needs at least one particle, got n = {n}")
    if isinstance(beta, str):
        beta = parse_expression(beta)
    motion = RailMotion(rail, beta, t_min, c=c)
    peak = motion.max_beta()
    if peak > v_max_fraction:
        raise BetaOutOfRange(
            f"|beta| reaches {peak:.6g}, cap is {v_max_fraction}"
        )
    ts = np.linspace(t_min, 0.0, 4096)
    disp = np.array([motion.displacement(float(t)) for t in ts])
    lo = s0 + min(0.0, (n - 1) * spacing) + float(disp.min())
    hi = s0 + max(0.0, (n - 1) * spacing) + float(disp.max())
    length = rail.total_arclength
    if lo < 0.0 or hi > length:
        raise RailTooShort(
            f"train sweeps arclengths [{lo:.6g}, {hi:.6g}], rail has [0, {length:.6g}]"
        )
    particles = tuple(
        RailWorldline(motion, s0 + k * spacing, object_id=object_id, particle_id=k,
                      v_max_fraction=v_max_fraction)
        for k in range(n)
    )
    return ObjectSpec(object_id, particles)


# ---------------------------------------------------------------------------
# built-in demo scenes

def demo_scene(name: str) -> Scene:
    """Deterministically build one of the bundled demonstration scenes.

    train          200-particle train on a wavy rail, oscillating speed
    sphere         moving sphere photographed near the axis, plus anchor
    needle         late arrival at an already-photographed point
    permanent      two coincident static particles, photographed couple
    semi_permanent the same pair separated exactly around the photographed
                   instant, so the couple is never photographed
    box            rod frame moving along x; displacement and rotation
    """
    try:
        builder = _DEMOS[name]
    except KeyError:
        raise UnknownDemo(
            f"unknown demo {name!r}, available: {', '.join(DEMO_NAMES)}"
        ) from None
    return builder()


def _film() -> FilmConfig:
    return FilmConfig(film_distance=1.0, rail_plane_height=-1.0, c=1.0)


def _anchor_object(position, t_min, c) -> ObjectSpec:
    anchor = StaticWorldline(position, t_min, object_id=2, particle_id=0, c=c)
    return ObjectSpec(2, (anchor,))


def _train_demo() -> Scene:
    film = _film()
    t_min = -40.0
    rail = RailCurve(
        parse_expression("2 + 0.3*sin(x)"), (-18.0, 4.0),
        plane_height=film.rail_plane_height,
    )
    train = build_rail_train(
        rail, "0.5 + 0.4*sin(0.1*t)", n=200, spacing=0.02, s0=14.5,
        t_min=t_min, c=film.c, object_id=1,
    )
    return Scene(
        objects=(train, _anchor_object((0.0, 30.0, 0.0), t_min, film.c)),
        film=film, t_min=t_min, seed=1, rail=rail,
    )


def _fibonacci_directions(n: int) -> np.ndarray:
    """n unit vectors, near-uniform over the sphere, deterministic."""
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _sphere_demo() -> Scene:
    """Sphere of rest radius 0.1 at speed 0.8 c along x.

    The sampled surface is a rest-frame sphere, so in the camera frame at
    t = 0 it is flattened by 1/gamma along x.  Its position is chosen so
    the center's emission point sits on the optical axis at (0, 20, 0):
    light from there needs 20 time units, during which the center moves
    0.8 * 20 = 16, hence center (16, 20, 0) at t = 0.
    """
    film = _film()
    t_min = -50.0
    v = (0.8, 0.0, 0.0)
    gamma = 1.0 / math.sqrt(1.0 - 0.8 * 0.8)
    center0 = np.array([16.0, 20.0, 0.0])
    offsets = 0.1 * _fibonacci_directions(2000)
    offsets[:, 0] /= gamma
    particles = tuple(
        UniformWorldline(center0 + offsets[k], v, t_min,
                         object_id=1, particle_id=k, c=film.c)
        for k in range(len(offsets))
    )
    return Scene(
        objects=(ObjectSpec(1, particles), _anchor_object((0.0, 30.0, 0.0), t_min, film.c)),
        film=film, t_min=t_min, seed=2,
    )


def _needle_demo() -> Scene:
    """A particle arrives at an already-photographed point.

    The static point P = (0, 2.5, 0) is photographed via its emission at
    t = -2.5.  The moving particle only reaches P at t = -1, too late for
    its light to arrive at the exposure; the meeting is real but cannot be
    on the photograph.  Static anchors at distances 0.5 and 3 stretch the
    photographic interval so both instants lie inside it.
    """
    film = _film()
    t_min = -5.0
    sheet = (
        StaticWorldline((0.0, 2.5, 0.0), t_min, object_id=1, particle_id=0, c=film.c),
        StaticWorldline((0.0, 0.5, 0.0), t_min, object_id=1, particle_id=1, c=film.c),
        StaticWorldline((0.0, 3.0, 0.0), t_min, object_id=1, particle_id=2, c=film.c),
    )
    needle = UniformWorldline(
        (0.3, 2.5, 0.0), (0.3, 0.0, 0.0), t_min, object_id=2, particle_id=0, c=film.c
    )
    return Scene(
        objects=(ObjectSpec(1, sheet), ObjectSpec(2, (needle,))),
        film=film, t_min=t_min, seed=3,
    )


_MEETING_POINT = (0.0, 2.0, 0.0)


def _permanent_demo() -> Scene:
    """Two coincident static particles: their couple is photographed once."""
    film = _film()
    t_min = -5.0
    sheet = (
        StaticWorldline(_MEETING_POINT, t_min, object_id=1, particle_id=0, c=film.c),
        StaticWorldline((0.0, 1.5, 0.0), t_min, object_id=1, particle_id=1, c=film.c),
        StaticWorldline((0.0, 3.0, 0.0), t_min, object_id=1, particle_id=2, c=film.c),
    )
    partner = StaticWorldline(_MEETING_POINT, t_min, object_id=2, particle_id=0, c=film.c)
    return Scene(
        objects=(ObjectSpec(1, sheet), ObjectSpec(2, (partner,))),
        film=film, t_min=t_min, seed=4,
    )


_BUMP_WINDOW = (-2.2, -1.8)
_BUMP_AMPLITUDE = 1e-5  # ten times the default contact tolerance


def _bump_shape(t: float) -> float:
    """Smooth bump supported on the open window, peak value 1."""
    lo, hi = _BUMP_WINDOW
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    u = (t - center) / half
    if abs(u) >= 1.0:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - u * u))


def _bump_samples(t_min: float, sign: float) -> list[tuple[float, tuple[float, float, float]]]:
    px, py, pz = _MEETING_POINT
    ts = [t_min] + list(np.linspace(_BUMP_WINDOW[0], _BUMP_WINDOW[1], 201)) + [0.0]
    return [
        (float(t), (px + sign * _BUMP_AMPLITUDE * _bump_shape(float(t)), py, pz))
        for t in ts
    ]


def _semi_permanent_demo() -> Scene:
    """The permanent pair, pulled apart around the photographed instant.

    Both particles leave the meeting point on opposite smooth excursions
    during (-2.2, -1.8).  Light reaching the camera from that point at
    t = 0 must leave at t = -2, inside the separation window, so although
    the pair is in contact at every time outside the window, no photograph
    of the couple exists.
    """
    film = _film()
    t_min = -5.0
    sheet = (
        SampledWorldline(_bump_samples(t_min, +1.0), object_id=1, particle_id=0, c=film.c),
        StaticWorldline((0.0, 1.5, 0.0), t_min, object_id=1, particle_id=1, c=film.c),
        StaticWorldline((0.0, 3.0, 0.0), t_min, object_id=1, particle_id=2, c=film.c),
    )
    partner = SampledWorldline(_bump_samples(t_min, -1.0), object_id=2, particle_id=0, c=film.c)
    return Scene(
        objects=(ObjectSpec(1, sheet), ObjectSpec(2, (partner,))),
        film=film, t_min=t_min, seed=5,
    )


def _box_demo() -> Scene:
    """Two rods along the motion plus a transverse connector, at 0.9 c."""
    film = _film()
    t_min = -20.0
    v = (0.9, 0.0, 0.0)
    z = film.rail_plane_height
    particles = []
    pid = 0
    for y in (4.0, 6.0):
        for x in np.linspace(-1.0, 1.0, 50):
            particles.append(
                UniformWorldline((float(x), y, z), v, t_min,
                                 object_id=1, particle_id=pid, c=film.c)
            )
            pid += 1
    for y in np.linspace(4.0, 6.0, 50):
        particles.append(
            UniformWorldline((0.0, float(y), z), v, t_min,
                             object_id=1, particle_id=pid, c=film.c)
        )
        pid += 1
    return Scene(
        objects=(ObjectSpec(1, tuple(particles)),
                 _anchor_object((0.0, 10.0, 0.0), t_min, film.c)),
        film=film, t_min=t_min, seed=6,
    )


_DEMOS = {
    "train": _train_demo,
    "sphere": _sphere_demo,
    "needle": _needle_demo,
    "permanent": _permanent_demo,
    "semi_permanent": _semi_permanent_demo,
    "box": _box_demo,
}
