"""Photograph synthesis: film points, rasters, and image metrics.

The photograph of a scene is the set of film points of every particle's
emission, with couples emphasised.  The metrics quantify how the finite
light speed distorts the image: rail residuals show a moving train still
drawn on its rails, section displacements show nearer sections displaced
further, and the rotation angle shows a transverse section apparently
turned.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from ._util import format_float
from .errors import (
    BehindPinhole,
    DegenerateSection,
    EmptyWindow,
    NoRail,
    NotABoxScene,
    TimeOutsideInterval,
)
from .kinematics import RailWorldline, UniformWorldline, Worldline, retarded_emission
from .optics import FilmPoint, project, rail_image_residual
from .regions import Analysis
from .scenes import Scene

_GRAY = {"geometric": 128, "single_image": 128, "couple_image": 255}

CSV_HEADER = "object_id,particle_id,t_emit,x,y,z,U,V,provenance"


@dataclass(frozen=True)
class ImageRow:
    """One particle's contribution to the photograph."""

    source: tuple[int, int]
    t_emit: float
    locus: tuple[float, float, float]
    film: FilmPoint | None  # None when the emission is behind the pinhole
    provenance: str


@dataclass(frozen=True)
class HistoryImage:
    """The film points of a photograph plus the count that missed it."""

    points: tuple[FilmPoint, ...]
    skipped: int


def image_rows(analysis: Analysis) -> list[ImageRow]:
    """Per-particle film points with single/couple provenance."""
    couple_members = {
        s for m in analysis.couples for s in (m.first.source, m.second.source)
    }
    rows = []
    for r in analysis.records:
        provenance = "couple_image" if r.source in couple_members else "single_image"
        try:
            fp = project(r.event.pos, analysis.scene.film)
            fp = FilmPoint(fp.U, fp.V, t_emit=r.event.t,
                           provenance=provenance, source=r.source)
        except BehindPinhole:
            fp = None
        rows.append(ImageRow(
            r.source, r.event.t, r.event.pos.as_tuple(), fp, provenance
        ))
    return rows


def history_image(analysis: Analysis) -> HistoryImage:
    rows = image_rows(analysis)
    points = tuple(row.film for row in rows if row.film is not None)
    return HistoryImage(points, skipped=len(rows) - len(points))


def geometric_image(scene: Scene, t: float = 0.0) -> HistoryImage:
    """Where the particles actually are at time t, projected directly.

    This ignores light travel, so against history_image it shows the
    distortion the finite light speed adds.
    """
    if not (scene.t_min - 1e-9 <= t <= 1e-9):
        raise TimeOutsideInterval(
            f"t = {t} outside the scene window [{scene.t_min}, 0]"
        )
    points = []
    skipped = 0
    for w in scene.all_particles():
        try:
            fp = project(w.position_at(t), scene.film)
        except BehindPinhole:
            skipped += 1
            continue
        points.append(FilmPoint(fp.U, fp.V, t_emit=t, provenance="geometric",
                                source=(w.object_id, w.particle_id)))
    return HistoryImage(tuple(points), skipped)


def rows_csv(rows: list[ImageRow]) -> str:
    """CSV of the visible image rows, 17 significant digits."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for row in rows:
        if row.film is None:
            continue
        x, y, z = row.locus
        out.write(",".join([
            str(row.source[0]), str(row.source[1]), format_float(row.t_emit),
            format_float(x), format_float(y), format_float(z),
            format_float(row.film.U), format_float(row.film.V), row.provenance,
        ]) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# rasters

def rasterize(
    image: HistoryImage,
    width: int,
    height: int,
    window: tuple[float, float, float, float] | None = None,
) -> np.ndarray:
    """Grayscale raster of the film, shape (height, width), uint8.

    Couples paint white over the mid-gray of everything else; each point
    covers its pixel and the four edge neighbours.  Without an explicit
    window the points' bounding box padded by five percent is used.
    """
    if width < 1 or height < 1:
        raise EmptyWindow(f"raster needs positive size, got {width}x{height}")
    if window is None:
        if not image.points:
            raise EmptyWindow("no film points and no explicit window")
        us = [p.U for p in image.points]
        vs = [p.V for p in image.points]
        du = max(max(us) - min(us), 1e-6)
        dv = max(max(vs) - min(vs), 1e-6)
        window = (min(us) - 0.05 * du, max(us) + 0.05 * du,
                  min(vs) - 0.05 * dv, max(vs) + 0.05 * dv)
    u_min, u_max, v_min, v_max = window
    if not (u_max > u_min and v_max > v_min):
        raise EmptyWindow(f"degenerate window {window}")
    canvas = np.zeros((height, width), dtype=np.uint8)
    ordered = sorted(
        image.points,
        key=lambda p: (_GRAY.get(p.provenance, 128), p.U, p.V, p.t_emit or 0.0),
    )
    for p in ordered:
        col = int((p.U - u_min) / (u_max - u_min) * width)
        row = int((v_max - p.V) / (v_max - v_min) * height)
        value = _GRAY.get(p.provenance, 128)
        for dr, dc in ((0, 0), (0, 1), (0, -1), (1, 0), (-1, 0)):
            rr, cc = row + dr, col + dc
            if 0 <= rr < height and 0 <= cc < width:
                canvas[rr, cc] = max(int(canvas[rr, cc]), value)
    return canvas


def encode_ppm(canvas: np.ndarray) -> bytes:
    """Binary P6 with equal RGB channels."""
    height, width = canvas.shape
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    rgb = np.repeat(canvas[:, :, None], 3, axis=2)
    return header + rgb.tobytes()


def save_raster(canvas: np.ndarray, path: str) -> None:
    if path.endswith(".png"):
        try:
            from PIL import Image
        except ImportError as exc:
            raise EmptyWindow("PNG output needs the Pillow package") from exc
        Image.fromarray(np.repeat(canvas[:, :, None], 3, axis=2), "RGB").save(path)
        return
    with open(path, "wb") as fh:
        fh.write(encode_ppm(canvas))


# ---------------------------------------------------------------------------
# image metrics

def train_on_rails_residual(analysis: Analysis) -> float:
    """Worst rail-image residual over all rail-bound particles.

    Small values mean every photographed train particle lies on the
    image of the rail even while the train moves.
    """
    scene = analysis.scene
    by_source: dict[tuple[int, int], Worldline] = {
        (w.object_id, w.particle_id): w for w in scene.all_particles()
    }
    worst = None
    for r in analysis.records:
        w = by_source[r.source]
        if not isinstance(w, RailWorldline):
            continue
        fp = project(r.event.pos, scene.film)
        value = abs(rail_image_residual(fp, w.rail, scene.film))
        worst = value if worst is None else max(worst, value)
    if worst is None:
        raise NoRail("no rail-bound particles in the scene")
    return worst


@dataclass(frozen=True)
class SectionDisplacement:
    """A longitudinal section's image shift, signed along the motion."""

    y: float
    z: float
    u_geometric: float
    u_retarded: float
    delta_u: float


def _uniform_velocity(particles: list[Worldline]) -> tuple[float, float, float]:
    velocity = None
    for w in particles:
        if not isinstance(w, UniformWorldline):
            raise NotABoxScene(f"particle {w.label()} is {w.kind}, not uniform")
        if velocity is None:
            velocity = w.velocity
        elif max(abs(a - b) for a, b in zip(velocity, w.velocity)) > 1e-12:
            raise NotABoxScene("box particles must share one velocity")
    assert velocity is not None
    return velocity


def _grouped(particles, key_of, spread_of, min_size=3, min_spread=1e-9):
    groups: dict[tuple[float, float], list] = {}
    for w in particles:
        groups.setdefault(key_of(w), []).append(w)
    out = {}
    for key, members in groups.items():
        values = [spread_of(w) for w in members]
        if len(members) >= min_size and max(values) - min(values) > min_spread:
            out[key] = members
    return out


def measure_section_displacements(
    scene: Scene, threads: int = 1,
) -> list[SectionDisplacement]:
    """Image displacement of each motion-aligned section of object 1.

    Sections are maximal groups of at least three uniform particles
    sharing one (y, z) and spread in x.  Each section is represented by
    a particle at its centre; the displacement is the difference of the
    retarded and direct film abscissae, signed so motion direction does
    not change it.
    """
    particles = list(scene.objects[0].particles)
    velocity = _uniform_velocity(particles)
    if abs(velocity[0]) < 1e-12 or abs(velocity[1]) > 1e-12 or abs(velocity[2]) > 1e-12:
        raise NotABoxScene(f"box motion must be along x, got velocity {velocity}")
    rods = _grouped(
        particles,
        key_of=lambda w: (round(w.position.y, 9), round(w.position.z, 9)),
        spread_of=lambda w: w.position.x,
    )
    if not rods:
        raise NotABoxScene("no motion-aligned sections found")
    sign = math.copysign(1.0, velocity[0])
    results = []
    for (y, z), members in sorted(rods.items()):
        mid_x = float(np.mean([w.position.x for w in members]))
        probe = UniformWorldline((mid_x, y, z), velocity, scene.t_min, c=scene.film.c)
        geo = project(probe.position_at(0.0), scene.film)
        ret = project(
            retarded_emission(probe, c=scene.film.c,
                              tol_root=scene.tolerances.tol_root).pos,
            scene.film,
        )
        results.append(SectionDisplacement(
            y=y, z=z, u_geometric=geo.U, u_retarded=ret.U,
            delta_u=(ret.U - geo.U) * sign,
        ))
    return results


def apparent_rotation_angle(scene: Scene) -> float:
    """Apparent turn of object 1's transverse section, in radians.

    The section is the group of at least three uniform particles sharing
    one (x, z) and spread in y.  The angle carries the retarded image's
    end-to-end direction relative to the direct one, positive when the
    far end trails further; it changes sign with the direction of motion.
    """
    particles = list(scene.objects[0].particles)
    velocity = _uniform_velocity(particles)
    columns = _grouped(
        particles,
        key_of=lambda w: (round(w.position.x, 9), round(w.position.z, 9)),
        spread_of=lambda w: w.position.y,
    )
    if not columns:
        raise DegenerateSection("no transverse section found")
    key = sorted(columns)[0]
    members = sorted(columns[key], key=lambda w: w.position.y)
    lo, hi = members[0], members[-1]

    def emission_xy(w: Worldline) -> tuple[float, float]:
        ev = retarded_emission(w, c=scene.film.c, tol_root=scene.tolerances.tol_root)
        return ev.pos.x, ev.pos.y

    gx = hi.position.x - lo.position.x
    gy = hi.position.y - lo.position.y
    (ax_hi, ay_hi), (ax_lo, ay_lo) = emission_xy(hi), emission_xy(lo)
    ax = ax_hi - ax_lo
    ay = ay_hi - ay_lo
    if math.hypot(gx, gy) < 1e-9 or math.hypot(ax, ay) < 1e-9:
        raise DegenerateSection("transverse section has no extent")
    return math.atan2(gx * ay - gy * ax, gx * ax + gy * ay)
