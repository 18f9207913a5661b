"""Pinhole projection onto a flat film and the rail-image geometry.

The pinhole sits at the origin, looking down the +y axis.  The film is the
plane y = D behind a point at distance D from the pinhole (folded forward,
so the image is upright): a space point (x, y, z) with y > 0 lands at film
coordinates

    U = D x / y        (horizontal, parallel to the x axis)
    V = D z / y        (vertical, parallel to the z axis)

Rails live in the horizontal plane z = C with C < 0, shaped as y = g(x).
Inverting the projection for that plane gives x = C U / V, y = D C / V,
and the image of the whole rail is the set of film points satisfying
V g(C U / V) = D C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BehindPinhole,
    DegenerateV,
    NotUniform,
    RailBehindPinhole,
    XOutOfDomain,
)
from .expressions import ExpressionAst
from .kinematics import (
    DEFAULT_C,
    Boost,
    Event,
    SpatialPoint,
    UniformWorldline,
    Worldline,
    boost_event,
    retarded_emission,
)

_V_EPS = 1e-12

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


@dataclass(frozen=True)
class FilmConfig:
    """Camera geometry: film distance D, rail plane height C, signal speed c.

    Parameters
    ----------
    film_distance : float
        Distance D from the pinhole to the film plane, D > 0.
    rail_plane_height : float
        Height C of the rail plane z = C, C < 0 (rails run below the axis).
    c : float
        Signal speed; 1 in natural units.
    y_min : float
        Points with y at or below this limit count as behind the pinhole.
    """

    film_distance: float
    rail_plane_height: float
    c: float = DEFAULT_C
    y_min: float = 1e-9

    def __post_init__(self):
        if not (math.isfinite(self.film_distance) and self.film_distance > 0):
            raise BehindPinhole(f"film distance must be positive, got {self.film_distance}")
        if not (math.isfinite(self.rail_plane_height) and self.rail_plane_height < 0):
            raise DegenerateV(
                f"rail plane height must be negative, got {self.rail_plane_height}"
            )
        if not (math.isfinite(self.c) and self.c > 0):
            raise DegenerateV(f"signal speed must be positive, got {self.c}")


@dataclass(frozen=True)
class FilmPoint:
    """A point on the film: coordinates, optional emission time, provenance.

    provenance is "geometric" for plain projections, "single_image" for the
    image of a lone emission, "couple_image" for the image of two particles
    photographed in contact.
    """

    U: float
    V: float
    t_emit: float | None = None
    provenance: str = "geometric"
    source: tuple[int, int] | None = None


def project(p: SpatialPoint, film: FilmConfig) -> FilmPoint:
    """Project a space point through the pinhole onto the film plane.

    Parameters
    ----------
    p : SpatialPoint
        Point with p.y > film.y_min (in front of the pinhole).
    film : FilmConfig

    Returns
    -------
    FilmPoint
        (U, V) = (D x / y, D z / y) with geometric provenance.
    """
    if p.y <= film.y_min:
        raise BehindPinhole(f"point with y = {p.y} is not in front of the pinhole")
    d = film.film_distance
    return FilmPoint(d * p.x / p.y, d * p.z / p.y)


def unproject(fp: FilmPoint, film: FilmConfig) -> tuple[float, float]:
    """Invert the projection for points of the rail plane z = C.

    Returns the apparent (x, y) position.  Film points with |V| below
    1e-12 cannot be inverted (the rail plane maps to V != 0).
    """
    if abs(fp.V) < _V_EPS:
        raise DegenerateV(f"cannot unproject film point with V = {fp.V}")
    c_plane = film.rail_plane_height
    d = film.film_distance
    return (c_plane * fp.U / fp.V, d * c_plane / fp.V)


class RailCurve:
    """A rail y = g(x) in the plane z = C, with arclength parameterization.

    Arclength is measured from the left edge of the x domain.  A cumulative
    table of Gauss-Legendre segment integrals of sqrt(1 + g'(x)^2) gives
    arclength_at; the inverse uses a cubic Hermite seed (slopes dx/ds are
    known exactly at the table nodes) polished by Newton iteration.
    """

    def __init__(self, g: ExpressionAst, x_domain: tuple[float, float],
                 plane_height: float, table_size: int = 2048):
        a, b = float(x_domain[0]), float(x_domain[1])
        if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
            raise XOutOfDomain(f"bad rail domain [{a}, {b}]")
        self.g = g
        self.x_domain = (a, b)
        self.plane_height = float(plane_height)
        self.g_fn = g.as_function()
        self.dg_fn = g.derivative().as_function()
        self._m = int(table_size)
        self._xs: np.ndarray | None = None
        self._cum: np.ndarray | None = None
        self._slopes: np.ndarray | None = None

    def y_at(self, x: float) -> float:
        return self.g_fn(x)

    def slope_at(self, x: float) -> float:
        return self.dg_fn(x)

    def _speed(self, x: float) -> float:
        d = self.dg_fn(x)
        return math.sqrt(1.0 + d * d)

    def _gl(self, a: float, b: float) -> float:
        if a == b:
            return 0.0
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        total = 0.0
        for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
            total += weight * self._speed(mid + half * node)
        return total * half

    def _ensure_tables(self) -> None:
        if self._xs is not None:
            return
        a, b = self.x_domain
        xs = np.linspace(a, b, self._m + 1)
        cum = np.empty(self._m + 1)
        cum[0] = 0.0
        run = 0.0
        for i in range(self._m):
            run += self._gl(float(xs[i]), float(xs[i + 1]))
            cum[i + 1] = run
        speeds = np.array([self._speed(float(x)) for x in xs])
        if not np.all(np.isfinite(cum)):
            raise XOutOfDomain("rail shape not finite over its x domain")
        self._xs = xs
        self._cum = cum
        self._slopes = 1.0 / speeds  # dx/ds at the nodes

    @property
    def total_arclength(self) -> float:
        self._ensure_tables()
        return float(self._cum[-1])

    def arclength_at(self, x: float) -> float:
        """Arclength from the left domain edge to abscissa x."""
        self._ensure_tables()
        a, b = self.x_domain
        slack = 1e-9 * max(1.0, b - a)
        if x < a - slack or x > b + slack:
            raise XOutOfDomain(f"x = {x} outside rail domain [{a}, {b}]")
        x = min(max(x, a), b)
        i = int(np.searchsorted(self._xs, x)) - 1
        i = min(max(i, 0), self._m - 1)
        return float(self._cum[i]) + self._gl(float(self._xs[i]), x)

    def _hermite_guess(self, s: np.ndarray) -> np.ndarray:
        cum, xs, slopes = self._cum, self._xs, self._slopes
        idx = np.clip(np.searchsorted(cum, s) - 1, 0, self._m - 1)
        s0 = cum[idx]
        h = cum[idx + 1] - s0
        u = np.clip((s - s0) / h, 0.0, 1.0)
        u2 = u * u
        u3 = u2 * u
        h00 = 2 * u3 - 3 * u2 + 1
        h10 = u3 - 2 * u2 + u
        h01 = -2 * u3 + 3 * u2
        h11 = u3 - u2
        return (h00 * xs[idx] + h10 * h * slopes[idx]
                + h01 * xs[idx + 1] + h11 * h * slopes[idx + 1])

    def x_at_arclength(self, s: float) -> float:
        """Abscissa at arclength s, accurate to roughly 1e-13 of the span."""
        self._ensure_tables()
        length = float(self._cum[-1])
        slack = 1e-9 * max(1.0, length)
        if s < -slack or s > length + slack:
            raise XOutOfDomain(f"arclength {s} outside [0, {length}]")
        s = min(max(s, 0.0), length)
        a, b = self.x_domain
        x = float(self._hermite_guess(np.array([s]))[0])
        tol = 1e-13 * max(1.0, length)
        for _ in range(20):
            err = self.arclength_at(x) - s
            if abs(err) <= tol:
                break
            x = min(max(x - err / self._speed(x), a), b)
        return x

    def x_at_arclength_batch(self, ss: np.ndarray) -> np.ndarray:
        """Vectorized inverse via the Hermite table alone.

        Error stays below ~1e-8 of the span; intended for coarse scans
        (contact grids), with x_at_arclength for exact point queries.
        """
        self._ensure_tables()
        s = np.clip(np.asarray(ss, dtype=float), 0.0, float(self._cum[-1]))
        return self._hermite_guess(s)

    def point_at_arclength(self, s: float) -> tuple[float, float]:
        x = self.x_at_arclength(s)
        return (x, self.g_fn(x))

    def sample_xs(self, n: int) -> np.ndarray:
        return np.linspace(self.x_domain[0], self.x_domain[1], n)


def rail_image_residual(fp: FilmPoint, rail: RailCurve, film: FilmConfig) -> float:
    """How far a film point sits from the rail's image curve.

    Zero (to roundoff) exactly when the point satisfies the implicit
    rail-image equation V g(C U / V) = D C.  The returned value is the
    signed defect V g(C U / V) - D C.
    """
    if abs(fp.V) < _V_EPS:
        raise DegenerateV(f"film point with V = {fp.V} has no rail abscissa")
    c_plane = film.rail_plane_height
    x = c_plane * fp.U / fp.V
    a, b = rail.x_domain
    slack = 1e-9 * max(1.0, b - a)
    if x < a - slack or x > b + slack:
        raise XOutOfDomain(f"apparent abscissa {x} outside rail domain [{a}, {b}]")
    return fp.V * rail.g_fn(x) - film.film_distance * c_plane


def sample_rail_image(rail: RailCurve, film: FilmConfig, n: int) -> list[FilmPoint]:
    """Project n evenly spaced rail points onto the film.

    Parameters
    ----------
    rail : RailCurve
    film : FilmConfig
    n : int
        Number of samples, at least 2; endpoints of the x domain included.

    Returns
    -------
    list[FilmPoint]
        Geometric film points tracing the rail's image curve.
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    xs = rail.sample_xs(n)
    ys = [rail.g_fn(float(x)) for x in xs]
    if min(ys) <= film.y_min:
        raise RailBehindPinhole(
            f"rail dips to y = {min(ys):.6g} inside its domain"
        )
    return [
        project(SpatialPoint(float(x), float(y), rail.plane_height), film)
        for x, y in zip(xs, ys)
    ]


def comoving_film_point(worldline: Worldline, film: FilmConfig) -> FilmPoint:
    """Film point of a uniformly moving particle via its rest frame.

    Instead of solving the delay equation directly, (a) boost to the frame
    in which the particle rests, (b) read off the emission event there,
    where the particle sits still and light simply needs |r'| / c of lead
    time, (c) boost the emission event back, and (d) project it.  Agrees
    with project(retarded_emission(...)) to numerical precision; the two
    routes make a strong cross-check of solver and boost alike.
    """
    if not isinstance(worldline, UniformWorldline):
        raise NotUniform(f"co-moving route needs uniform motion, got {worldline.kind}")
    c = film.c
    boost = Boost(worldline.velocity, c)
    rest_pos = boost_event(boost, Event(0.0, worldline.position)).pos
    rest_emission = Event(-rest_pos.norm() / c, rest_pos)
    emission = boost_event(boost.inverse(), rest_emission)
    fp = project(emission.pos, film)
    return FilmPoint(
        fp.U, fp.V, t_emit=emission.t, provenance="single_image",
        source=(worldline.object_id, worldline.particle_id),
    )
