"""Worldlines, the light-delay emission solver, and velocity boosts.

Units are natural: the signal speed c defaults to 1, lengths are in
light-seconds, times in seconds.  Every worldline is defined on the time
window [t_min, 0], with t = 0 the instant the photograph is taken at the
origin.  The photograph receives, from each particle, the light that left
it at the unique emission time t* solving |r(t*)| = -c t*.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NoEmissionInWindow,
    NonFinite,
    NoRealRoot,
    SchemaError,
    SuperluminalBoost,
    SuperluminalWorldline,
    TimeOutOfDomain,
)
from .expressions import ExpressionAst

DEFAULT_C = 1.0
DEFAULT_V_MAX_FRACTION = 0.999
DEFAULT_ROOT_TOL = 1e-12
_DOMAIN_SLACK = 1e-9


@dataclass(frozen=True)
class SpatialPoint:
    """A point of three-dimensional space at the photograph's rest frame."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise NonFinite(f"non-finite point ({self.x}, {self.y}, {self.z})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def distance_to(self, other: "SpatialPoint") -> float:
        return math.sqrt(
            (self.x - other.x) ** 2 + (self.y - other.y) ** 2 + (self.z - other.z) ** 2
        )

    @classmethod
    def of(cls, xyz: "SpatialPoint | Iterable[float]") -> "SpatialPoint":
        if isinstance(xyz, cls):
            return xyz
        x, y, z = (float(v) for v in xyz)
        return cls(x, y, z)


@dataclass(frozen=True)
class Event:
    """A time paired with a spatial point."""

    t: float
    pos: SpatialPoint

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        if not math.isfinite(self.t):
            raise NonFinite(f"non-finite event time {self.t}")


def _norm3(p: tuple[float, float, float]) -> float:
    return math.sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])


class Worldline:
    """Base class for particle trajectories on the window [t_min, 0].

    Subclasses set their own fields first and then call the base
    constructor, which validates the window and enforces the speed cap
    v_max (a fraction of c, default 0.999).
    """

    kind = "abstract"

    def __init__(
        self,
        t_min: float,
        object_id: int = 1,
        particle_id: int = 0,
        c: float = DEFAULT_C,
        v_max_fraction: float = DEFAULT_V_MAX_FRACTION,
    ):
        if not math.isfinite(t_min) or t_min >= 0:
            raise TimeOutOfDomain(f"t_min must be negative and finite, got {t_min}")
        self.t_min = float(t_min)
        self.object_id = int(object_id)
        self.particle_id = int(particle_id)
        cap = float(c) * float(v_max_fraction)
        speed = self.max_speed()
        if not math.isfinite(speed):
            raise NonFinite(f"particle {self.label()} has non-finite speed")
        if speed > cap:
            raise SuperluminalWorldline(
                f"particle {self.label()} reaches speed {speed:.6g} > cap {cap:.6g}"
            )

    def label(self) -> str:
        return f"{self.object_id}/{self.particle_id}"

    def max_speed(self) -> float:
        raise NotImplementedError

    def _pos(self, t: float) -> tuple[float, float, float]:
        """Position without domain checks; solvers call this in hot loops."""
        raise NotImplementedError

    def position_at(self, t: float) -> SpatialPoint:
        """Position at time t; raises TimeOutOfDomain outside [t_min, 0]."""
        if t < self.t_min - _DOMAIN_SLACK or t > _DOMAIN_SLACK:
            raise TimeOutOfDomain(
                f"t={t} outside [{self.t_min}, 0] for particle {self.label()}"
            )
        p = self._pos(t)
        if not (math.isfinite(p[0]) and math.isfinite(p[1]) and math.isfinite(p[2])):
            raise NonFinite(f"particle {self.label()} position not finite at t={t}")
        return SpatialPoint(*p)

    def sample_positions(self, ts: np.ndarray) -> np.ndarray:
        """Positions on a time grid, shape (len(ts), 3).  Approximation
        quality matches _pos exactly unless a subclass documents otherwise."""
        out = np.empty((len(ts), 3), dtype=float)
        for i, t in enumerate(ts):
            out[i] = self._pos(float(t))
        return out


def position_at(worldline: Worldline, t: float) -> SpatialPoint:
    return worldline.position_at(t)


class StaticWorldline(Worldline):
    kind = "static"

    def __init__(self, position, t_min, object_id=1, particle_id=0, **kw):
        self._p = SpatialPoint.of(position).as_tuple()
        super().__init__(t_min, object_id, particle_id, **kw)

    @property
    def position(self) -> SpatialPoint:
        return SpatialPoint(*self._p)

    def max_speed(self) -> float:
        return 0.0

    def _pos(self, t):
        return self._p

    def sample_positions(self, ts):
        return np.tile(np.array(self._p), (len(ts), 1))


class UniformWorldline(Worldline):
    """Straight-line motion r(t) = r0 + v t, with r0 the position at t = 0."""

    kind = "uniform"

    def __init__(self, position, velocity, t_min, object_id=1, particle_id=0, **kw):
        self._r0 = SpatialPoint.of(position).as_tuple()
        self._v = tuple(float(v) for v in velocity)
        if len(self._v) != 3 or not all(math.isfinite(v) for v in self._v):
            raise NonFinite(f"bad velocity {velocity!r}")
        super().__init__(t_min, object_id, particle_id, **kw)

    @property
    def position(self) -> SpatialPoint:
        return SpatialPoint(*self._r0)

    @property
    def velocity(self) -> tuple[float, float, float]:
        return self._v

    def max_speed(self) -> float:
        return _norm3(self._v)

    def _pos(self, t):
        return (
            self._r0[0] + self._v[0] * t,
            self._r0[1] + self._v[1] * t,
            self._r0[2] + self._v[2] * t,
        )

    def sample_positions(self, ts):
        return np.asarray(self._r0) + np.outer(np.asarray(ts, dtype=float), self._v)


_PLANES = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}


class CircularWorldline(Worldline):
    """Uniform circular motion in a coordinate plane through a fixed center."""

    kind = "circular"

    def __init__(
        self, center, radius, angular_rate, phase, plane, t_min,
        object_id=1, particle_id=0, **kw,
    ):
        if plane not in _PLANES:
            raise TimeOutOfDomain(f"unknown plane {plane!r}, pick one of {sorted(_PLANES)}")
        self._center = SpatialPoint.of(center).as_tuple()
        self.radius = float(radius)
        self.angular_rate = float(angular_rate)
        self.phase = float(phase)
        self.plane = plane
        if self.radius < 0 or not math.isfinite(self.radius):
            raise NonFinite(f"bad radius {radius!r}")
        super().__init__(t_min, object_id, particle_id, **kw)

    @property
    def center(self) -> SpatialPoint:
        return SpatialPoint(*self._center)

    def max_speed(self) -> float:
        return abs(self.angular_rate) * self.radius

    def _pos(self, t):
        a = self.angular_rate * t + self.phase
        i, j = _PLANES[self.plane]
        p = list(self._center)
        p[i] += self.radius * math.cos(a)
        p[j] += self.radius * math.sin(a)
        return tuple(p)

    def sample_positions(self, ts):
        a = self.angular_rate * np.asarray(ts, dtype=float) + self.phase
        i, j = _PLANES[self.plane]
        out = np.tile(np.array(self._center), (len(ts), 1))
        out[:, i] += self.radius * np.cos(a)
        out[:, j] += self.radius * np.sin(a)
        return out


class SampledWorldline(Worldline):
    """Piecewise-linear interpolation through explicit (t, position) samples.

    The first sample time defines t_min and the last must be 0.  Sample
    times are strictly increasing; interpolation is exact at the samples.
    """

    kind = "sampled"

    def __init__(self, samples: Sequence, object_id=1, particle_id=0, **kw):
        ts = []
        ps = []
        for entry in samples:
            if isinstance(entry, Event):
                t, p = entry.t, entry.pos.as_tuple()
            else:
                t, p = entry
                p = SpatialPoint.of(p).as_tuple()
            ts.append(float(t))
            ps.append(p)
        if len(ts) < 2:
            raise TimeOutOfDomain("sampled worldline needs at least two samples")
        self._ts = np.asarray(ts, dtype=float)
        self._ps = np.asarray(ps, dtype=float)
        if np.any(np.diff(self._ts) <= 0):
            raise TimeOutOfDomain("sample times must be strictly increasing")
        if abs(self._ts[-1]) > 1e-12:
            raise TimeOutOfDomain(f"last sample must sit at t=0, got {self._ts[-1]}")
        super().__init__(self._ts[0], object_id, particle_id, **kw)

    @property
    def samples(self) -> list[Event]:
        return [Event(float(t), SpatialPoint(*p)) for t, p in zip(self._ts, self._ps)]

    def max_speed(self) -> float:
        dt = np.diff(self._ts)
        dp = np.linalg.norm(np.diff(self._ps, axis=0), axis=1)
        return float(np.max(dp / dt))

    def _pos(self, t):
        ts = self._ts
        if t <= ts[0]:
            return tuple(self._ps[0])
        if t >= ts[-1]:
            return tuple(self._ps[-1])
        i = bisect_right(ts, t) - 1
        w = (t - ts[i]) / (ts[i + 1] - ts[i])
        p = self._ps[i] + w * (self._ps[i + 1] - self._ps[i])
        return (p[0], p[1], p[2])

    def sample_positions(self, ts):
        ts = np.asarray(ts, dtype=float)
        out = np.empty((len(ts), 3), dtype=float)
        for axis in range(3):
            out[:, axis] = np.interp(ts, self._ts, self._ps[:, axis])
        return out


class RailMotion:
    """Shared speed profile for a train of rail-bound particles.

    Integrates ds/dt = c * beta(t) over [t_min, 0] with fixed-step
    fourth-order (Simpson) steps, refining the step until halving it moves
    no tabulated value by more than 1e-10.  Arclength displacements are
    anchored so that displacement(0) = 0.
    """

    def __init__(self, rail, beta: ExpressionAst, t_min: float, c: float = DEFAULT_C,
                 initial_step: float = 0.01):
        self.rail = rail
        self.beta = beta
        self.t_min = float(t_min)
        self.c = float(c)
        self._beta_fn = beta.as_function()
        n = max(2, int(math.ceil(-self.t_min / float(initial_step))))
        table = self._integrate(n)
        for _ in range(20):
            finer = self._integrate(2 * n)
            if float(np.max(np.abs(finer[::2] - table))) < 1e-10:
                break
            n, table = 2 * n, finer
        else:  # pragma: no cover
            raise NonFinite("speed-profile integration did not converge")
        self._table = table
        self._n = n

    def _integrate(self, n: int) -> np.ndarray:
        ts = np.linspace(self.t_min, 0.0, n + 1)
        f = self._beta_fn
        c = self.c
        cum = np.empty(n + 1)
        cum[0] = 0.0
        total = 0.0
        for i in range(n):
            a, b = ts[i], ts[i + 1]
            m = 0.5 * (a + b)
            total += (b - a) / 6.0 * (c * f(a) + 4.0 * c * f(m) + c * f(b))
            cum[i + 1] = total
        return cum - total  # anchor displacement(0) = 0

    def _partial(self, a: float, b: float) -> float:
        f = self._beta_fn
        c = self.c
        m = 0.5 * (a + b)
        return (b - a) / 6.0 * (c * f(a) + 4.0 * c * f(m) + c * f(b))

    def displacement(self, t: float) -> float:
        """Arclength advance between times t and 0 (negative for t < 0)."""
        n = self._n
        span = -self.t_min
        u = (t - self.t_min) / span * n
        i = min(max(int(u), 0), n - 1)
        t_i = self.t_min + span * i / n
        return self._table[i] + self._partial(t_i, t)

    def max_beta(self, samples: int = 4096) -> float:
        ts = np.linspace(self.t_min, 0.0, samples)
        f = self._beta_fn
        return max(abs(f(float(t))) for t in ts)


class RailWorldline(Worldline):
    """A particle constrained to a rail, advancing along its arclength.

    The position at time t has arclength s0 + displacement(t) measured from
    the rail's left edge, where s0 fixes the particle's place at t = 0.
    """

    kind = "rail_constrained"

    def __init__(self, motion: RailMotion, arclength0: float,
                 object_id=1, particle_id=0, c: float | None = None, **kw):
        self.motion = motion
        self.arclength0 = float(arclength0)
        if c is not None and abs(c - motion.c) > 1e-12:
            raise SchemaError(
                f"rail particle uses c = {c}, its motion profile uses c = {motion.c}"
            )
        super().__init__(motion.t_min, object_id, particle_id, c=motion.c, **kw)

    @property
    def rail(self):
        return self.motion.rail

    def max_speed(self) -> float:
        return self.motion.c * self.motion.max_beta()

    def _pos(self, t):
        s = self.arclength0 + self.motion.displacement(t)
        x, y = self.motion.rail.point_at_arclength(s)
        return (x, y, self.motion.rail.plane_height)

    def sample_positions(self, ts):
        # interpolated fast path for coarse scans; exact for point queries
        rail = self.motion.rail
        out = np.empty((len(ts), 3), dtype=float)
        ss = np.array([self.arclength0 + self.motion.displacement(float(t)) for t in ts])
        xs = rail.x_at_arclength_batch(ss)
        out[:, 0] = xs
        out[:, 1] = [rail.y_at(float(x)) for x in xs]
        out[:, 2] = rail.plane_height
        return out


def emission_time_residual(worldline: Worldline, t: float, c: float = DEFAULT_C) -> float:
    """Signal-timing mismatch |r(t)| + c t; zero exactly at the emission time."""
    return _norm3(worldline._pos(t)) + c * t


def retarded_emission(
    worldline: Worldline,
    c: float = DEFAULT_C,
    tol_root: float = DEFAULT_ROOT_TOL,
    grid_n: int = 64,
) -> Event:
    """Solve |r(t*)| = -c t* for the unique emission time in [t_min, 0].

    The residual f(t) = |r(t)| + c t is strictly increasing for any
    subluminal worldline, so a sign change bracketed on a coarse grid pins
    the single root; bisection then tightens it until the position residual
    drops below tol_root and the bracket is narrower than tol_root / (2c).
    Raises NoEmissionInWindow when even t_min is too recent for light to
    have covered the distance (f(t_min) > 0).
    """
    t_min = worldline.t_min
    f_lo = emission_time_residual(worldline, t_min, c)
    if math.isnan(f_lo):
        raise NonFinite(f"residual not finite at t_min for particle {worldline.label()}")
    if f_lo > tol_root:
        raise NoEmissionInWindow(
            f"particle {worldline.label()}: no emission in [{t_min}, 0]"
            f" (residual at t_min = {f_lo:.3g})"
        )
    f_hi = emission_time_residual(worldline, 0.0, c)
    if f_hi <= 0.0:
        # |r(0)| = 0 up to roundoff: emission at the reception instant
        return Event(0.0, worldline.position_at(0.0))

    # localize the sign change, then bisect inside one cell
    lo, hi = t_min, 0.0
    ts = np.linspace(t_min, 0.0, grid_n + 1)
    for i in range(grid_n):
        v = emission_time_residual(worldline, float(ts[i + 1]), c)
        if math.isnan(v):
            raise NonFinite(f"residual not finite for particle {worldline.label()}")
        if v > 0.0:
            lo, hi = float(ts[i]), float(ts[i + 1])
            break

    width_goal = max(tol_root / (2.0 * c), 4.0 * abs(t_min) * 1e-17)
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        v = emission_time_residual(worldline, mid, c)
        if math.isnan(v):
            raise NonFinite(f"residual not finite for particle {worldline.label()}")
        if v > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= width_goal and abs(v) <= tol_root:
            break
    else:
        raise NonFinite(
            f"emission solver stalled for particle {worldline.label()}"
            f" (bracket width {hi - lo:.3g})"
        )
    return Event(mid, worldline.position_at(mid))


def retarded_emission_uniform_closed_form(
    position, velocity, c: float = DEFAULT_C
) -> Event:
    """Emission event for straight-line motion, via the exact quadratic.

    With r(t) = r0 + v t, squaring |r(t)| = -c t gives
    (c^2 - |v|^2) t^2 - 2 (r0.v) t - |r0|^2 = 0, and the emission time is
    the non-positive root.  The two algebraically equivalent root forms are
    chosen by the sign of r0.v to avoid cancellation.
    """
    r0 = SpatialPoint.of(position)
    v = tuple(float(u) for u in velocity)
    v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
    if v2 >= c * c:
        raise SuperluminalWorldline(f"|v| = {math.sqrt(v2):.6g} >= c = {c}")
    r2 = r0.norm() ** 2
    rv = r0.x * v[0] + r0.y * v[1] + r0.z * v[2]
    disc = rv * rv + (c * c - v2) * r2
    if disc < 0.0:  # cannot happen for real inputs; guards roundoff surprises
        raise NoRealRoot(f"discriminant {disc} < 0")
    s = math.sqrt(disc)
    if rv > 0.0:
        t_star = -r2 / (rv + s)
    else:
        t_star = (rv - s) / (c * c - v2)
    pos = SpatialPoint(r0.x + v[0] * t_star, r0.y + v[1] * t_star, r0.z + v[2] * t_star)
    return Event(t_star, pos)


class Boost:
    """A velocity boost between inertial frames sharing their origin event."""

    def __init__(self, velocity, c: float = DEFAULT_C):
        self.velocity = np.asarray([float(v) for v in velocity], dtype=float)
        self.c = float(c)
        speed = float(np.linalg.norm(self.velocity))
        if not math.isfinite(speed):
            raise NonFinite(f"bad boost velocity {velocity!r}")
        if speed >= self.c:
            raise SuperluminalBoost(f"boost speed {speed:.6g} >= c = {self.c}")
        self.speed = speed

    @property
    def gamma(self) -> float:
        b = self.speed / self.c
        return 1.0 / math.sqrt(1.0 - b * b)

    def inverse(self) -> "Boost":
        return Boost(-self.velocity, self.c)


def boost_event(boost: Boost, event: Event) -> Event:
    """Coordinates of an event in the frame moving with the boost velocity.

    Decomposes the position into components along and across the boost:
    the parallel part and the time mix in the usual way, the transverse
    part is untouched.  The squared interval c^2 t^2 - |r|^2 is preserved
    to roundoff.
    """
    v = boost.velocity
    c = boost.c
    if boost.speed == 0.0:
        return event
    x = event.pos.as_array()
    t = event.t
    n = v / boost.speed
    x_par = float(np.dot(x, n))
    g = boost.gamma
    t_prime = g * (t - float(np.dot(v, x)) / (c * c))
    x_prime = x + ((g - 1.0) * x_par - g * boost.speed * t) * n
    return Event(t_prime, SpatialPoint(*x_prime))
