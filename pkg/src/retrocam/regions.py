"""Contact events, photographic interval, and the region taxonomy.

Everything here reduces photographs of touching objects to set
computations.  Contact events are the local minima of pairwise distance
between the two objects' particles; from those events come the regions:

D_R(t)      loci in contact at a given time
D_I         loci in contact at some time in the photographic interval
D_P         loci in contact at every time in the interval
D_SP        loci in contact at every time some contact exists
zero union  loci whose contact instant is exactly the one the camera sees
D_G         everything the photograph genuinely records, each point
            tagged single_image or couple_image

The assertion suite at the bottom checks the relations these sets must
satisfy; each check reports pass, fail, or vacuous together with its
worst numerical violation.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from ._util import tmap
from .errors import RoleMismatch
from .kinematics import Event, SpatialPoint, Worldline, retarded_emission
from .optics import FilmPoint, project
from .scenes import Scene, Tolerances

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ContactEvent:
    """One meeting of an object-1 particle with an object-2 particle."""

    t: float
    locus: SpatialPoint
    first: tuple[int, int]
    second: tuple[int, int]
    min_distance: float


@dataclass(frozen=True)
class PhotographicInterval:
    """Closed time span between the earliest and latest emission."""

    t_lower: float
    t_upper: float

    def contains(self, t: float, slack: float = 0.0) -> bool:
        return self.t_lower - slack <= t <= self.t_upper + slack


@dataclass(frozen=True)
class IsotropicShell:
    """Radial band of space whose light arrives during the interval."""

    r_inner: float
    r_outer: float

    def radial_excess(self, p: SpatialPoint) -> float:
        """How far outside the shell the point sits; zero inside."""
        r = p.norm()
        return max(0.0, self.r_inner - r, r - self.r_outer)


@dataclass(frozen=True)
class RegionPoint:
    point: SpatialPoint
    times: tuple[float, ...] = ()
    provenance: str | None = None
    sources: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class RegionSet:
    """A finite set of region points with a fixed matching tolerance."""

    role: str
    points: tuple[RegionPoint, ...]
    eps: float

    def __post_init__(self):
        ordered = tuple(sorted(
            self.points,
            key=lambda rp: (rp.point.x, rp.point.y, rp.point.z),
        ))
        object.__setattr__(self, "points", ordered)

    def __len__(self) -> int:
        return len(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)

    def distance_to(self, p: SpatialPoint) -> float:
        """Distance from p to the nearest member; infinity when empty."""
        if not self.points:
            return math.inf
        return min(rp.point.distance_to(p) for rp in self.points)

    def contains(self, p: SpatialPoint, tol: float | None = None) -> bool:
        return self.distance_to(p) <= (self.eps if tol is None else tol)


@dataclass(frozen=True)
class EmissionRecord:
    """A particle's photographed event: where its light left from."""

    source: tuple[int, int]
    event: Event


@dataclass(frozen=True)
class CoupleMatch:
    """A photographed contact together with both members' records."""

    event: ContactEvent
    first: EmissionRecord
    second: EmissionRecord


@dataclass(frozen=True)
class AssertionReport:
    assertion_id: str
    status: str  # pass | fail | vacuous
    max_violation: float
    detail: str
    witnesses: tuple[str, ...] = ()


@dataclass
class Analysis:
    """Everything computed about one scene's photograph, in one pass."""

    scene: Scene
    records: list[EmissionRecord]
    all_events: list[ContactEvent]
    events: list[ContactEvent]  # restricted to the photographic interval
    interval: PhotographicInterval
    shell: IsotropicShell
    integrated: RegionSet
    multi_meeting: tuple[SpatialPoint, ...]
    permanent: RegionSet
    semi_permanent: RegionSet
    zero_union: RegionSet
    genuine: RegionSet
    couples: list[CoupleMatch]
    assertions: list[AssertionReport] = field(default_factory=list)


# ---------------------------------------------------------------------------
# emissions and the photographic interval

def emission_records(scene: Scene, threads: int = 1) -> list[EmissionRecord]:
    particles = scene.all_particles()

    def solve(w: Worldline) -> EmissionRecord:
        ev = retarded_emission(w, c=scene.film.c, tol_root=scene.tolerances.tol_root)
        return EmissionRecord((w.object_id, w.particle_id), ev)

    return tmap(solve, particles, threads=threads)


def photographic_interval(records: list[EmissionRecord]) -> PhotographicInterval:
    times = [r.event.t for r in records]
    return PhotographicInterval(min(times), max(times))


def isotropic_shell(interval: PhotographicInterval, c: float) -> IsotropicShell:
    return IsotropicShell(-c * interval.t_upper, -c * interval.t_lower)


# ---------------------------------------------------------------------------
# contact events

def _pair_distance(w1: Worldline, w2: Worldline, t: float) -> float:
    a = w1._pos(t)
    b = w2._pos(t)
    return math.sqrt(
        (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2
    )


def _refine_minimum(f, a: float, b: float, width_goal: float) -> tuple[float, float]:
    """Golden-section minimum of a unimodal f on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if b - a <= width_goal:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def _pair_events(
    w1: Worldline,
    w2: Worldline,
    grid: np.ndarray,
    pos1: np.ndarray,
    pos2: np.ndarray,
    tol: Tolerances,
    c: float,
) -> list[ContactEvent]:
    d = np.linalg.norm(pos1 - pos2, axis=1)
    left = np.empty_like(d)
    right = np.empty_like(d)
    left[0], left[1:] = d[0], d[:-1]
    right[-1], right[:-1] = d[-1], d[1:]
    candidates = np.flatnonzero((d <= left) & (d <= right))
    if candidates.size == 0:
        return []
    spacing = float(grid[1] - grid[0])
    # positions move at most c each, so d cannot drop by more than
    # 2 c spacing between neighbouring grid times
    reachable = tol.eps_contact + 2.0 * c * spacing + 1e-7
    events: list[ContactEvent] = []
    for i in (int(k) for k in candidates):
        t_grid = float(grid[i])
        if d[i] <= tol.eps_contact:
            t_ev = t_grid
        elif d[i] <= reachable:
            a = float(grid[max(0, i - 1)])
            b = float(grid[min(len(grid) - 1, i + 1)])
            t_ev, d_min = _refine_minimum(
                lambda t: _pair_distance(w1, w2, t), a, b, tol.eps_time
            )
            if d_min > tol.eps_contact:
                continue
        else:
            continue
        p1 = w1.position_at(t_ev)
        p2 = w2.position_at(t_ev)
        locus = SpatialPoint(
            0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y), 0.5 * (p1.z + p2.z)
        )
        events.append(ContactEvent(
            t_ev, locus, (w1.object_id, w1.particle_id),
            (w2.object_id, w2.particle_id), p1.distance_to(p2),
        ))
    events.sort(key=lambda e: e.t)
    kept: list[ContactEvent] = []
    for e in events:
        if kept and abs(e.t - kept[-1].t) <= tol.eps_time \
                and e.locus.distance_to(kept[-1].locus) <= tol.eps_set:
            continue
        kept.append(e)
    return kept


def find_contacts(scene: Scene, threads: int = 1) -> list[ContactEvent]:
    """All contact events between the two objects over [t_min, 0].

    Local minima of each cross-object pair's distance are located on the
    scene time grid and sharpened by golden-section search; a minimum
    within eps_contact becomes an event at the midpoint of the two
    particles.  A pair resting in contact yields one event per grid time
    it spans, so a permanent contact is visible at every sampled instant.
    """
    grid = scene.time_grid()
    first, second = scene.objects
    tol = scene.tolerances
    c = scene.film.c
    cache2 = {p.particle_id: p.sample_positions(grid) for p in second.particles}

    def scan(w1: Worldline) -> list[ContactEvent]:
        pos1 = w1.sample_positions(grid)
        found: list[ContactEvent] = []
        for w2 in second.particles:
            found.extend(_pair_events(
                w1, w2, grid, pos1, cache2[w2.particle_id], tol, c
            ))
        return found

    events = [e for chunk in tmap(scan, first.particles, threads=threads) for e in chunk]
    events.sort(key=lambda e: (e.t, e.first[1], e.second[1]))
    return events


# ---------------------------------------------------------------------------
# regions

def _dedup_loci(
    entries: list[tuple[SpatialPoint, float]], eps_set: float, eps_time: float | None = None,
) -> list[RegionPoint]:
    """Merge points closer than eps_set; collect their times."""
    merged: list[tuple[SpatialPoint, list[float]]] = []
    for p, t in entries:
        for q, times in merged:
            if q.distance_to(p) <= eps_set and (
                eps_time is None or any(abs(t - u) <= eps_time for u in times)
            ):
                times.append(t)
                break
        else:
            merged.append((p, [t]))
    return [RegionPoint(p, tuple(ts)) for p, ts in merged]


def region_at(
    events: list[ContactEvent], t: float, time_tol: float, eps_set: float,
) -> RegionSet:
    """D_R(t): contact loci present within time_tol of the instant t."""
    times = [e.t for e in events]
    lo = bisect.bisect_left(times, t - time_tol)
    hi = bisect.bisect_right(times, t + time_tol)
    picked = [(events[i].locus, events[i].t) for i in range(lo, hi)]
    return RegionSet("D_R", tuple(_dedup_loci(picked, eps_set)), eps_set)


def zero_region_at(region: RegionSet, t: float, c: float, eps_set: float) -> RegionSet:
    """The photographable part of D_R(t): loci at light distance -c t."""
    if region.role != "D_R":
        raise RoleMismatch(
            f"zero region needs an instantaneous D_R region, got {region.role!r}"
        )
    keep = tuple(
        rp for rp in region.points if abs(rp.point.norm() + c * t) <= eps_set
    )
    return RegionSet("D_R0", keep, eps_set)


def integrated_region(
    events: list[ContactEvent], tol: Tolerances,
) -> tuple[RegionSet, tuple[SpatialPoint, ...]]:
    """D_I plus the loci that host two or more separated meetings."""
    deduped = _dedup_loci([(e.locus, e.t) for e in events], tol.eps_set)
    multi = tuple(
        rp.point for rp in deduped
        if max(rp.times) - min(rp.times) > tol.eps_time
    )
    return RegionSet("D_I", tuple(deduped), tol.eps_set), multi


def permanent_regions(
    events: list[ContactEvent],
    interval: PhotographicInterval,
    scene: Scene,
) -> tuple[RegionSet, RegionSet]:
    """D_P (contact at every sampled instant) and D_SP (at every instant
    with any contact).

    Slices are matched with half the contact grid spacing so a contact
    listed at the nearest grid time still covers the slice instants
    between grid times.
    """
    tol = scene.tolerances
    spacing = (0.0 - scene.t_min) / (scene.time_grid_n - 1)
    slice_tol = max(tol.eps_time, 0.5 * spacing)
    slice_times = np.linspace(interval.t_lower, interval.t_upper, scene.time_grid_n)
    slices = [region_at(events, float(t), slice_tol, tol.eps_set) for t in slice_times]
    nonempty = [s for s in slices if s.points]
    if not nonempty:
        return (RegionSet("D_P", (), tol.eps_set), RegionSet("D_SP", (), tol.eps_set))
    core = [
        rp for rp in nonempty[0].points
        if all(s.contains(rp.point) for s in nonempty[1:])
    ]
    if len(nonempty) == len(slices):
        return (
            RegionSet("D_P", tuple(core), tol.eps_set),
            RegionSet("D_SP", tuple(core), tol.eps_set),
        )
    return (
        RegionSet("D_P", (), tol.eps_set),
        RegionSet("D_SP", tuple(core), tol.eps_set),
    )


def _is_photographed(e: ContactEvent, c: float, eps_set: float) -> bool:
    return abs(e.locus.norm() + c * e.t) <= eps_set


def zero_union(events: list[ContactEvent], c: float, eps_set: float) -> RegionSet:
    """Union over the interval of the photographable slices.

    Contacts are photographable at isolated instants, so the union is
    assembled from the events themselves rather than from slice sampling,
    which would miss instants between slice times.
    """
    picked = [
        (e.locus, e.t) for e in events if _is_photographed(e, c, eps_set)
    ]
    return RegionSet("D_R0_union", tuple(_dedup_loci(picked, eps_set)), eps_set)


# ---------------------------------------------------------------------------
# the genuine image

def _record_matches_event(
    r: EmissionRecord, e: ContactEvent, tol: Tolerances,
) -> bool:
    return (
        abs(r.event.t - e.t) <= tol.eps_time
        and r.event.pos.distance_to(e.locus) <= tol.eps_set
    )


def genuine_region(
    records: list[EmissionRecord],
    events: list[ContactEvent],
    tol: Tolerances,
    c: float,
) -> tuple[RegionSet, list[CoupleMatch]]:
    """D_G: one entry per photographed thing, singles merged, couples
    folded into a single locus entry shared by both members."""
    by_source = {r.source: r for r in records}
    couples: list[CoupleMatch] = []
    absorbed: set[tuple[int, int]] = set()
    for e in events:
        if not _is_photographed(e, c, tol.eps_set):
            continue
        r1 = by_source.get(e.first)
        r2 = by_source.get(e.second)
        if r1 is None or r2 is None:
            continue
        if _record_matches_event(r1, e, tol) and _record_matches_event(r2, e, tol):
            duplicate = any(
                abs(m.event.t - e.t) <= tol.eps_time
                and m.event.locus.distance_to(e.locus) <= tol.eps_set
                and {m.first.source, m.second.source} == {e.first, e.second}
                for m in couples
            )
            if not duplicate:
                couples.append(CoupleMatch(e, r1, r2))
            absorbed.add(e.first)
            absorbed.add(e.second)
    points: list[RegionPoint] = [
        RegionPoint(
            m.event.locus, (m.event.t,), "couple_image",
            (m.first.source, m.second.source),
        )
        for m in couples
    ]
    for r in records:
        if r.source in absorbed:
            continue
        for i, rp in enumerate(points):
            if rp.provenance == "single_image" \
                    and rp.point.distance_to(r.event.pos) <= tol.eps_set:
                points[i] = RegionPoint(
                    rp.point, rp.times + (r.event.t,), "single_image",
                    rp.sources + (r.source,),
                )
                break
        else:
            points.append(RegionPoint(
                r.event.pos, (r.event.t,), "single_image", (r.source,)
            ))
    return RegionSet("D_G", tuple(points), tol.eps_set), couples


# ---------------------------------------------------------------------------
# assertion suite

def _report(assertion_id, status, violation, detail, witnesses=()):
    return AssertionReport(assertion_id, status, violation, detail, tuple(witnesses))


def _check_photographed_couples(a: Analysis) -> AssertionReport:
    """1: every photographed contact is a genuine couple in the shell."""
    tol = a.scene.tolerances
    c = a.scene.film.c
    shell_tol = tol.eps_set + c * tol.eps_time
    photographed = [
        e for e in a.events if _is_photographed(e, c, tol.eps_set)
    ]
    if not photographed:
        return _report("1", "vacuous", 0.0, "no photographed contact events")
    by_source = {r.source: r for r in a.records}
    worst = 0.0
    bad: list[str] = []
    for e in photographed:
        worst = max(worst, abs(e.locus.norm() + c * e.t), a.shell.radial_excess(e.locus))
        if a.shell.radial_excess(e.locus) > shell_tol:
            bad.append(f"event at t={e.t:.12g} outside the shell")
        for source in (e.first, e.second):
            r = by_source[source]
            dt = abs(r.event.t - e.t)
            dx = r.event.pos.distance_to(e.locus)
            worst = max(worst, dx)
            if dt > tol.eps_time or dx > tol.eps_set:
                bad.append(
                    f"member {source} photographs at t={r.event.t:.12g}, "
                    f"event at t={e.t:.12g}"
                )
    if bad:
        return _report("1", "fail", worst,
                       f"{len(bad)} photographed contact(s) without a matching couple",
                       bad[:5])
    return _report("1", "pass", worst,
                   f"{len(photographed)} photographed contact(s), each a couple in the shell")


def _photographed_clusters(a: Analysis, p: SpatialPoint) -> int:
    """Distinct photographed contact instants at the locus p."""
    tol = a.scene.tolerances
    c = a.scene.film.c
    times = sorted(
        e.t for e in a.events
        if _is_photographed(e, c, tol.eps_set) and e.locus.distance_to(p) <= tol.eps_set
    )
    clusters = 0
    last = None
    for t in times:
        if last is None or t - last > tol.eps_time:
            clusters += 1
        last = t
    return clusters


def _check_multi_meeting(a: Analysis) -> AssertionReport:
    """2: a locus met repeatedly is photographed at most once."""
    if not a.multi_meeting:
        return _report("2", "vacuous", 0.0, "no locus hosts separated meetings")
    worst = 0.0
    bad = []
    for p in a.multi_meeting:
        n = _photographed_clusters(a, p)
        worst = max(worst, float(max(0, n - 1)))
        if n > 1:
            bad.append(f"locus {p.as_tuple()} photographed {n} times")
    if bad:
        return _report("2", "fail", worst, "a repeated meeting place was photographed twice", bad[:5])
    return _report("2", "pass", worst,
                   f"{len(a.multi_meeting)} repeated meeting place(s), none photographed twice")


def _check_permanent_photographed_once(a: Analysis) -> AssertionReport:
    """3: each permanent-contact point shows exactly one photographed couple."""
    tol = a.scene.tolerances
    c = a.scene.film.c
    if not a.permanent:
        return _report("3", "vacuous", 0.0, "no permanent contact region")
    shell_tol = tol.eps_set + c * tol.eps_time
    worst = 0.0
    bad = []
    for rp in a.permanent.points:
        n = _photographed_clusters(a, rp.point)
        excess = a.shell.radial_excess(rp.point)
        worst = max(worst, float(abs(n - 1)), excess)
        if n != 1:
            bad.append(f"point {rp.point.as_tuple()} photographed {n} times, wanted 1")
        if excess > shell_tol:
            bad.append(f"point {rp.point.as_tuple()} lies {excess:.3g} outside the shell")
    if bad:
        return _report("3", "fail", worst, "a permanent point broke the once-exactly rule", bad[:5])
    return _report("3", "pass", worst,
                   f"{len(a.permanent)} permanent point(s), each photographed exactly once, in shell")


def _check_subset(assertion_id, label, small: RegionSet, a: Analysis) -> AssertionReport:
    """4a/4b: the given region sits inside both D_G and D_I."""
    if not small:
        return _report(assertion_id, "vacuous", 0.0, f"{label} is empty")
    eps = small.eps
    worst = 0.0
    bad = []
    for rp in small.points:
        gap = max(a.genuine.distance_to(rp.point), a.integrated.distance_to(rp.point))
        worst = max(worst, min(gap, 1e30))
        if gap > eps:
            bad.append(f"point {rp.point.as_tuple()} missing from D_G or D_I")
    if bad:
        return _report(assertion_id, "fail", worst,
                       f"{label} escapes the genuine image", bad[:5])
    return _report(assertion_id, "pass", worst,
                   f"{label} ({len(small)} point(s)) contained in D_G and D_I")


def _check_semi_permanent_escape(a: Analysis) -> AssertionReport:
    """4c: with no permanent region, a semi-permanent point can avoid
    every photographable slice."""
    if a.permanent or not a.semi_permanent:
        return _report("4c", "vacuous", 0.0,
                       "needs an empty D_P next to a non-empty D_SP")
    eps = a.semi_permanent.eps
    best = 0.0
    witness = None
    for rp in a.semi_permanent.points:
        gap = a.zero_union.distance_to(rp.point)
        if gap > best:
            best = gap
            witness = rp.point
    if witness is not None and best > eps:
        shown = "unbounded" if math.isinf(best) else f"{best:.3g}"
        return _report("4c", "pass", 0.0,
                       "a semi-permanent point is never photographable",
                       (f"point {witness.as_tuple()} at distance {shown} "
                        f"from the photographable union",))
    return _report("4c", "vacuous", 0.0,
                   "every semi-permanent point happened to be photographable")


def _check_partition(a: Analysis) -> AssertionReport:
    """5: D_G splits into singles and couples; couples are exactly the
    photographable union and expose one film point."""
    tol = a.scene.tolerances
    if not a.genuine:
        return _report("5", "vacuous", 0.0, "nothing was photographed")
    worst = 0.0
    bad = []
    couple_points = [rp for rp in a.genuine.points if rp.provenance == "couple_image"]
    for rp in a.genuine.points:
        if rp.provenance not in ("single_image", "couple_image"):
            bad.append(f"point {rp.point.as_tuple()} has provenance {rp.provenance!r}")
    for rp in couple_points:
        gap = a.zero_union.distance_to(rp.point)
        worst = max(worst, min(gap, 1e30))
        if gap > tol.eps_set:
            bad.append(f"couple at {rp.point.as_tuple()} missing from the photographable union")
    for rp in a.zero_union.points:
        gap = min(
            (q.point.distance_to(rp.point) for q in couple_points), default=math.inf
        )
        worst = max(worst, min(gap, 1e30))
        if gap > tol.eps_set:
            bad.append(f"photographable point {rp.point.as_tuple()} has no couple entry")
    film = a.scene.film
    for m in a.couples:
        fp1 = project(m.first.event.pos, film)
        fp2 = project(m.second.event.pos, film)
        gap = math.hypot(fp1.U - fp2.U, fp1.V - fp2.V)
        worst = max(worst, gap)
        if gap > 1e-9:
            bad.append(
                f"couple of {m.first.source} and {m.second.source} splits on film by {gap:.3g}"
            )
    if bad:
        return _report("5", "fail", worst, "the single/couple partition broke", bad[:5])
    n_c = len(couple_points)
    n_s = len(a.genuine) - n_c
    return _report("5", "pass", worst,
                   f"{n_s} single(s) and {n_c} couple(s) partition the genuine image")


def verify_assertions(a: Analysis) -> list[AssertionReport]:
    return [
        _check_photographed_couples(a),
        _check_multi_meeting(a),
        _check_permanent_photographed_once(a),
        _check_subset("4a", "the photographable union", a.zero_union, a),
        _check_subset("4b", "the permanent region", a.permanent, a),
        _check_semi_permanent_escape(a),
        _check_partition(a),
    ]


# ---------------------------------------------------------------------------
# one-pass analysis and the serializable report

def analyze(scene: Scene, threads: int = 1) -> Analysis:
    """Run the full pipeline once; every region derives from one event
    list and one emission pass."""
    tol = scene.tolerances
    c = scene.film.c
    records = emission_records(scene, threads=threads)
    interval = photographic_interval(records)
    shell = isotropic_shell(interval, c)
    all_events = find_contacts(scene, threads=threads)
    events = [
        e for e in all_events if interval.contains(e.t, slack=tol.eps_time)
    ]
    integrated, multi = integrated_region(events, tol)
    permanent, semi = permanent_regions(events, interval, scene)
    zero = zero_union(events, c, tol.eps_set)
    genuine, couples = genuine_region(records, events, tol, c)
    analysis = Analysis(
        scene=scene, records=records, all_events=all_events, events=events,
        interval=interval, shell=shell, integrated=integrated,
        multi_meeting=multi, permanent=permanent, semi_permanent=semi,
        zero_union=zero, genuine=genuine, couples=couples,
    )
    analysis.assertions = verify_assertions(analysis)
    return analysis


def _point_list(region: RegionSet) -> list[list[float]]:
    return [list(rp.point.as_tuple()) for rp in region.points]


def region_report(scene: Scene, threads: int = 1) -> dict:
    """The analysis as a plain dictionary, stable for serialization."""
    a = analyze(scene, threads=threads)
    return analysis_report(a)


def analysis_report(a: Analysis) -> dict:
    return {
        "interval": {"t_lower": a.interval.t_lower, "t_upper": a.interval.t_upper},
        "shell": {"r_inner": a.shell.r_inner, "r_outer": a.shell.r_outer},
        "contacts": [
            {
                "t": e.t,
                "locus": list(e.locus.as_tuple()),
                "first": list(e.first),
                "second": list(e.second),
                "min_distance": e.min_distance,
            }
            for e in a.events
        ],
        "regions": {
            "D_I": _point_list(a.integrated),
            "D_P": _point_list(a.permanent),
            "D_SP": _point_list(a.semi_permanent),
            "zero_union": _point_list(a.zero_union),
            "multi_meeting": [list(p.as_tuple()) for p in a.multi_meeting],
            "D_G": [
                {
                    "point": list(rp.point.as_tuple()),
                    "provenance": rp.provenance,
                    "t_emit": rp.times[0],
                    "sources": [list(s) for s in rp.sources],
                }
                for rp in a.genuine.points
            ],
        },
        "assertions": [
            {
                "id": r.assertion_id,
                "status": r.status,
                "max_violation": r.max_violation,
                "detail": r.detail,
                "witnesses": list(r.witnesses),
            }
            for r in a.assertions
        ],
    }
