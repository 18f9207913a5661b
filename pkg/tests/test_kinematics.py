"""Worldlines, the emission-time solver, and Lorentz boosts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from retrocam.errors import (
    NoEmissionInWindow,
    SuperluminalBoost,
    SuperluminalWorldline,
    TimeOutOfDomain,
)
from retrocam.expressions import parse_expression
from retrocam.kinematics import (
    Boost,
    CircularWorldline,
    Event,
    RailMotion,
    RailWorldline,
    SampledWorldline,
    SpatialPoint,
    StaticWorldline,
    UniformWorldline,
    boost_event,
    emission_time_residual,
    retarded_emission,
    retarded_emission_uniform_closed_form,
)
from retrocam.optics import RailCurve


def test_static_emission_is_light_distance():
    w = StaticWorldline((3.0, 4.0, 0.0), -30.0)
    ev = retarded_emission(w)
    assert abs(ev.t - (-5.0)) <= 1e-12  # |r| = 5, so light left 5 time units ago
    assert ev.pos.as_tuple() == (3.0, 4.0, 0.0)


def test_uniform_closed_form_frozen_value():
    # r0 = (0, 4, 0), v = (0.5, 0, 0): (1 - 1/4) t^2 = 16, t = -8/sqrt(3)
    ev = retarded_emission_uniform_closed_form((0.0, 4.0, 0.0), (0.5, 0.0, 0.0))
    assert math.isclose(ev.t, -8.0 / math.sqrt(3.0), rel_tol=0, abs_tol=1e-14)
    assert abs(ev.pos.norm() + ev.t) <= 1e-12


def test_bisection_agrees_with_closed_form():
    w = UniformWorldline((0.0, 4.0, 0.0), (0.5, 0.0, 0.0), -30.0)
    direct = retarded_emission(w)
    exact = retarded_emission_uniform_closed_form((0.0, 4.0, 0.0), (0.5, 0.0, 0.0))
    assert abs(direct.t - exact.t) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-10, 10), st.floats(0.5, 10), st.floats(-10, 10),
    st.floats(-0.9, 0.9), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3),
)
def test_solver_matches_quadratic(x, y, z, vx, vy, vz):
    speed = math.sqrt(vx * vx + vy * vy + vz * vz)
    if speed > 0.95 or (x * x + y * y + z * z) < 0.25:
        return
    exact = retarded_emission_uniform_closed_form((x, y, z), (vx, vy, vz))
    w = UniformWorldline((x, y, z), (vx, vy, vz), exact.t - 5.0)
    solved = retarded_emission(w)
    assert abs(solved.t - exact.t) <= 1e-12
    assert abs(emission_time_residual(w, solved.t)) <= 1e-12


def test_no_emission_when_window_too_recent():
    w = StaticWorldline((0.0, 10.0, 0.0), -5.0)  # light needs 10, window gives 5
    with pytest.raises(NoEmissionInWindow):
        retarded_emission(w)


def test_emission_at_reception_for_origin_crossing():
    w = UniformWorldline((0.0, 0.0, 0.0), (0.3, 0.0, 0.0), -5.0)
    ev = retarded_emission(w)
    assert ev.t == 0.0
    assert ev.pos.norm() == 0.0


def test_worldline_domain_is_guarded():
    w = StaticWorldline((1.0, 1.0, 0.0), -2.0)
    w.position_at(0.0)
    w.position_at(-2.0)
    w.position_at(1e-10)  # slack for roundoff at the boundary
    with pytest.raises(TimeOutOfDomain):
        w.position_at(1e-6)
    with pytest.raises(TimeOutOfDomain):
        w.position_at(-2.1)


def test_superluminal_rejected():
    with pytest.raises(SuperluminalWorldline):
        UniformWorldline((0.0, 5.0, 0.0), (1.5, 0.0, 0.0), -10.0)
    with pytest.raises(SuperluminalWorldline):
        UniformWorldline((0.0, 5.0, 0.0), (0.9995, 0.0, 0.0), -10.0)  # cap 0.999 c
    with pytest.raises(SuperluminalWorldline):
        CircularWorldline((0.0, 5.0, 0.0), 2.0, 0.6, 0.0, "xy", -10.0)  # r w = 1.2


def test_circular_positions_and_emission():
    w = CircularWorldline((0.0, 5.0, 0.0), 1.0, 0.5, 0.0, "xy", -40.0)
    p0 = w.position_at(0.0)
    assert math.isclose(p0.x, 1.0, abs_tol=1e-15)
    assert math.isclose(p0.y, 5.0, abs_tol=1e-15)
    period = 2.0 * math.pi / 0.5
    assert w.position_at(-period).distance_to(p0) <= 1e-12
    ev = retarded_emission(w)
    assert abs(ev.pos.norm() + ev.t) <= 1e-12


def test_sampled_interpolation():
    w = SampledWorldline([
        (-4.0, (0.0, 2.0, 1.0)),
        (-2.0, (0.0, 2.0, 0.0)),
        (0.0, (0.0, 2.0, 0.5)),
    ])
    assert w.position_at(-3.0).as_tuple() == (0.0, 2.0, 0.5)
    assert w.position_at(-1.0).as_tuple() == (0.0, 2.0, 0.25)
    assert w.t_min == -4.0
    grid = np.linspace(-4.0, 0.0, 9)
    sampled = w.sample_positions(grid)
    for t, row in zip(grid, sampled):
        assert np.allclose(row, w.position_at(float(t)).as_array(), atol=1e-15)


def test_sampled_validation():
    with pytest.raises(TimeOutOfDomain):
        SampledWorldline([(-2.0, (0.0, 1.0, 0.0)), (-1.0, (0.0, 1.0, 0.0))])
    with pytest.raises(TimeOutOfDomain):
        SampledWorldline([(-2.0, (0.0, 1.0, 0.0)), (-2.0, (0.0, 1.0, 0.0)),
                          (0.0, (0.0, 1.0, 0.0))])
    with pytest.raises(SuperluminalWorldline):
        SampledWorldline([(-1.0, (0.0, 2.0, 0.0)), (0.0, (1.5, 2.0, 0.0))])


def test_boost_oracle_and_inverse():
    b = Boost((0.6, 0.0, 0.0))
    assert math.isclose(b.gamma, 1.25, rel_tol=1e-15)
    out = boost_event(b, Event(0.0, SpatialPoint(1.0, 0.0, 0.0)))
    assert math.isclose(out.t, -0.75, abs_tol=1e-15)
    assert math.isclose(out.pos.x, 1.25, abs_tol=1e-15)
    assert out.pos.y == 0.0 and out.pos.z == 0.0
    back = boost_event(b.inverse(), out)
    assert abs(back.t) <= 1e-15
    assert back.pos.distance_to(SpatialPoint(1.0, 0.0, 0.0)) <= 1e-15


def test_boost_identity_and_guard():
    b = Boost((0.0, 0.0, 0.0))
    e = Event(-2.0, SpatialPoint(1.0, 2.0, 3.0))
    out = boost_event(b, e)
    assert out.t == e.t and out.pos.as_tuple() == e.pos.as_tuple()
    with pytest.raises(SuperluminalBoost):
        Boost((1.0, 0.0, 0.0))


def test_rail_motion_constant_beta_is_linear():
    rail = RailCurve(parse_expression("2"), (-20.0, 20.0), plane_height=-1.0)
    motion = RailMotion(rail, parse_expression("0.5"), -10.0)
    for t in (-10.0, -4.5, -1.0, 0.0):
        assert math.isclose(motion.displacement(t), 0.5 * t, abs_tol=1e-12)
    assert math.isclose(motion.max_beta(), 0.5, rel_tol=1e-12)


def test_rail_motion_oscillating_beta_against_quadrature():
    from scipy.integrate import quad

    rail = RailCurve(parse_expression("2 + 0.3*sin(x)"), (-18.0, 4.0), plane_height=-1.0)
    beta = parse_expression("0.5 + 0.4*sin(0.1*t)")
    motion = RailMotion(rail, beta, -40.0)
    fn = beta.as_function()
    for t in (-37.0, -20.0, -8.3, -1.0):
        want = -quad(fn, t, 0.0, epsabs=1e-13, epsrel=1e-13)[0]
        assert abs(motion.displacement(t) - want) <= 1e-9


def test_rail_worldline_positions_track_the_curve():
    rail = RailCurve(parse_expression("2 + 0.3*sin(x)"), (-18.0, 4.0), plane_height=-1.0)
    motion = RailMotion(rail, parse_expression("0.5"), -10.0)
    w = RailWorldline(motion, 10.0)
    p = w.position_at(-3.0)
    # on the curve: y = g(x), z is the rail plane height
    assert math.isclose(p.y, 2.0 + 0.3 * math.sin(p.x), abs_tol=1e-9)
    assert p.z == -1.0
    s = rail.arclength_at(p.x)
    assert math.isclose(s, 10.0 + 0.5 * (-3.0), abs_tol=1e-9)
