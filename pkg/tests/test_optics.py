"""Pinhole projection, rail geometry, and the comoving-frame route."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from retrocam.errors import BehindPinhole, DegenerateV, NotUniform, RailBehindPinhole, XOutOfDomain
from retrocam.expressions import parse_expression
from retrocam.kinematics import SpatialPoint, StaticWorldline, UniformWorldline
from retrocam.optics import (
    FilmConfig,
    FilmPoint,
    RailCurve,
    comoving_film_point,
    project,
    rail_image_residual,
    sample_rail_image,
    unproject,
)


def _film() -> FilmConfig:
    return FilmConfig(film_distance=1.0, rail_plane_height=-1.0)


def _curve(text: str, domain=(-18.0, 4.0)) -> RailCurve:
    return RailCurve(parse_expression(text), domain, plane_height=-1.0)


def test_projection_oracle():
    fp = project(SpatialPoint(2.0, 4.0, -1.0), _film())
    assert fp.U == 0.5
    assert fp.V == -0.25


def test_projection_guards():
    with pytest.raises(BehindPinhole):
        project(SpatialPoint(1.0, 0.0, 0.0), _film())
    with pytest.raises(BehindPinhole):
        project(SpatialPoint(1.0, -3.0, 0.0), _film())
    with pytest.raises(BehindPinhole):
        FilmConfig(film_distance=0.0, rail_plane_height=-1.0)
    with pytest.raises(DegenerateV):
        FilmConfig(film_distance=1.0, rail_plane_height=0.5)
    with pytest.raises(DegenerateV):
        unproject(FilmPoint(0.3, 0.0), _film())


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(0.5, 50))
def test_rail_plane_round_trip(x, y):
    film = _film()
    fp = project(SpatialPoint(x, y, film.rail_plane_height), film)
    rx, ry = unproject(fp, film)
    assert abs(rx - x) <= 1e-12 * max(1.0, abs(x))
    assert abs(ry - y) <= 1e-12 * max(1.0, abs(y))


def test_rail_image_residual_oracle():
    # flat rail y = 2, plane z = -1: the image is the line V = -U_d C / y... with
    # (x, y) = (C U / V, D C / V) the residual is V g(x) - D C = 2 V + 1
    rail = _curve("2")
    res = rail_image_residual(FilmPoint(0.3, -0.4), rail, _film())
    assert math.isclose(res, 0.2, abs_tol=1e-15)
    on_rail = project(SpatialPoint(1.0, 2.0, -1.0), _film())
    assert abs(rail_image_residual(on_rail, rail, _film())) <= 1e-15


def test_sample_rail_image_flat():
    rail = _curve("2", domain=(-1.0, 1.0))
    pts = sample_rail_image(rail, _film(), 3)
    assert len(pts) == 3
    assert np.allclose([(p.U, p.V) for p in pts],
                       [(-0.5, -0.5), (0.0, -0.5), (0.5, -0.5)], atol=1e-12)


def test_sample_rail_image_parabola_endpoints():
    rail = _curve("x^2 + 2", domain=(-1.0, 1.0))
    pts = sample_rail_image(rail, _film(), 9)
    assert math.isclose(pts[0].U, -1.0 / 3.0, abs_tol=1e-9)
    assert math.isclose(pts[0].V, -1.0 / 3.0, abs_tol=1e-9)
    assert math.isclose(pts[-1].U, 1.0 / 3.0, abs_tol=1e-9)
    for p in pts:
        assert abs(rail_image_residual(p, rail, _film())) <= 1e-9


def test_sample_rail_image_spacing_is_uniform_in_x():
    rail = _curve("2 + 0.3*sin(x)")
    film = _film()
    pts = sample_rail_image(rail, film, 64)
    xs = [unproject(p, film)[0] for p in pts]
    deltas = np.diff(xs)
    assert np.max(np.abs(deltas - deltas[0])) <= 1e-9


def test_sample_rail_image_guards():
    with pytest.raises(ValueError):
        sample_rail_image(_curve("2"), _film(), 1)
    with pytest.raises(RailBehindPinhole):
        sample_rail_image(_curve("x", domain=(-1.0, 1.0)), _film(), 5)


def test_arclength_against_quadrature():
    g = parse_expression("2 + 0.3*sin(x)")
    rail = RailCurve(g, (-18.0, 4.0), plane_height=-1.0)
    dg = g.derivative().as_function()
    speed = lambda x: math.sqrt(1.0 + dg(x) ** 2)
    total, _ = quad(speed, -18.0, 4.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert abs(rail.total_arclength - total) <= 1e-10
    part, _ = quad(speed, -18.0, -3.7, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert abs(rail.arclength_at(-3.7) - part) <= 1e-10


def test_arclength_inversion():
    rail = _curve("2 + 0.3*sin(x)")
    for x in np.linspace(-18.0, 4.0, 23):
        s = rail.arclength_at(float(x))
        assert abs(rail.x_at_arclength(s) - x) <= 5e-12
    with pytest.raises(XOutOfDomain):
        rail.arclength_at(5.0)
    with pytest.raises(XOutOfDomain):
        rail.x_at_arclength(rail.total_arclength + 1.0)


def test_arclength_batch_matches_scalar():
    rail = _curve("2 + 0.3*sin(x)")
    ss = np.linspace(0.0, rail.total_arclength, 101)
    batch = rail.x_at_arclength_batch(ss)
    scalar = np.array([rail.x_at_arclength(float(s)) for s in ss])
    # the batch path skips Newton polishing, so it is only good to ~1e-7
    assert np.max(np.abs(batch - scalar)) <= 1e-7


def test_comoving_route_matches_direct():
    w = UniformWorldline((0.0, 4.0, 0.0), (0.5, 0.0, 0.0), -30.0)
    film = _film()
    via_boost = comoving_film_point(w, film)
    from retrocam.kinematics import retarded_emission

    direct = project(retarded_emission(w).pos, film)
    assert abs(via_boost.U - direct.U) <= 1e-9
    assert abs(via_boost.V - direct.V) <= 1e-9


def test_comoving_route_needs_uniform_motion():
    with pytest.raises(NotUniform):
        comoving_film_point(StaticWorldline((0.0, 4.0, 0.0), -30.0), _film())
