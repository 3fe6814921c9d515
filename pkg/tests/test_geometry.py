import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import ellipe

from extremal_domains.geometry import (
    AnalyticCurve,
    InvalidCurveError,
    InvalidDomainError,
    OrientationError,
    PlanarDomain,
    arc_length_table,
    area_perimeter,
    map_domain,
    tangent_and_curvature,
    total_curvature,
    winding_check,
)

from .conftest import star_curve

TWO_PI = 2 * np.pi

amps = st.lists(st.floats(0.0, 0.04), min_size=1, max_size=3)
phases = st.lists(st.floats(0.0, TWO_PI), min_size=3, max_size=3)


def test_circle_lengths():
    assert arc_length_table(AnalyticCurve.circle(0j, 1.0)).length == pytest.approx(TWO_PI, abs=1e-13)
    assert arc_length_table(AnalyticCurve.circle(0j, 0.5)).length == pytest.approx(np.pi, abs=1e-13)


def test_ellipse_length_matches_quadrature():
    curve = AnalyticCurve.ellipse(1.0, 0.6)
    oracle, _ = quad(lambda t: np.hypot(np.sin(t), 0.6 * np.cos(t)), 0, TWO_PI, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert arc_length_table(curve).length == pytest.approx(oracle, abs=1e-10)
    # complete elliptic integral as a second, closed-form oracle
    assert curve.length == pytest.approx(4 * ellipe(1 - 0.36), abs=1e-10)


def test_arc_length_table_monotone_and_periodic():
    curve = AnalyticCurve.ellipse(1.0, 0.6)
    table = arc_length_table(curve, 512)
    assert np.all(np.diff(table.s) > 0)
    assert table.s_of(TWO_PI) == pytest.approx(table.length)
    assert table.s_of(TWO_PI + 0.3) == pytest.approx(table.length + table.s_of(0.3))


def test_arc_length_table_needs_enough_samples():
    with pytest.raises(ValueError):
        arc_length_table(AnalyticCurve.circle(0j, 1.0).padded(8), 32)


def test_area_perimeter_closed_forms(disk, annulus, ellipse):
    assert area_perimeter(disk) == pytest.approx((np.pi, TWO_PI), abs=1e-13)
    assert area_perimeter(annulus) == pytest.approx((0.75 * np.pi, 3 * np.pi), abs=1e-13)
    assert area_perimeter(ellipse)[0] == pytest.approx(0.6 * np.pi, abs=1e-10)


def test_curvature_sign_convention():
    for r in (0.3, 1.0, 2.5):
        _, kappa = tangent_and_curvature(AnalyticCurve.circle(0.2j, r))
        np.testing.assert_allclose(kappa, -1.0 / r, atol=1e-12)
    _, kappa = tangent_and_curvature(AnalyticCurve.circle(0j, 0.5, "inner"))
    np.testing.assert_allclose(kappa, 2.0, atol=1e-12)


def test_total_curvature_per_component(annulus, ellipse):
    assert winding_check(annulus) == pytest.approx([-TWO_PI, TWO_PI], abs=1e-10)
    assert winding_check(ellipse) == pytest.approx([-TWO_PI], abs=1e-10)


def test_winding_check_flags_bad_values(monkeypatch, annulus):
    import extremal_domains.geometry as g

    monkeypatch.setattr(g, "total_curvature", lambda c: TWO_PI)
    with pytest.raises(OrientationError):
        g.winding_check(annulus)


def test_tangent_is_unit_and_matches_velocity():
    c = AnalyticCurve.ellipse(1.0, 0.6, rotation=0.4)
    tau, _ = tangent_and_curvature(c)
    np.testing.assert_allclose(np.abs(tau), 1.0, atol=1e-14)
    np.testing.assert_allclose(tau, c.velocity / c.speed, atol=1e-14)


def test_rejects_non_immersed_curve():
    # z = e^{it} + e^{2it}/2 has z'(pi) = 0
    with pytest.raises(InvalidCurveError):
        AnalyticCurve(np.array([0, 1, 0.5]), 0)


def test_rejects_self_intersecting_curve():
    # limacon with an inner loop
    with pytest.raises((InvalidCurveError, OrientationError)):
        AnalyticCurve(np.array([0, 1, 1.5]), 0)


def test_rejects_wrong_orientation():
    with pytest.raises(OrientationError):
        AnalyticCurve.circle(0j, 1.0).reversed(orientation="outer")
    with pytest.raises(OrientationError):
        PlanarDomain(AnalyticCurve.circle(0j, 1.0), [AnalyticCurve.circle(0j, 0.5)])


def test_rejects_inner_curve_outside():
    with pytest.raises(InvalidDomainError):
        PlanarDomain(AnalyticCurve.circle(0j, 1.0), [AnalyticCurve.circle(2.0, 0.5, "inner")])
    with pytest.raises(InvalidDomainError):
        PlanarDomain(AnalyticCurve.circle(0j, 1.0), [AnalyticCurve.circle(0.8, 0.5, "inner")])


def test_rejects_nested_or_crossing_holes():
    outer = AnalyticCurve.circle(0j, 2.0)
    with pytest.raises(InvalidDomainError):
        PlanarDomain(outer, [AnalyticCurve.circle(0j, 1.0, "inner"), AnalyticCurve.circle(0j, 0.5, "inner")])
    with pytest.raises(InvalidDomainError):
        PlanarDomain(outer, [AnalyticCurve.circle(-0.3, 0.5, "inner"), AnalyticCurve.circle(0.3, 0.5, "inner")])


def test_hole_point_must_be_in_hole():
    with pytest.raises(InvalidDomainError):
        PlanarDomain(AnalyticCurve.circle(0j, 1.0), [AnalyticCurve.circle(0j, 0.5, "inner")], [0.75])


def test_hole_point_defaults_to_centroid():
    d = PlanarDomain.annulus(1.0, 0.3, inner_center=0.2 + 0.1j)
    assert d.hole_points[0] == pytest.approx(0.2 + 0.1j, abs=1e-12)
    assert d.connectivity == 2


def test_contains(annulus):
    pts = np.array([0.0, 0.75, 0.75j, 1.2, -0.3])
    assert list(annulus.contains(pts)) == [False, True, True, False, False]


def test_map_domain_inversion_swaps_roles():
    img = map_domain(PlanarDomain.annulus(1.0, 0.5), lambda z: 1 / z + 0.1)
    area, perim = area_perimeter(img)
    assert area == pytest.approx(3 * np.pi, abs=1e-9)
    assert perim == pytest.approx(6 * np.pi, abs=1e-9)
    assert img.hole_points[0] == pytest.approx(0.1, abs=1e-9)


@given(amps, phases, st.floats(0.0, TWO_PI))
def test_shift_invariance(a, p, dt):
    c = star_curve(a, p)
    s = c.shifted(dt)
    assert s.signed_area == pytest.approx(c.signed_area, abs=1e-8)
    assert s.length == pytest.approx(c.length, abs=1e-8)
    assert total_curvature(s) == pytest.approx(total_curvature(c), abs=1e-8)


@given(amps, phases)
def test_padding_invariance(a, p):
    c = star_curve(a, p)
    d = c.padded(2 * c.degree)
    assert d.signed_area == pytest.approx(c.signed_area, abs=1e-8)
    assert d.length == pytest.approx(c.length, abs=1e-8)
    assert total_curvature(d) == pytest.approx(total_curvature(c), abs=1e-8)


@given(amps, phases, st.floats(0.2, 3.0), st.floats(0.0, TWO_PI))
def test_isoperimetric_inequality(a, p, scale, rot):
    d = PlanarDomain(star_curve(a, p).affine(scale * np.exp(1j * rot), 0.3))
    area, perim = area_perimeter(d)
    assert perim**2 >= 4 * np.pi * area * (1 - 1e-12)
    assert winding_check(d) == pytest.approx([-TWO_PI], abs=1e-8)


@given(st.floats(0.05, 0.4), st.floats(0.0, 0.5), st.floats(0.0, TWO_PI))
def test_ring_curvature_totals(r_inner, shift, angle):
    offset = shift * (1 - r_inner) * np.exp(1j * angle)
    d = PlanarDomain.annulus(1.0, r_inner, inner_center=offset)
    assert winding_check(d) == pytest.approx([-TWO_PI, TWO_PI], abs=1e-8)


def test_signed_distance(annulus, ellipse):
    assert annulus.signed_distance(0.8) == pytest.approx(0.2, abs=1e-14)
    assert annulus.signed_distance(0.45j) == pytest.approx(-0.05, abs=1e-14)
    assert annulus.signed_distance(-1.3) == pytest.approx(-0.3, abs=1e-14)
    # nearest point of x^2 + y^2/0.36 = 1 to (0, 0.5) is (0, 0.6)
    assert ellipse.signed_distance(0.5j) == pytest.approx(0.1, abs=1e-12)
