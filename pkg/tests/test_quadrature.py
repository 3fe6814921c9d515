import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from extremal_domains.approx import Certificate, solve_minimax
from extremal_domains.geometry import PlanarDomain, area_perimeter
from extremal_domains.laurent import Laurent
from extremal_domains.quadrature import (
    PoleInDomainError,
    PowerFunction,
    area_mean,
    boundary_mean,
    flow_identities,
    quadrature_residual,
)

from .conftest import star_curve

ONE = PowerFunction(0j, 0)


def test_means_of_constants(disk, annulus):
    for d in (disk, annulus):
        assert area_mean(d, ONE) == pytest.approx(1.0, abs=1e-13)
        assert boundary_mean(d, ONE) == pytest.approx(1.0, abs=1e-13)


def test_disk_means_vanish(disk):
    assert abs(area_mean(disk, PowerFunction(0j, 1))) < 1e-14
    for m in range(1, 6):
        assert abs(boundary_mean(disk, PowerFunction(0j, m))) < 1e-14


def test_annulus_means(annulus):
    assert abs(area_mean(annulus, PowerFunction(0j, -1))) < 1e-14
    z2 = PowerFunction(0j, 2)
    assert abs(boundary_mean(annulus, z2)) < 1e-14
    assert abs(area_mean(annulus, z2)) < 1e-14
    # arc-length mean of |z|^2 over both circles: (R1^3 + R2^3)/(R1 + R2)
    assert boundary_mean(annulus, lambda z: np.abs(z) ** 2) == pytest.approx(0.75, abs=1e-13)


def test_ellipse_z2_means(ellipse):
    z2 = PowerFunction(0j, 2)
    # area mean of x^2 - y^2 over the ellipse is (a^2 - b^2)/4
    assert area_mean(ellipse, z2) == pytest.approx(0.16, abs=1e-13)
    speed = lambda t: np.hypot(np.sin(t), 0.6 * np.cos(t))
    num = quad(lambda t: np.real((np.cos(t) + 0.6j * np.sin(t)) ** 2) * speed(t), 0, 2 * np.pi,
               epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    per = quad(speed, 0, 2 * np.pi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    assert boundary_mean(ellipse, z2) == pytest.approx(num / per, abs=1e-10)


def test_pole_inside_is_rejected(disk, annulus):
    with pytest.raises(PoleInDomainError):
        area_mean(disk, PowerFunction(0.2, -1))
    with pytest.raises(PoleInDomainError):
        area_mean(annulus, PowerFunction(0.75, -2))


def test_residuals(disk, annulus, ellipse):
    assert quadrature_residual(disk, 8).residual <= 1e-8
    assert quadrature_residual(annulus, 8).residual <= 1e-6
    rep = quadrature_residual(ellipse, 8)
    assert rep.residual > 1e-3
    k = rep.labels.index("(z-c)^2")
    assert rep.differences[k] > 1e-3


def test_csv_table(annulus):
    rep = quadrature_residual(annulus, 3)
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["basis_label", "area_mean", "boundary_mean", "abs_difference"]
    assert len(rows) == 1 + 4 + 3
    assert complex(rows[1][1]) == pytest.approx(1.0)


def test_flow_disk_and_annulus(disk, annulus):
    f = flow_identities(disk, Certificate(1.0, Laurent.polynomial([0.0])))
    assert f.boundary_speed_dev <= 1e-12
    assert f.vorticity_flux_gap <= 1e-8
    f = flow_identities(annulus, Certificate(0.5, Laurent.from_poles({0j: [0.5]})))
    assert f.boundary_speed_dev <= 1e-12
    assert f.vorticity_flux_gap <= 1e-6
    for s in f.speed_profile:
        np.testing.assert_allclose(s, 1.0, atol=1e-12)


def test_flow_ellipse(ellipse):
    res = solve_minimax(ellipse)
    f = flow_identities(ellipse, res)
    # |zbar - z/4| is constant on this ellipse, so the speed alone cannot tell
    assert f.boundary_speed_dev < 1e-4
    area, perim = area_perimeter(ellipse)
    assert f.vorticity_flux_gap == pytest.approx(abs(4 * area - 2 * res.lambda_hat * perim), abs=1e-8)
    assert f.vorticity_flux_gap > 1e-2


def test_flow_star_domain_gap():
    # minimax errors nearly equioscillate, so the flux gap is the sharp indicator
    d = PlanarDomain(star_curve([0.04, 0.03], [0.3, 1.1]))
    f = flow_identities(d, solve_minimax(d, degree=24))
    assert f.vorticity_flux_gap > 1e-3


@settings(max_examples=8)
@given(st.lists(st.floats(0.0, 0.06), min_size=2, max_size=2), st.lists(st.floats(0, 6.28), min_size=2, max_size=2),
       st.complex_numbers(max_magnitude=1, allow_nan=False))
def test_green_circulation(amps, phases, c):
    d = PlanarDomain(star_curve(amps, phases))
    phi = Laurent.polynomial([c, 0.3, -0.2j])
    f = flow_identities(d, Certificate(0.5, phi))
    assert f.circulation_gap <= 1e-6 * area_perimeter(d)[0]


@settings(max_examples=8)
@given(st.floats(0, 2 * np.pi), st.complex_numbers(max_magnitude=3, allow_nan=False))
def test_residual_rigid_motion_invariance(rot, shift):
    base = PlanarDomain.ellipse(1.0, 0.6)
    moved = base.affine(np.exp(1j * rot), shift)
    a = quadrature_residual(base, 6).residual
    b = quadrature_residual(moved, 6).residual
    assert abs(a - b) <= 1e-8
