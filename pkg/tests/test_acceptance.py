"""Acceptance criteria 1-11 at their stated tolerances.

Each test carries a ``criterion`` mark; a PASS/FAIL line per criterion is
printed in the terminal summary.
"""

import time

import numpy as np
import pytest

from extremal_domains.approx import extremality_residual, solve_adaptive, solve_minimax
from extremal_domains.cli import perturb
from extremal_domains.conformal import map_to_annulus, mobius_check
from extremal_domains.geometry import PlanarDomain, area_perimeter
from extremal_domains.quaddiff import (
    PLUS,
    QuadraticDifferential,
    boundary_identity,
    build_stokes_graph,
    lg_compare,
    sigma_plus_path,
    trace_trajectory,
)
from extremal_domains.quadrature import flow_identities, quadrature_residual
from extremal_domains.schwarz import homogeneity_check, riccati_general_solution_check
from extremal_domains.series import Series, schwarzian
from extremal_domains.serrin import boundary_oscillation, solve_neumann

from .test_conformal import eccentric_modulus


@pytest.mark.criterion(1, "disk extremality")
def test_criterion_01_disk():
    t = time.perf_counter()
    d = PlanarDomain.disk(1.0)
    res = solve_minimax(d)
    resid = max(extremality_residual(d, res))
    elapsed = time.perf_counter() - t
    assert res.lambda_hat == pytest.approx(1.0, abs=1e-3)
    assert res.gap_lower <= 1e-3 and res.gap_upper <= 1e-3
    assert resid <= 1e-4
    assert np.abs(res.coeffs).max() <= 1e-4
    assert elapsed < 5.0


@pytest.mark.criterion(2, "annulus extremality")
def test_criterion_02_annulus():
    t = time.perf_counter()
    d = PlanarDomain.annulus(1.0, 0.5)
    res = solve_minimax(d)
    elapsed = time.perf_counter() - t
    assert res.lambda_hat == pytest.approx(0.5, abs=1e-3)
    phi = res.phi
    assert np.abs(phi.poly).max() <= 1e-3
    expected = np.zeros(phi.pole_coef.shape[1])
    expected[0] = 0.5
    assert np.abs(phi.pole_coef[0] - expected).max() <= 1e-3
    assert elapsed < 10.0


@pytest.mark.criterion(3, "strictness on the ellipse")
def test_criterion_03_ellipse():
    d = PlanarDomain.ellipse(1.0, 0.6)
    gap = solve_minimax(d).gap_lower
    quad = quadrature_residual(d, 8).residual
    osc = boundary_oscillation(solve_neumann(d), d).max_osc
    assert gap > 1e-2
    assert quad > 1e-3
    assert osc > 1e-3


@pytest.mark.criterion(4, "quadrature and flow identities")
def test_criterion_04_quadrature():
    for d in (PlanarDomain.disk(1.0), PlanarDomain.annulus(1.0, 0.5)):
        assert quadrature_residual(d, 8).residual <= 1e-6
        res = solve_minimax(d)
        f = flow_identities(d, res)
        area, perim = area_perimeter(d)
        assert f.boundary_speed_dev <= 1e-6
        assert abs(4 * area - 2 * res.lambda_hat * perim) <= 1e-6 * area
        assert f.vorticity_flux_gap <= 1e-6 * area


@pytest.mark.criterion(5, "Serrin closed form on the annulus")
def test_criterion_05_serrin():
    d = PlanarDomain.annulus(1.0, 0.5)
    sol = solve_neumann(d)
    rep = boundary_oscillation(sol, d)
    assert sol.beta[0] == pytest.approx(-0.25, abs=1e-5)
    assert rep.c[0] - rep.c[1] == pytest.approx(0.1875 - 0.25 * np.log(2), abs=1e-5)


@pytest.mark.criterion(6, "boundary quadratic differential")
def test_criterion_06_boundary_qd():
    from extremal_domains.geometry import tangent_and_curvature

    d = PlanarDomain.annulus(1.0, 0.5)
    res = solve_minimax(d)
    qd = QuadraticDifferential.from_phi(res.phi)
    for c, val in zip(d.curves, (0.5, 2.0)):
        tau, _ = tangent_and_curvature(c)
        assert np.abs(qd(c.points) * tau**2 - val).max() <= 1e-6
    rep = boundary_identity(d, res.lambda_hat, qd)
    lam = res.lambda_hat
    assert rep.integrals[0] == pytest.approx(d.outer.length - 2 * np.pi * lam, abs=1e-6)
    assert rep.integrals[1] == pytest.approx(d.inners[0].length + 2 * np.pi * lam, abs=1e-6)
    assert rep.positive


@pytest.mark.criterion(7, "Stokes structure")
def test_criterion_07_stokes():
    g = build_stokes_graph(PlanarDomain.disk(1.0), QuadraticDifferential.polynomial([0, 1]))
    ang = np.array(g.arc_angles(0, PLUS))
    assert ang.size == 3
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
    assert np.abs(gaps - 2 * np.pi / 3).max() <= np.radians(2)
    tr = trace_trajectory(QuadraticDifferential.from_poles({0j: [0, -1]}), 1.0, PLUS, 1j)
    assert tr.termination == "closed" and tr.closure_error <= 1e-4
    assert np.abs(np.abs(tr.points) - 1).max() <= 1e-4


@pytest.mark.criterion(8, "Liouville-Green rate")
def test_criterion_08_lg():
    qd = QuadraticDifferential.polynomial([0, 1])
    tab = lg_compare(qd, 1.0, 0j, sigma_plus_path(qd, 0j), [0.2, 0.1, 0.05, 0.025])
    assert tab.variation <= 3.0


@pytest.mark.criterion(9, "Schwarzian suite")
def test_criterion_09_schwarzian():
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        s = schwarzian(Series.variable(0j, 24).mobius(a, b, c, d))
        # coefficients weighted by rho**k bound S on |z| < rho, half the pole distance
        rho = 0.5 * abs(d / c)
        assert np.abs(s.coeffs[:12] * rho ** np.arange(12)).max() <= 1e-10
    for _ in range(20):
        g = Series(np.concatenate([[0, 1 + 0.3 * rng.normal()], 0.2 * rng.normal(size=10)]) + 0j, 0j)
        f = Series(np.concatenate([[0, 1 + 0.3 * rng.normal()], 0.2 * rng.normal(size=10)]) + 0j, 0j)
        lhs = schwarzian(f.compose(g))
        rhs = schwarzian(f).compose(g) * g.deriv() ** 2 + schwarzian(g)
        n = 6
        assert np.abs(lhs.coeffs[:n] - rhs.coeffs[:n]).max() <= 1e-8
    for m in (2, 3, -1):
        z = 1.3 * np.exp(1j * np.linspace(0.2, 5.0, 7))
        from extremal_domains.series import schwarzian_at

        np.testing.assert_allclose(schwarzian_at(lambda w: w**m, z), (1 - m * m) / (2 * z**2), atol=1e-10)
        assert homogeneity_check(lambda w: w**m, 1.5).c == pytest.approx((1 - m * m) / 2, abs=1e-8)
    for c in (0.0, 0.5, 1.5):
        assert max(riccati_general_solution_check(c).residuals) <= 1e-13


@pytest.mark.criterion(10, "conformal suite")
def test_criterion_10_conformal():
    ecc = PlanarDomain.annulus(1.0, 0.3, 0j, 0.2)
    amap = map_to_annulus(ecc)
    assert amap.modulus == pytest.approx(eccentric_modulus(0.2, 0.3), abs=1e-5)
    assert mobius_check(ecc, amap).defect <= 1e-5
    img = PlanarDomain.annulus(1.0, 0.5).affine(0.7 * np.exp(1j * np.pi / 5), 0.1)
    assert mobius_check(img, map_to_annulus(img)).defect <= 1e-5
    from extremal_domains.geometry import AnalyticCurve

    ring = PlanarDomain(AnalyticCurve.ellipse(1.0, 0.6), [AnalyticCurve.circle(0j, 0.3, "inner")])
    assert mobius_check(ring, map_to_annulus(ring)).defect > 1e-2


@pytest.mark.criterion(11, "continuity under perturbation")
def test_criterion_11_continuity():
    base = PlanarDomain.annulus(1.0, 0.5)
    rows = []
    for amp in (0.05, 0.02, 0.01):
        d = perturb(base, amp, 3, seed=0)
        gap = solve_adaptive(d).gap_lower
        osc = boundary_oscillation(solve_neumann(d), d).max_osc
        quad = quadrature_residual(d, 8).residual
        rows.append((gap, osc, quad))
    rows = np.array(rows)
    assert np.all(rows > 0)
    assert np.all(np.diff(rows, axis=0) < 0)
    # each indicator shrinks at least linearly with the amplitude
    assert np.all(rows[-1] <= rows[0] / 5 * 1.05)
