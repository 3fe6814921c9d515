import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ellipe

from extremal_domains.approx import (
    AnalyticBasis,
    Certificate,
    RankWarning,
    bounds,
    extremality_residual,
    result_to_json,
    solve_adaptive,
    solve_minimax,
)
from extremal_domains.geometry import PlanarDomain
from extremal_domains.laurent import Laurent

from .conftest import star_curve

ZERO = Laurent.polynomial([0.0])
ANNULUS_PHI = Laurent.from_poles({0j: [0.5]})


@pytest.fixture(scope="module")
def ellipse_result(ellipse):
    return solve_minimax(ellipse)


def test_bounds(disk, annulus, ellipse):
    assert bounds(disk) == pytest.approx((1.0, 1.0), abs=1e-13)
    assert bounds(annulus) == pytest.approx((0.5, np.sqrt(0.75)), abs=1e-13)
    perim = 4 * ellipe(0.64)
    assert bounds(ellipse) == pytest.approx((1.2 * np.pi / perim, np.sqrt(0.6)), abs=1e-10)


def test_basis_size_and_labels(annulus):
    b = AnalyticBasis.for_domain(annulus, 7)
    assert b.size == 8 + 7
    assert len(b.labels) == b.size
    # every element bounded by 1 on the closed domain
    z = np.concatenate([c.points for c in annulus.curves])
    assert np.abs(b.matrix(z)).max() <= 1 + 1e-12


def test_disk(disk):
    res = solve_minimax(disk, degree=8)
    assert res.lambda_hat == pytest.approx(1.0, abs=1e-3)
    assert np.abs(res.coeffs).max() <= 1e-4
    assert res.certified


def test_annulus(annulus):
    res = solve_minimax(annulus, degree=8)
    assert res.lambda_hat == pytest.approx(0.5, abs=1e-3)
    z = np.array([0.7, 0.6j, -0.8 - 0.1j])
    np.testing.assert_allclose(res.phi(z), 0.5 / z, atol=1e-3)
    assert res.phi.pole_coef[0, 0] == pytest.approx(0.5, abs=1e-3)


def test_ellipse_is_strictly_inside_bounds(ellipse, ellipse_result):
    res = ellipse_result
    lo, hi = bounds(ellipse)
    assert lo + 0.01 < res.lambda_hat < hi
    assert res.gap_lower > 0.01


def test_ellipse_value_and_refinement(ellipse, ellipse_result):
    # the best approximant on an ellipse is a multiple of z with constant
    # error modulus 2ab/(a+b)
    assert ellipse_result.lambda_hat == pytest.approx(2 * 0.6 / 1.6, abs=1e-5)
    fine = solve_minimax(ellipse, degree=24, m=2048)
    assert abs(fine.lambda_hat - ellipse_result.lambda_hat) < 1e-4


def test_error_profile_max_is_lambda(ellipse_result):
    assert ellipse_result.boundary_max == pytest.approx(ellipse_result.lambda_hat, abs=1e-12)
    assert ellipse_result.interior_max <= ellipse_result.lambda_hat


def test_sample_count_guard(disk):
    with pytest.raises(ValueError):
        solve_minimax(disk, degree=12, m=40)


def test_non_convergence_is_flagged(ellipse):
    res = solve_minimax(ellipse, max_iter=2)
    assert not res.certified
    assert res.iterations == 2
    assert res.lambda_hat > 0


def test_adaptive_raises_degree_until_certified():
    from extremal_domains.cli import perturb

    d = perturb(PlanarDomain.annulus(1.0, 0.5), 0.05, 3, seed=0)
    assert not solve_minimax(d, warn=False).certified
    res = solve_adaptive(d)
    assert res.certified and res.basis.degree > 12


def test_ill_conditioned_basis_warns_and_falls_back(disk):
    basis = AnalyticBasis(0j, 0.02, 14)
    with pytest.warns(RankWarning):
        res = solve_minimax(disk, basis=basis, max_iter=3)
    assert np.isfinite(res.lambda_hat)


def test_extremality_residual_closed_forms(disk, annulus):
    assert max(extremality_residual(disk, Certificate(1.0, ZERO))) <= 1e-8
    assert max(extremality_residual(annulus, Certificate(0.5, ANNULUS_PHI))) <= 1e-8


def test_extremality_residual_ellipse(ellipse, ellipse_result):
    assert max(extremality_residual(ellipse, ellipse_result)) > 1e-2


def test_json_report(annulus):
    res = solve_minimax(annulus, degree=4)
    rep = result_to_json(annulus, res)
    assert set(rep) >= {"lambda_hat", "bounds", "gap_lower", "gap_upper", "coeffs", "residuals_per_component"}
    assert len(rep["residuals_per_component"]) == 2


@pytest.mark.parametrize("name", ["disk", "annulus"])
def test_equioscillation_on_extremal_domains(name, request):
    d = request.getfixturevalue(name)
    res = solve_minimax(d)
    prof = np.concatenate(res.error_profile)
    assert prof.max() - prof.min() <= 1e-4


@pytest.mark.parametrize("name", ["disk", "annulus"])
def test_refinement_stability(name, request):
    d = request.getfixturevalue(name)
    a = solve_minimax(d, degree=8)
    b = solve_minimax(d, degree=16, m=2 * max(4 * AnalyticBasis.for_domain(d, 16).size, 512))
    assert abs(a.lambda_hat - b.lambda_hat) < 1e-4


@settings(max_examples=6)
@given(st.floats(0.3, 3.0), st.floats(0, 2 * np.pi), st.complex_numbers(max_magnitude=2, allow_nan=False))
def test_scaling_and_translation_covariance(scale, rot, shift):
    base = PlanarDomain.ellipse(1.0, 0.6)
    lam = solve_minimax(base, degree=8).lambda_hat
    moved = base.affine(scale * np.exp(1j * rot), shift)
    assert solve_minimax(moved, degree=8).lambda_hat == pytest.approx(scale * lam, rel=1e-6)


@settings(max_examples=6)
@given(st.lists(st.floats(0.0, 0.05), min_size=2, max_size=2), st.lists(st.floats(0, 6.28), min_size=2, max_size=2))
def test_lambda_respects_bounds(amps, phases):
    d = PlanarDomain(star_curve(amps, phases))
    res = solve_minimax(d, degree=10)
    lo, hi = res.bounds
    assert lo - 1e-6 <= res.lambda_hat <= hi + 1e-6
