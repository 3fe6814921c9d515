import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from extremal_domains.laurent import Laurent

cplx = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def test_evaluation_and_derivative():
    f = Laurent.from_poles({0.5j: [1.0, 2.0]}, poly=[1, 0, 3], center=0.2)
    z = np.array([1.5, -1 + 1j, 2j])
    want = 1 + 3 * (z - 0.2) ** 2 + 1 / (z - 0.5j) + 2 / (z - 0.5j) ** 2
    np.testing.assert_allclose(f(z), want, rtol=1e-14)
    dwant = 6 * (z - 0.2) - 1 / (z - 0.5j) ** 2 - 4 / (z - 0.5j) ** 3
    np.testing.assert_allclose(f.deriv()(z), dwant, rtol=1e-14)


def test_json_round_trip():
    f = Laurent.from_poles({0j: [0.5], 1 + 1j: [0, 2j]}, poly=[1j, 2], center=0.1)
    g = Laurent.from_json(f.to_json())
    z = np.array([3.0, -2.5j, 0.4 - 0.3j])
    np.testing.assert_allclose(g(z), f(z), rtol=1e-15)


@given(st.lists(cplx, min_size=1, max_size=6), cplx)
def test_derivative_matches_finite_difference(coeffs, z):
    f = Laurent.from_poles({3.0: [1.0, -0.5]}, poly=coeffs)
    h = 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(f.deriv()(z) - fd) <= 1e-6 * max(1.0, abs(fd))
