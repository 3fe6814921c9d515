"""Poisson problem Delta u = 1 with constant Neumann data A/P.

u = |z|**2 / 4 + (harmonic part), where the harmonic part is expanded in
Re/Im of scaled powers of (z - c), Re/Im of negative powers of (z - a_k)
and the logarithms log|z - a_k|. The Neumann condition is imposed by least
squares on the boundary; how far the traces u|Gamma_k are from constants
then measures failure of the overdetermined problem.
"""

from dataclasses import dataclass

import numpy as np

from .approx import AnalyticBasis
from .geometry import area_perimeter, tangent_and_curvature

DEFAULT_DEGREE = 16


class NeumannSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class PoissonSolution:
    basis: AnalyticBasis
    coeffs: np.ndarray
    beta: np.ndarray
    neumann_residual: float
    gauge: float = 0.0

    def _analytic_parts(self, z):
        """Analytic functions g_i (without the constant) and their derivatives."""
        b = self.basis
        z = np.asarray(z, dtype=np.complex128).ravel()
        j = np.arange(1, b.degree + 1)
        w = (z - b.center) / b.scale
        vals = [w[:, None] ** j]
        ders = [j * w[:, None] ** (j - 1) / b.scale]
        for a, r in zip(b.hole_points, b.hole_scales):
            q = r / (z - a)
            vals.append(q[:, None] ** j)
            ders.append(-j * q[:, None] ** j / (z - a)[:, None])
        return np.hstack(vals), np.hstack(ders)

    def harmonic_matrix(self, z):
        g, _ = self._analytic_parts(z)
        logs = [np.log(np.abs(np.ravel(z) - a)) for a in self.basis.hole_points]
        return np.hstack([g.real, g.imag] + [l[:, None] for l in logs])

    def gradient_matrix(self, z):
        """Columns hold grad(basis) as complex u_x + i u_y."""
        z = np.asarray(z, dtype=np.complex128).ravel()
        _, dg = self._analytic_parts(z)
        logs = [np.conj(1.0 / (z - a)) for a in self.basis.hole_points]
        return np.hstack([np.conj(dg), 1j * np.conj(dg)] + [l[:, None] for l in logs])

    @property
    def all_coeffs(self):
        return np.concatenate([self.coeffs, self.beta])

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        u = np.abs(z.ravel()) ** 2 / 4 + self.harmonic_matrix(z) @ self.all_coeffs - self.gauge
        return u.reshape(z.shape)

    def gradient(self, z):
        z = np.asarray(z, dtype=np.complex128)
        g = z.ravel() / 2 + self.gradient_matrix(z) @ self.all_coeffs
        return g.reshape(z.shape)

    def normal_derivative(self, curve):
        tau, _ = tangent_and_curvature(curve)
        normal = -1j * tau
        return np.real(self.gradient(curve.points) * np.conj(normal))


def solve_neumann(domain, degree=DEFAULT_DEGREE, oversample=16):
    """Least-squares solution of Delta u = 1, du/dn = A/P on the boundary.

    The gauge is fixed so that u has zero arc-length mean on the outer curve.
    """
    area, perim = area_perimeter(domain)
    datum = area / perim
    basis = AnalyticBasis.for_domain(domain, degree)
    n_holes = len(domain.hole_points)
    n_cols = 2 * degree * (1 + n_holes) + n_holes
    m = max(oversample * n_cols, 256)
    probe = PoissonSolution(basis, np.zeros(n_cols - n_holes), np.zeros(n_holes), np.inf)

    rows, rhs = [], []
    resampled = domain.with_samples(m)
    for c in resampled.curves:
        tau, _ = tangent_and_curvature(c)
        nbar = np.conj(-1j * tau)
        weight = np.sqrt(c.speed)[:, None]
        rows.append(np.real(probe.gradient_matrix(c.points) * nbar[:, None]) * weight)
        rhs.append((datum - np.real(c.points / 2 * nbar)) * weight[:, 0])
    a = np.vstack(rows)
    b = np.concatenate(rhs)
    q, r = np.linalg.qr(a)
    d = np.abs(np.diag(r))
    if d.min() < 1e-13 * d.max():
        raise NeumannSolveError("harmonic basis is rank deficient; change degree or hole points")
    x = np.linalg.solve(r, q.T @ b)

    sol = PoissonSolution(basis, x[: n_cols - n_holes], x[n_cols - n_holes:], np.inf)
    resid = max(float(np.abs(sol.normal_derivative(c) - datum).max()) for c in resampled.curves)
    outer = resampled.outer
    gauge = float(outer.integrate(sol(outer.points) * outer.speed) / outer.length)
    return PoissonSolution(basis, sol.coeffs, sol.beta, resid, gauge)


@dataclass(frozen=True)
class OscillationReport:
    osc: list
    c: list

    @property
    def max_osc(self):
        return float(max(self.osc))


def boundary_oscillation(solution, domain):
    """Per component (max u - min u) and arc-length mean of u."""
    osc, means = [], []
    for c in domain.curves:
        u = solution(c.points)
        osc.append(float(u.max() - u.min()))
        means.append(float(c.integrate(u * c.speed) / c.length))
    return OscillationReport(osc, means)


def total_flux(solution, domain):
    """Sum over components of oint du/dn ds; equals the area when Delta u = 1."""
    return float(sum(c.integrate(solution.normal_derivative(c) * c.speed) for c in domain.curves))


def serrin_report(domain, degree=DEFAULT_DEGREE):
    sol = solve_neumann(domain, degree)
    rep = boundary_oscillation(sol, domain)
    return {
        "neumann_residual": sol.neumann_residual,
        "osc": rep.osc,
        "c": rep.c,
        "beta": [float(b) for b in sol.beta],
        "total_flux": total_flux(sol, domain),
        "area": area_perimeter(domain)[0],
    }
