"""Analytic content by discrete complex Chebyshev approximation of conj(z).

The candidate space is spanned by powers of (z - c) about the domain
centroid and by negative powers of (z - a_k) about a point in every hole.
The minimax problem is solved with Lawson's iteratively reweighted least
squares on boundary samples. Restricting to the boundary loses nothing:
for analytic phi, |conj(z) - phi|**2 has Laplacian 4 (1 + |phi'|**2) > 0,
so the error modulus peaks on the boundary. An interior grid is still
evaluated and folded into ``lambda_hat`` as a safeguard.
"""

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, area_perimeter, tangent_and_curvature
from .laurent import Laurent

log = logging.getLogger(__name__)

DEFAULT_DEGREE = 12


class RankWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AnalyticBasis:
    """z-powers ((z-c)/rho)**j, j=0..N, and (rho_k/(z-a_k))**j, j=1..N per hole.

    The scalings make every element bounded by 1 on the closed domain.
    """

    center: complex
    scale: float
    degree: int
    hole_points: tuple = ()
    hole_scales: tuple = ()

    @classmethod
    def for_domain(cls, domain, degree=DEFAULT_DEGREE):
        c = domain.centroid
        rho = float(np.abs(domain.outer.points - c).max())
        scales = tuple(float(np.abs(cv.points - a).min()) for cv, a in zip(domain.inners, domain.hole_points))
        return cls(c, rho, int(degree), tuple(domain.hole_points), scales)

    @property
    def size(self):
        return self.degree + 1 + len(self.hole_points) * self.degree

    @property
    def labels(self):
        out = [f"(z-c)^{j}" for j in range(self.degree + 1)]
        for k in range(len(self.hole_points)):
            out += [f"(z-a{k + 1})^-{j}" for j in range(1, self.degree + 1)]
        return out

    def matrix(self, z):
        z = np.asarray(z, dtype=np.complex128).ravel()
        cols = [((z - self.center) / self.scale)[:, None] ** np.arange(self.degree + 1)]
        j = np.arange(1, self.degree + 1)
        for a, r in zip(self.hole_points, self.hole_scales):
            cols.append((r / (z - a))[:, None] ** j)
        return np.hstack(cols)

    def to_laurent(self, coeffs):
        """Expansion in unscaled powers (z-c)^j and (z-a_k)^-j."""
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        n = self.degree
        poly = coeffs[: n + 1] / self.scale ** np.arange(n + 1)
        rows = []
        for k, r in enumerate(self.hole_scales):
            block = coeffs[n + 1 + k * n: n + 1 + (k + 1) * n]
            rows.append(block * r ** np.arange(1, n + 1))
        pole_coef = np.array(rows) if rows else np.zeros((0, 1))
        return Laurent(self.center, poly, np.array(self.hole_points, dtype=complex), pole_coef)


@dataclass(frozen=True)
class Certificate:
    """A value of lambda together with an analytic phi (closed forms, tests)."""

    lambda_hat: float
    phi: Laurent


@dataclass(frozen=True)
class ApproximationResult:
    lambda_hat: float
    coeffs: np.ndarray
    basis: AnalyticBasis
    phi: Laurent
    error_profile: list
    bounds: tuple
    certified: bool
    iterations: int
    lower_estimate: float
    interior_max: float
    history: list = field(default_factory=list, repr=False)

    @property
    def gap_lower(self):
        return self.lambda_hat - self.bounds[0]

    @property
    def gap_upper(self):
        return self.bounds[1] - self.lambda_hat

    @property
    def boundary_max(self):
        return float(max(e.max() for e in self.error_profile))


def bounds(domain):
    """(2A/P, sqrt(A/pi)): the two-sided estimate of the analytic content."""
    area, perim = area_perimeter(domain)
    return 2.0 * area / perim, float(np.sqrt(area / np.pi))


def boundary_samples(domain, m):
    t = TWO_PI * np.arange(m) / m
    return [c.evaluate(t) for c in domain.curves]


def interior_grid(domain, target=2000):
    """About ``target`` points of a uniform grid lying inside the domain."""
    p = domain.outer.points
    x0, x1, y0, y1 = p.real.min(), p.real.max(), p.imag.min(), p.imag.max()
    area, _ = area_perimeter(domain)
    h = np.sqrt(area / target)
    xs = np.arange(x0 + h / 2, x1, h)
    ys = np.arange(y0 + h / 2, y1, h)
    g = (xs[None, :] + 1j * ys[:, None]).ravel()
    return g[domain.contains(g)]


def _weighted_lstsq(b, f, w, ridge=0.0):
    sw = np.sqrt(w)
    a = b * sw[:, None]
    rhs = f * sw
    q, r = np.linalg.qr(a)
    d = np.abs(np.diag(r))
    if d.min() < 1e-13 * d.max() or ridge > 0:
        if ridge == 0:
            warnings.warn("ill-conditioned basis; using ridge-regularized solve", RankWarning, stacklevel=3)
            ridge = 1e-12 * float(np.sum(w))
        a = np.vstack([a, np.sqrt(ridge) * np.eye(b.shape[1])])
        rhs = np.concatenate([rhs, np.zeros(b.shape[1])])
        q, r = np.linalg.qr(a)
    return np.linalg.solve(r, q.conj().T @ rhs)


def lawson(b, f, max_iter=500, tol=1e-6):
    """Discrete complex minimax min_c max_i |f_i - (B c)_i| by Lawson's IRLS.

    Returns (coeffs, errors, converged, iterations, lower_estimate, history).
    The weighted RMS error is a lower bound for the minimax value and the max
    error an upper bound; iteration stops when max - weighted mean falls
    below ``tol`` times the max.
    """
    n = f.size
    w = np.full(n, 1.0 / n)
    history = []
    converged = False
    coeffs = e = None
    lower = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        coeffs = _weighted_lstsq(b, f, w)
        e = np.abs(f - b @ coeffs)
        emax = float(e.max())
        mean = float(w @ e)
        lower = max(lower, float(np.sqrt(w @ e**2)))
        history.append(emax)
        if emax == 0.0 or emax - mean < tol * emax:
            converged = True
            break
        w = w * e
        total = w.sum()
        if total == 0.0:
            break
        w /= total
    return coeffs, e, converged, it, lower, history


def solve_minimax(domain, basis=None, m=None, degree=DEFAULT_DEGREE, max_iter=500, tol=1e-6, interior=2000,
                  warn=True):
    """Best uniform approximation of conj(z) on the domain from ``basis``.

    ``m`` is the number of samples per boundary component and must be at
    least four times the basis size.
    """
    basis = basis or AnalyticBasis.for_domain(domain, degree)
    m = int(m or max(4 * basis.size, 512))
    if m < 4 * basis.size:
        raise ValueError(f"need at least {4 * basis.size} boundary samples per component, got {m}")
    zs = boundary_samples(domain, m)
    z = np.concatenate(zs)
    b = basis.matrix(z)
    coeffs, e, converged, iters, lower, history = lawson(b, np.conj(z), max_iter, tol)
    if not converged and warn:
        log.warning("Lawson iteration stopped after %d steps without meeting tolerance", iters)
    phi = basis.to_laurent(coeffs)
    profile = [np.abs(np.conj(zk) - phi(zk)) for zk in zs]
    inner_max = 0.0
    if interior:
        g = interior_grid(domain, interior)
        if g.size:
            inner_max = float(np.abs(np.conj(g) - phi(g)).max())
    lam = max(float(max(p.max() for p in profile)), inner_max)
    return ApproximationResult(
        lambda_hat=lam,
        coeffs=coeffs,
        basis=basis,
        phi=phi,
        error_profile=profile,
        bounds=bounds(domain),
        certified=converged,
        iterations=iters,
        lower_estimate=lower,
        interior_max=inner_max,
        history=history,
    )


def solve_adaptive(domain, degree=DEFAULT_DEGREE, max_degree=48, m=None, **kw):
    """``solve_minimax`` with the degree doubled until Lawson certifies.

    An uncertified run usually means the basis cannot resolve the best
    approximation, not that the iteration is slow. The last run is returned
    (flagged non-certified if ``max_degree`` was reached first).
    """
    while True:
        res = solve_minimax(domain, degree=degree, m=m, warn=degree >= max_degree, **kw)
        if res.certified or degree >= max_degree:
            return res
        degree = min(2 * degree, max_degree)
        if m is not None:
            m = max(m, 4 * AnalyticBasis.for_domain(domain, degree).size)


def extremality_residual(domain, cert):
    """Per component max |conj(z) - i lambda dzbar/ds - phi(z)| on the boundary.

    ``cert`` is anything with ``lambda_hat`` and a callable ``phi``.
    """
    lam = cert.lambda_hat
    out = []
    for c in domain.curves:
        tau, _ = tangent_and_curvature(c)
        z = c.points
        r = np.conj(z) - 1j * lam * np.conj(tau) - cert.phi(z)
        out.append(float(np.abs(r).max()))
    return out


def result_to_json(domain, result):
    lo, hi = result.bounds
    lap = result.phi
    return {
        "lambda_hat": result.lambda_hat,
        "bounds": [lo, hi],
        "gap_lower": result.gap_lower,
        "gap_upper": result.gap_upper,
        "certified": bool(result.certified),
        "iterations": int(result.iterations),
        "coeffs": {
            "labels": result.basis.labels,
            "scaled": [[float(c.real), float(c.imag)] for c in result.coeffs],
            "laurent": lap.to_json(),
        },
        "residuals_per_component": extremality_residual(domain, result),
    }
