"""Schwarz functions of analytic curves, the Riccati equation they satisfy
on extremal boundaries, Schwarzian derivatives and the droplet and
free-boundary residuals.

Along a curve z(t), conj(z(t)) = sum conj(a_j) exp(-i j t) continues
analytically in t, so the Schwarz function near z(t0) is that continuation
composed with the local inverse t(z). Both pieces are Taylor series in t,
and the composition is done in truncated power-series arithmetic.

Square roots u = sqrt(S') are fixed by matching dzbar/ds at the anchor:
on the curve S' = conj(tau)**2 with tau the unit tangent, so u = +-conj(tau).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .geometry import TWO_PI, tangent_and_curvature
from ._kernels import winding_numbers
from .series import Series, schwarzian_at

DEFAULT_ORDER = 48


class ReversionError(ValueError):
    pass


def _factorials(n):
    out = np.ones(n + 1)
    for k in range(1, n + 1):
        out[k] = out[k - 1] * k
    return out


def _t_taylor(coeffs, modes, t0, order):
    """Taylor coefficients in s of sum c_j exp(i j (t0 + s))."""
    k = np.arange(order + 1)
    w = coeffs * np.exp(1j * modes * t0)
    return ((1j * modes)[None, :] ** k[:, None] @ w) / _factorials(order)


def _decay_radius(c, fallback):
    """Radius of convergence estimated from a log-linear fit of |c_k|."""
    k = np.arange(c.size)
    mag = np.abs(c)
    sel = (k >= max(2, c.size // 3)) & (mag > 1e-300)
    if sel.sum() < 3:
        return fallback
    slope = np.polyfit(k[sel], np.log(mag[sel]), 1)[0]
    return float(np.exp(-slope))


@dataclass(frozen=True)
class LocalSchwarzFunction:
    """Taylor expansion of S about z0 = z(t0), valid for |z - z0| < radius."""

    series: Series
    curve: object
    t0: float
    radius: float
    residual: float
    window: tuple

    @property
    def anchor(self):
        return self.series.at

    def __call__(self, z):
        return self.series(np.asarray(z, dtype=np.complex128))

    def deriv(self):
        return self.series.deriv()

    def window_t(self, n=257):
        return np.linspace(self.window[0], self.window[1], n)

    def window_points(self, n=257):
        return self.curve.evaluate(self.window_t(n))

    def u(self, sign=1):
        """sqrt(S') as a series, equal to sign * dzbar/ds at the anchor."""
        tau, _ = tangent_and_curvature(self.curve, np.array([self.t0]))
        return self.deriv().sqrt(branch=sign * np.conj(tau[0]))


def schwarz_series(curve, t0=0.0, order=DEFAULT_ORDER, tol=1e-8):
    """Local Schwarz function of ``curve`` about z(t0).

    The expansion is checked against conj(z(t)) on the t-window whose image
    lies within the validity radius; the worst deviation is ``residual``.
    """
    modes = curve.modes
    zt = _t_taylor(curve.coeffs, modes, t0, order)
    zbar_t = _t_taylor(np.conj(curve.coeffs), -modes, t0, order)
    if abs(zt[1]) < 1e-10 * max(1.0, np.abs(curve.coeffs).max()):
        raise ReversionError("z'(t0) is too small to invert the parametrization")
    t_of_z = Series(zt, 0.0).revert()
    s_series = Series(zbar_t, 0.0).compose(t_of_z)
    s_series = Series(s_series.coeffs, zt[0])

    z0 = complex(zt[0])
    dense = curve.evaluate(TWO_PI * np.arange(4096) / 4096)
    far = float(np.abs(dense - z0).max())
    rho = _decay_radius(s_series.coeffs, far)
    # truncation error ~ (r / rho)**order, kept well below tol
    radius = rho * min(0.5, (1e-3 * tol) ** (1.0 / max(order, 1)))
    # t-window around t0 whose image stays inside the disk of validity
    speed = abs(zt[1])
    half = min(np.pi, radius / speed)
    for _ in range(60):
        tt = t0 + np.linspace(-half, half, 129)
        if np.abs(curve.evaluate(tt) - z0).max() < radius:
            break
        half *= 0.8
    window = (t0 - half, t0 + half)
    tt = np.linspace(*window, 257)
    zz = curve.evaluate(tt)
    residual = float(np.abs(s_series(zz) - np.conj(zz)).max())
    if residual > tol:
        # shrink toward the anchor until the expansion is within tolerance
        for _ in range(40):
            half *= 0.7
            window = (t0 - half, t0 + half)
            tt = np.linspace(*window, 257)
            zz = curve.evaluate(tt)
            residual = float(np.abs(s_series(zz) - np.conj(zz)).max())
            if residual <= tol:
                radius = float(np.abs(zz - z0).max())
                break
    return LocalSchwarzFunction(s_series, curve, float(t0), float(radius), residual, window)


@dataclass(frozen=True)
class RiccatiReport:
    residual: float
    alpha: int
    branch: int
    flagged: bool
    other_residual: float


def riccati_residual(schwarz, lam, alpha, qd, tol=1e-6, n=257, branch=None):
    """max |u**2 + i alpha lam u' - phi'| over the validity window.

    The branch is u = -alpha * dzbar/ds. With Omega kept on the left of
    every boundary component (outer curve counterclockwise, inner curves
    clockwise) this is u matched to the counterclockwise traversal of each
    component, which is the pairing under which alpha = -1 on the outer
    boundary and alpha = +1 on inner ones. If that branch misses the
    tolerance but the opposite one meets it, the opposite one is reported
    and ``flagged`` is set. ``branch`` (+1 or -1, as a multiple of dzbar/ds)
    overrides the default choice.
    """
    alpha = int(alpha)
    if alpha not in (-1, 1):
        raise ValueError("alpha must be +1 or -1")
    z = schwarz.window_points(n)
    target = qd(z)

    def resid(sign):
        u = schwarz.u(sign)
        du = u.deriv()
        uz, duz = u(z), du(z)
        return float(np.abs(uz**2 + 1j * alpha * lam * duz - target).max())

    branch = -alpha if branch is None else int(branch)
    r = resid(branch)
    other = resid(-branch)
    flagged = False
    if r > tol and other <= tol:
        flagged = True
        branch, r, other = -branch, other, r
    return RiccatiReport(r, alpha, branch, flagged, other)


def branch_consistency(schwarz, n=257):
    """max |u - dzbar/ds| on the window for the anchor-matched branch."""
    t = schwarz.window_t(n)
    tau, _ = tangent_and_curvature(schwarz.curve, t)
    u = schwarz.u(1)(schwarz.curve.evaluate(t))
    return float(np.abs(u - np.conj(tau)).max())


# --------------------------------------------------------------- Schwarzian


@dataclass(frozen=True)
class HomogeneityReport:
    deviation: float
    c: complex
    c_spread: float


def homogeneity_check(f, lam, z=None, radius=None):
    """Compare lam**2 S(f)(lam z) with S(f)(z) and fit S(f) = c / z**2.

    ``z`` are test points (default: a ring of radius 1); both z and lam z
    must lie where f is analytic with f' != 0.
    """
    if z is None:
        z = np.exp(1j * (0.3 + TWO_PI * np.arange(12) / 12))
    z = np.asarray(z, dtype=np.complex128)
    s1 = schwarzian_at(f, z, radius)
    s2 = schwarzian_at(f, lam * z, radius)
    dev = float(np.abs(lam**2 * s2 - s1).max())
    cz = s1 * z**2
    c = complex(cz.mean())
    return HomogeneityReport(dev, c, float(np.abs(cz - c).max()))


@dataclass(frozen=True)
class RiccatiRoots:
    c: complex
    roots: tuple
    residuals: tuple
    double_root: bool


def riccati_general_solution_check(c, z=None):
    """u = c0/z solves u' - u**2/2 = c/z**2 iff c0**2 + 2 c0 + 2c = 0."""
    if z is None:
        z = np.exp(1j * np.linspace(0.1, 6.0, 9)) * np.linspace(0.5, 2.0, 9)
    z = np.asarray(z, dtype=np.complex128)
    disc = np.sqrt(complex(1 - 2 * c))
    roots = (-1 + disc, -1 - disc)
    res = []
    for c0 in roots:
        u, du = c0 / z, -c0 / z**2
        res.append(float(np.abs(du - u**2 / 2 - c / z**2).max()))
    return RiccatiRoots(complex(c), roots, tuple(res), bool(abs(disc) < 1e-14))


def mobius_series(a, b, c, d, at=0j, order=DEFAULT_ORDER):
    return Series.variable(at, order).mobius(a, b, c, d)



# ------------------------------------------------- droplet / free boundary


def droplet_residual(curve, lam, c, branch=1):
    """max |S(z) - i lam sqrt(S'(z)) - c/z| on the curve.

    On the curve S = conj(z) and sqrt(S') = branch * dzbar/ds.
    """
    tau, _ = tangent_and_curvature(curve)
    z = curve.points
    if np.abs(z).min() <= 1e-12 * np.abs(z).max() or winding_numbers(np.zeros(1, complex), z)[0] == 0:
        raise ValueError("the origin must lie strictly inside the curve")
    r = np.conj(z) - 1j * lam * branch * np.conj(tau) - c / z
    return float(np.abs(r).max())


@dataclass(frozen=True)
class DropletFit:
    residual: float
    lam: float
    c: float
    grid_residual: float


def droplet_fit(curve, lam_range=None, c_range=None, n=50):
    """Smallest droplet residual over (lambda, c).

    A log-spaced n x n grid (c takes both signs and 0) is searched and the
    best point polished by Nelder-Mead; the residual is a max of moduli of
    affine functions of (lambda, c), hence convex, so the polish reaches the
    global minimum.
    """
    z = curve.points
    tau, _ = tangent_and_curvature(curve)
    scale = float(np.abs(z).max())
    lo, hi = lam_range or (1e-3 * scale, 10 * scale)
    lams = np.geomspace(lo, hi, n)
    clo, chi = c_range or (1e-4 * scale**2, 10 * scale**2)
    half = np.geomspace(clo, chi, n // 2)
    cs = np.concatenate([-half[::-1], [0.0], half[: n - n // 2 - 1]])
    zb, a_col, b_col = np.conj(z), -1j * np.conj(tau), -1 / z

    def obj(p):
        return float(np.abs(zb + p[0] * a_col + p[1] * b_col).max())

    grid = np.abs(zb[None, None, :] + lams[:, None, None] * a_col + cs[None, :, None] * b_col).max(axis=2)
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    best = minimize(obj, [lams[i], cs[j]], method="Nelder-Mead",
                    options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    lam, c = best.x
    return DropletFit(float(best.fun), float(lam), float(c), float(grid[i, j]))


@dataclass(frozen=True)
class FBPReport:
    residual: float
    profile: np.ndarray


def fbp_residual(curve, p, t, F):
    """p conj(z) - i t dzbar/ds - F(z) along the curve."""
    tau, _ = tangent_and_curvature(curve)
    z = curve.points
    prof = p * np.conj(z) - 1j * t * np.conj(tau) - F(z)
    return FBPReport(float(np.abs(prof).max()), prof)
