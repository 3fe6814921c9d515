"""Conformal maps of doubly-connected domains onto concentric annuli.

h(z) = (z - a) exp(g(z)) with a a point in the hole and g analytic in the
closed domain (powers of z - c and of 1/(z - a)). Requiring |h| to be
constant on each boundary curve is the linear least-squares problem

    log|z - a| + Re g(z) = c_k   on Gamma_k,

in the coefficients of g and the two constants; then R_k = exp(c_k). The
coefficient of log|z - a| is pinned to 1 so that h is single valued.
"""

from dataclasses import dataclass

import numpy as np

from .approx import interior_grid
from .geometry import TWO_PI, InvalidDomainError
from .laurent import Laurent

DEFAULT_DEGREE = 24


class ConformalMapError(RuntimeError):
    pass


@dataclass(frozen=True)
class AnnulusMap:
    """h maps the domain onto R2 <= |w| <= R1, the outer curve to |w| = R1."""

    R1: float
    R2: float
    hole: complex
    g: Laurent
    boundary_residual: float
    condition: float

    @property
    def modulus(self):
        return float(np.log(self.R1 / self.R2))

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return (z - self.hole) * np.exp(self.g(z))

    def log_deriv(self, z):
        """(log h)' = 1/(z - a) + g'(z)."""
        z = np.asarray(z, dtype=np.complex128)
        return 1.0 / (z - self.hole) + self.g.deriv()(z)

    def deriv(self, z):
        return self(z) * self.log_deriv(z)

    def inverse(self, w, seeds, tol=1e-13, max_iter=50):
        """Newton solve of h(z) = w, each w seeded from the nearest h(seed).

        Returns (z, converged mask).
        """
        w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        seeds = np.asarray(seeds, dtype=np.complex128)
        hs = self(seeds)
        z = seeds[np.argmin(np.abs(w[:, None] - hs[None, :]), axis=1)].copy()
        ok = np.zeros(w.shape, dtype=bool)
        scale = np.maximum(np.abs(w), 1e-300)
        for _ in range(max_iter):
            r = self(z) - w
            ok = np.abs(r) <= tol * scale
            if ok.all():
                break
            step = r / self.deriv(z)
            # damp steps larger than the local sample spacing
            big = np.abs(step) > 0.1
            step[big] *= 0.1 / np.abs(step[big])
            z = np.where(ok, z, z - step)
        return z, ok


def _basis(z, center, scale, hole, hole_scale, degree):
    j = np.arange(1, degree + 1)
    return np.hstack([((z - center) / scale)[:, None] ** j, (hole_scale / (z - hole))[:, None] ** j])


def map_to_annulus(domain, degree=DEFAULT_DEGREE, m=None, tol=1e-9, max_degree=96, fail_tol=1e-6):
    """Fit h starting at ``degree`` and raising it until the moduli |h| on
    the two curves are constant to ``tol`` (or ``max_degree`` is reached).

    Raises ConformalMapError if the best fit is still off by more than
    ``fail_tol`` (relative to R1).
    """
    best = None
    while True:
        amap = _fit_annulus_map(domain, degree, m)
        if best is None or amap.boundary_residual < best.boundary_residual:
            best = amap
        if best.boundary_residual <= tol or degree >= max_degree:
            break
        degree = min(2 * degree, max_degree)
    if best.boundary_residual > fail_tol * best.R1:
        raise ConformalMapError(f"|h| is constant on the boundary only to {best.boundary_residual:.3g} at degree "
                                f"{degree}; boundary curves may be nearly touching")
    return best


def _fit_annulus_map(domain, degree, m=None):
    if domain.connectivity != 2:
        raise InvalidDomainError("conformal annulus maps need a doubly-connected domain")
    a = complex(domain.hole_points[0])
    center = domain.centroid
    scale = float(np.abs(domain.outer.points - center).max())
    inner = domain.inners[0]
    hole_scale = float(np.abs(inner.points - a).min())
    n_cols = 4 * degree + 2
    m = int(m or max(4 * n_cols, 512))
    t = TWO_PI * np.arange(m) / m
    rows, rhs = [], []
    for k, c in enumerate(domain.curves):
        z = c.evaluate(t)
        w = np.sqrt(np.abs(c.evaluate(t, 1)))
        b = _basis(z, center, scale, a, hole_scale, degree)
        consts = np.zeros((m, 2))
        consts[:, k] = -1.0
        rows.append(np.hstack([b.real, -b.imag, consts]) * w[:, None])
        rhs.append(-np.log(np.abs(z - a)) * w)
    mat = np.vstack(rows)
    vec = np.concatenate(rhs)
    sv = np.linalg.svd(mat, compute_uv=False)
    cond = float(sv[0] / sv[-1])
    if not np.isfinite(cond) or cond > 1e13:
        raise ConformalMapError(f"harmonic basis is ill-conditioned (condition number {cond:.3g}); "
                                "boundary curves may be nearly touching")
    x, *_ = np.linalg.lstsq(mat, vec, rcond=None)
    nb = 2 * degree
    coef = x[:nb] + 1j * x[nb:2 * nb]
    c1, c2 = x[-2], x[-1]
    poly = np.concatenate([[0.0], coef[:degree] / scale ** np.arange(1, degree + 1)])
    poles = (coef[degree:] * hole_scale ** np.arange(1, degree + 1))[None, :]
    g = Laurent(center, poly, np.array([a]), poles)
    amap = AnnulusMap(float(np.exp(c1)), float(np.exp(c2)), a, g, np.inf, cond)
    resid = 0.0
    for c, r in zip(domain.curves, (amap.R1, amap.R2)):
        resid = max(resid, float(np.abs(np.abs(amap(c.points)) - r).max()))
    if amap.R2 >= amap.R1:
        raise ConformalMapError("inner radius came out larger than the outer one")
    return AnnulusMap(amap.R1, amap.R2, a, g, resid, cond)


# ------------------------------------------------------------------ checks


@dataclass(frozen=True)
class LemmaL1Report:
    C: complex
    deviation: float


def lemma_l1_check(domain, phi, amap, n_interior=2000):
    """Best C with phi'(z) ~ C ((log h)'(z))**2 on interior samples.

    ``phi`` is a Laurent, a certificate or an approximation result;
    ``deviation`` is max |phi' - C (log h)'**2| / max |phi'|.
    """
    phi = getattr(phi, "phi", phi)
    z = interior_grid(domain, n_interior)
    dphi = phi.deriv()(z)
    lh = amap.log_deriv(z) ** 2
    c = complex(np.vdot(lh, dphi) / np.vdot(lh, lh))
    scale = max(float(np.abs(dphi).max()), 1e-300)
    return LemmaL1Report(c, float(np.abs(dphi - c * lh).max() / scale))


def boundary_correspondence(domain, amap, n=64):
    """mu(z) = h^-1((R1/R2) h(z)) for z on the inner curve.

    Returns (z2, z1, converged) with z1 = mu(z2) on the outer curve.
    """
    t = TWO_PI * np.arange(n) / n
    z2 = domain.inners[0].evaluate(t)
    w = amap(z2) * (amap.R1 / amap.R2)
    seeds = domain.outer.evaluate(TWO_PI * np.arange(4096) / 4096)
    z1, ok = amap.inverse(w, seeds)
    return z2, z1, ok


def cross_ratio(a, b, c, d):
    return (a - c) * (b - d) / ((a - d) * (b - c))


@dataclass(frozen=True)
class MobiusReport:
    defect: float
    failed: list
    z2: np.ndarray
    z1: np.ndarray


def mobius_check(domain, amap, n=64):
    """Cross-ratio defect of the boundary correspondence mu.

    Quadruples are samples a quarter turn apart; mu is Moebius iff it keeps
    every cross-ratio.
    """
    if n % 4:
        raise ValueError("n must be a multiple of 4")
    z2, z1, ok = boundary_correspondence(domain, amap, n)
    q = n // 4
    i = np.arange(q)
    idx = (i, i + q, i + 2 * q, i + 3 * q)
    cr_z = cross_ratio(*(z2[k] for k in idx))
    cr_w = cross_ratio(*(z1[k] for k in idx))
    defect = float(np.abs(cr_w - cr_z).max())
    return MobiusReport(defect, [int(k) for k in np.flatnonzero(~ok)], z2, z1)


def qd_invariance(domain, qd, amap, n=64):
    """max |phi'(z2) - phi'(mu(z2)) mu'(z2)**2| over inner-curve samples."""
    z2, z1, _ = boundary_correspondence(domain, amap, n)
    dmu = (amap.R1 / amap.R2) * amap.deriv(z2) / amap.deriv(z1)
    return float(np.abs(qd(z2) - qd(z1) * dmu**2).max())


@dataclass(frozen=True)
class InverseForm:
    form: str
    a: complex
    b: complex
    residual: float


def fit_inverse_form(domain, amap, n=256):
    """Fit h^-1(w) by a w + b and by a / w + b on boundary samples.

    Returns the better of the two, with its max residual in z.
    """
    t = TWO_PI * np.arange(n) / n
    z = np.concatenate([c.evaluate(t) for c in domain.curves])
    w = amap(z)
    best = None
    for form, col in (("linear", w), ("inversion", 1.0 / w)):
        mat = np.column_stack([col, np.ones_like(col)])
        (a, b), *_ = np.linalg.lstsq(mat, z, rcond=None)
        res = float(np.abs(mat @ np.array([a, b]) - z).max())
        if best is None or res < best.residual:
            best = InverseForm(form, complex(a), complex(b), res)
    return best


def conformal_report(domain, amap, phi=None):
    out = {"R1": amap.R1, "R2": amap.R2, "modulus": amap.modulus, "C_fit": None,
           "mobius_defect": mobius_check(domain, amap).defect}
    if phi is not None:
        c = lemma_l1_check(domain, phi, amap).C
        out["C_fit"] = [c.real, c.imag]
    return out
