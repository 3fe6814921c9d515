"""Quadratic differentials phi'(z) dz**2: boundary identity, zeros,
horizontal/vertical trajectories, Stokes graphs and the linear ODE
v'' = -phi'(z) v / lambda**2 with its Liouville-Green approximation.

Trajectories are integrated as unit-speed curves dz/dsigma = exp(i theta)
with theta = -arg(phi')/2 on horizontal arcs (phi' dz**2 > 0, the Sigma+
family) and theta + pi/2 on vertical arcs (Sigma-). The sign of exp(i theta)
is chosen by continuity with the previous step, so no global branch cut of
sqrt(phi') is ever needed.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .geometry import TWO_PI, tangent_and_curvature
from .laurent import Laurent
from .series import Series

log = logging.getLogger(__name__)

PLUS = "+"
MINUS = "-"


class TracingError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadraticDifferential:
    """phi'(z) dz**2 with phi' a polynomial plus principal parts."""

    phi_prime: Laurent

    @classmethod
    def from_phi(cls, phi):
        return cls(phi.deriv())

    @classmethod
    def polynomial(cls, coeffs, center=0j):
        return cls(Laurent.polynomial(coeffs, center))

    @classmethod
    def from_poles(cls, poles, poly=(0,), center=0j):
        return cls(Laurent.from_poles(poles, poly, center))

    def __call__(self, z):
        return self.phi_prime(z)

    @property
    def derivative(self):
        return self.phi_prime.deriv()

    @property
    def poles(self):
        return self.phi_prime.poles

    def pole_orders(self):
        out = []
        for a, row in zip(self.phi_prime.pole_at, self.phi_prime.pole_coef):
            nz = np.flatnonzero(row)
            if nz.size:
                out.append((complex(a), int(nz[-1]) + 1))
        return out

    def taylor(self, z0, order, radius=None):
        if radius is None:
            d = min([abs(z0 - p) for p in self.poles] + [1.0])
            radius = 0.25 * d
        return Series.from_function(self.phi_prime, z0, radius, order)


# ------------------------------------------------------- boundary identity


@dataclass(frozen=True)
class BoundaryIdentityReport:
    profiles: list
    residual: float
    realness: float
    integrals: list
    expected: list

    @property
    def positive(self):
        return all(v > 0 for v in self.integrals)


def boundary_identity(domain, lam, qd):
    """phi'(z)(dz/ds)**2 - (1 + lambda kappa) along each boundary component.

    Also returns oint (1 + lambda kappa) ds per component next to its
    closed-form value L_1 - 2 pi lambda (outer) or L_k + 2 pi lambda (inner).
    """
    profiles, integrals, expected = [], [], []
    realness = 0.0
    for k, c in enumerate(domain.curves):
        tau, kappa = tangent_and_curvature(c)
        lhs = qd(c.points) * tau**2
        rhs = 1.0 + lam * kappa
        profiles.append(lhs - rhs)
        realness = max(realness, float(np.abs(lhs.imag).max()))
        integrals.append(float(c.integrate(rhs * c.speed)))
        expected.append(c.length + (-1 if k == 0 else 1) * TWO_PI * lam)
    residual = float(max(np.abs(p).max() for p in profiles))
    return BoundaryIdentityReport(profiles, residual, realness, integrals, expected)


# ------------------------------------------------------------------ zeros


@dataclass(frozen=True)
class Zero:
    z: complex
    order: int
    on_boundary: bool = False


def _contour_winding(f, corners, n0=64, n_max=1 << 14):
    """Winding number of f around a closed polygon; None if f ~ 0 on it."""
    total = 0.0
    fmin = np.inf
    for a, b in zip(corners, np.roll(corners, -1)):
        n = n0
        while True:
            s = np.linspace(0.0, 1.0, n + 1)
            w = f(a + (b - a) * s)
            if not np.all(np.isfinite(w)):
                return None, 0.0
            fmin = min(fmin, float(np.abs(w).min()))
            if fmin == 0.0:
                return None, 0.0
            dphi = np.angle(w[1:] / w[:-1])
            if np.abs(dphi).max() < np.pi / 3 or n >= n_max:
                break
            n *= 2
        total += dphi.sum()
    return int(np.rint(total / TWO_PI)), fmin


def _pole_count(qd, x0, x1, y0, y1):
    return sum(m for a, m in qd.pole_orders() if x0 < a.real < x1 and y0 < a.imag < y1)


def _newton(f, df, z, m, tol=1e-14, steps=60):
    for _ in range(steps):
        fz, dfz = f(z), df(z)
        if dfz == 0:
            break
        dz = m * fz / dfz
        z = z - dz
        if abs(dz) <= tol * max(1.0, abs(z)):
            break
    return complex(z)


def find_zeros(qd, region, min_size=None, boundary_tol=1e-6):
    """Zeros of phi' with multiplicities by the argument principle.

    ``region`` is a rectangle (x0, x1, y0, y1) or a PlanarDomain; for a domain
    the bounding box is searched and only zeros in the closed domain are
    kept, those within ``boundary_tol`` (diameter units) of the boundary
    flagged ``on_boundary``.
    """
    domain = None
    if hasattr(region, "curves"):
        domain = region
        p = domain.outer.points
        pad = 0.01 * domain.diameter
        region = (p.real.min() - pad, p.real.max() + pad, p.imag.min() - pad, p.imag.max() + pad)
    x0, x1, y0, y1 = map(float, region)
    size = max(x1 - x0, y1 - y0)
    min_size = min_size or 1e-4 * size
    f = qd.phi_prime
    df = qd.derivative
    found = []

    def visit(x0, x1, y0, y1, depth):
        for jitter in (0.0, 1e-7, -3e-7, 7e-7):
            dx, dy = jitter * (x1 - x0), jitter * (y1 - y0)
            corners = np.array([x0 + dx + 1j * (y0 + dy), x1 + dx + 1j * (y0 + dy),
                                x1 + dx + 1j * (y1 + dy), x0 + dx + 1j * (y1 + dy)])
            w, _ = _contour_winding(f, corners)
            if w is not None:
                break
        else:
            raise TracingError("phi' vanishes on every jittered subdivision contour")
        count = w + _pole_count(qd, x0 + dx, x1 + dx, y0 + dy, y1 + dy)
        if count <= 0:
            return
        if max(x1 - x0, y1 - y0) <= min_size or depth > 60:
            z = _newton(f, df, complex((x0 + x1) / 2, (y0 + y1) / 2), count)
            found.append(Zero(z, count))
            return
        # off-center split keeps symmetric zeros and poles off the cut lines
        xm = x0 + (x1 - x0) * 0.5123456789
        ym = y0 + (y1 - y0) * 0.4876543211
        for a, b, c, d in ((x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)):
            visit(a, b, c, d, depth + 1)

    visit(x0, x1, y0, y1, 0)

    merged = []
    for zr in found:
        for i, other in enumerate(merged):
            if abs(other.z - zr.z) < 1e-8 * max(1.0, size):
                merged[i] = Zero(other.z, max(other.order, zr.order))
                break
        else:
            merged.append(zr)
    if domain is None:
        return sorted(merged, key=lambda r: (r.z.real, r.z.imag))
    out = []
    tol = boundary_tol * domain.diameter
    for zr in merged:
        dist = min(float(np.abs(c.points - zr.z).min()) for c in domain.curves)
        on_b = dist < tol
        if on_b or domain.contains(np.array([zr.z]))[0]:
            if on_b:
                log.warning("phi' vanishes on the boundary at %s", zr.z)
            out.append(Zero(zr.z, zr.order, on_b))
    return sorted(out, key=lambda r: (r.z.real, r.z.imag))


# ------------------------------------------------------------- trajectories

# Dormand-Prince 5(4)
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


@dataclass
class Trajectory:
    points: np.ndarray
    family: str
    termination: str
    length: float
    closure_error: float = np.nan
    end_zero: int | None = None
    start_zero: int | None = None

    @property
    def start(self):
        return complex(self.points[0])

    @property
    def end(self):
        return complex(self.points[-1])

    def point_at_length(self, s):
        seg = np.abs(np.diff(self.points))
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        s = min(max(s, 0.0), cum[-1])
        k = int(np.searchsorted(cum, s, side="right") - 1)
        k = min(k, seg.size - 1)
        frac = 0.0 if seg[k] == 0 else (s - cum[k]) / seg[k]
        return complex(self.points[k] + frac * (self.points[k + 1] - self.points[k]))


class _Field:
    def __init__(self, qd, family):
        self.args = qd.phi_prime.kernel_args()
        self.shift = 0.0 if family == PLUS else np.pi / 2

    def value(self, z):
        return _kernels.laurent_eval_scalar(complex(z), *self.args)

    def direction(self, z, ref):
        q = self.value(z)
        if q == 0:
            return None
        d = np.exp(1j * (self.shift - np.angle(q) / 2))
        if (d * np.conj(ref)).real < 0:
            d = -d
        return d


def trace_trajectory(
    qd,
    start,
    family=PLUS,
    direction=1.0 + 0j,
    domain=None,
    zeros=(),
    h_max=None,
    max_length=None,
    closure_tol=1e-4,
    rtol=1e-10,
    zero_radius=None,
):
    """Follow a horizontal (``"+"``) or vertical (``"-"``) trajectory.

    ``direction`` picks which of the two senses to follow (the field is only
    defined up to sign). Stops on leaving ``domain`` (endpoint bisected onto
    the boundary), on reaching one of ``zeros``, on returning to ``start``
    with the starting direction (closed loop) or at ``max_length``.
    """
    start = complex(start)
    scale = domain.diameter if domain is not None else max(1.0, abs(start))
    h_max = h_max or 1e-2 * scale
    max_length = max_length or 20.0 * scale
    zero_radius = zero_radius or 1e-6 * scale
    h_min = 1e-12 * scale
    field_ = _Field(qd, family)
    zeros = [complex(getattr(z, "z", z)) for z in zeros]

    d0 = field_.direction(start, complex(direction))
    if d0 is None:
        raise TracingError("trajectory cannot start at a zero of phi'; launch from a nearby point")
    if abs(complex(direction)) > 0 and (d0 * np.conj(direction)).real < 1e-12 * abs(direction):
        log.debug("requested direction is orthogonal to the field; sign chosen arbitrarily")
    pts = [start]
    z, d, length = start, d0, 0.0
    h = min(h_max, 1e-3 * scale)
    left_start = False
    leave_radius = max(10 * closure_tol, 1e-2 * scale)
    termination = "max_length"
    closure_error = np.nan
    end_zero = None

    def rk_step(z, d, h):
        ks = []
        ref = d
        for i in range(7):
            zi = z + h * sum(a * k for a, k in zip(_A[i], ks))
            di = field_.direction(zi, ref)
            if di is None or (di * np.conj(d)).real < np.cos(np.pi / 4):
                return None
            ks.append(di)
        z5 = z + h * np.dot(_B5, ks)
        z4 = z + h * np.dot(_B4, ks)
        return z5, abs(z5 - z4), ks[-1]

    while max_length - length > h_min:
        h = min(h, max_length - length, h_max)
        res = rk_step(z, d, h)
        if res is None:
            h *= 0.5
            if h < h_min:
                if abs(field_.value(z)) < 1e-8 * max(1.0, np.abs(qd.phi_prime.poly).max()):
                    termination = "zero"
                    break
                raise TracingError(f"branch tracking failed near {z}: direction field turns too fast")
            continue
        z_new, err, d_new = res
        tol = rtol * scale
        if err > tol and h > h_min:
            h *= max(0.2, 0.9 * (tol / err) ** 0.2)
            continue

        if domain is not None and not domain.contains(np.array([z_new]))[0]:
            lo, hi = 0.0, h
            for _ in range(50):
                mid = 0.5 * (lo + hi)
                r = rk_step(z, d, mid)
                if r is not None and domain.contains(np.array([r[0]]))[0]:
                    lo = mid
                else:
                    hi = mid
                if hi - lo < 1e-12 * scale:
                    break
            # the polygon test is off by the chord sagitta; finish with a
            # secant solve on the analytic signed distance
            lo_h, hi_h = 0.0, min(2 * hi, hi + 1e-2 * scale)
            g_lo, g_hi = domain.signed_distance(z), None
            r = rk_step(z, d, hi_h)
            if r is not None:
                g_hi = domain.signed_distance(r[0])
            if g_hi is not None and g_lo > 0 > g_hi:
                for _ in range(60):
                    mid = lo_h - g_lo * (hi_h - lo_h) / (g_hi - g_lo)
                    mid = min(max(mid, lo_h + 0.01 * (hi_h - lo_h)), hi_h - 0.01 * (hi_h - lo_h))
                    r = rk_step(z, d, mid)
                    if r is None:
                        break
                    g = domain.signed_distance(r[0])
                    if g > 0:
                        lo_h, g_lo = mid, g
                    else:
                        hi_h, g_hi = mid, g
                    if abs(g) < 1e-13 * scale:
                        break
                hi = mid
            r = rk_step(z, d, hi) if hi > 0 else None
            z_end = r[0] if r is not None else z + hi * d
            pts.append(z_end)
            length += abs(z_end - z)
            termination = "boundary"
            break

        hit = None
        for i, zz in enumerate(zeros):
            seg = z_new - z
            s = np.clip(((zz - z) * np.conj(seg)).real / max(abs(seg) ** 2, 1e-300), 0.0, 1.0)
            if abs(z + s * seg - zz) < max(zero_radius, 1e-3 * abs(seg)) and abs(zz - start) > zero_radius:
                hit = i
                break
        if hit is not None:
            pts.append(zeros[hit])
            length += abs(zeros[hit] - z)
            termination = "zero"
            end_zero = hit
            break

        if left_start:
            seg = z_new - z
            s = ((start - z) * np.conj(seg)).real / max(abs(seg) ** 2, 1e-300)
            if 0.0 <= s <= 1.0 and abs(z + s * seg - start) < 10 * closure_tol:
                r = rk_step(z, d, s * abs(seg))
                z_close = r[0] if r is not None else z + s * seg
                if (d * np.conj(d0)).real > 0:
                    closure_error = float(abs(z_close - start))
                    if closure_error < closure_tol:
                        pts.append(z_close)
                        length += abs(z_close - z)
                        termination = "closed"
                        break
        elif abs(z_new - start) > leave_radius:
            left_start = True

        length += abs(z_new - z)
        z, d = z_new, d_new
        pts.append(z)
        if err > 0:
            h = min(h_max, h * min(5.0, 0.9 * (tol / err) ** 0.2))
        else:
            h = min(h_max, 2 * h)

    return Trajectory(np.array(pts), family, termination, float(length), closure_error, end_zero)


def launch_angles(qd, z0, order, family=PLUS):
    """Directions of the order+2 arcs of a family leaving a zero of given order."""
    lead = qd.taylor(z0, order + 2).coeffs[order]
    shift = 0.0 if family == PLUS else np.pi
    k = np.arange(order + 2)
    return np.mod((2 * np.pi * k + shift - np.angle(lead)) / (order + 2), TWO_PI)


def trace_from_zero(qd, zero, family=PLUS, offset=None, **kw):
    z0, m = complex(getattr(zero, "z", zero)), int(getattr(zero, "order", 1))
    scale = kw["domain"].diameter if kw.get("domain") is not None else 1.0
    offset = offset or 1e-3 * scale
    arcs = []
    for theta in launch_angles(qd, z0, m, family):
        e = np.exp(1j * theta)
        tr = trace_trajectory(qd, z0 + offset * e, family, e, **kw)
        tr.points = np.concatenate([[z0], tr.points])
        tr.length += offset
        arcs.append(tr)
    return arcs


# ------------------------------------------------------------ Stokes graph


@dataclass
class StokesGraph:
    zeros: list
    arcs: list = field(default_factory=list)
    loops: list = field(default_factory=list)

    def family(self, fam):
        return [a for a in self.arcs if a.family == fam]

    def arc_angles(self, zero_index, family=PLUS, radius=None):
        """Sorted directions (radians) in which arcs leave a zero."""
        z0 = self.zeros[zero_index].z
        out = []
        for a in self.arcs:
            if a.family != family:
                continue
            for pts, ok in ((a.points, a.start_zero == zero_index), (a.points[::-1], a.end_zero == zero_index)):
                if not ok:
                    continue
                r = radius or 0.02
                dist = np.abs(pts - z0)
                idx = np.flatnonzero(dist >= r)
                p = pts[idx[0]] if idx.size else pts[-1]
                out.append(float(np.mod(np.angle(p - z0), TWO_PI)))
        return sorted(out)


def _same_arc(a, b, tol):
    if a.family != b.family:
        return False
    for pb in (b.points, b.points[::-1]):
        if abs(a.points[0] - pb[0]) < tol and abs(a.points[-1] - pb[-1]) < tol:
            mid_a = a.point_at_length(a.length / 2)
            if np.abs(b.points - mid_a).min() < 1e3 * tol:
                return True
    return False


def build_stokes_graph(domain, qd, zeros=None, **kw):
    """Sigma+ and Sigma- arcs launched from every interior zero of phi'.

    Arcs traced from both of their end zeros are kept once. When phi' has no
    zeros in the domain the graph is the foliation by closed trajectories;
    one trajectory is then traced from a point of each boundary component.
    """
    zeros = find_zeros(qd, domain) if zeros is None else list(zeros)
    graph = StokesGraph(zeros)
    interior = [z for z in zeros if not z.on_boundary]
    tol = 1e-6 * domain.diameter
    for i, zr in enumerate(interior):
        for fam in (PLUS, MINUS):
            for arc in trace_from_zero(qd, zr, fam, domain=domain, zeros=[z.z for z in zeros], **kw):
                arc.start_zero = zeros.index(zr)
                if any(_same_arc(arc, other, max(tol, 1e-5)) for other in graph.arcs):
                    continue
                graph.arcs.append(arc)
    if not interior:
        for c in domain.curves:
            z0 = complex(c.points[0])
            tau, _ = tangent_and_curvature(c)
            loop = trace_trajectory(qd, z0, PLUS, complex(tau[0]), domain=None,
                                    max_length=2.5 * c.length, h_max=1e-2 * domain.diameter)
            graph.loops.append(loop)
    return graph


def loop_boundary_distance(loop, curve):
    """Max distance from the points of a traced loop to a boundary curve."""
    return float(max(abs(curve.signed_distance(p)) for p in loop.points))


# ---------------------------------------------------------------- path ODE


@dataclass(frozen=True)
class ODESolution:
    path: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    action: np.ndarray
    sqrt_q: np.ndarray


def ode_solve(qd, lam, path, v0, dv0, h_max=1e-3, sqrt_branch=1.0 + 0j):
    """RK4 for v'' = -phi'(z) v / lam**2 along a polyline in the z-plane.

    Also integrates S(z) = int sqrt(phi') dz from the first vertex, with the
    branch of the square root continued from ``sqrt_branch``.
    """
    path = np.ascontiguousarray(path, dtype=np.complex128)
    if path.ndim != 1 or path.size < 2:
        raise ValueError("path must be a polyline with at least two vertices")
    for p in qd.poles:
        seg_d = _polyline_distance(path, p)
        if seg_d < 1e-8:
            raise ValueError("path passes through a pole of phi'")
    v, dv, s, sq = _kernels.rk4_path(path, *qd.phi_prime.kernel_args(), float(lam), complex(v0), complex(dv0),
                                     float(h_max), complex(sqrt_branch))
    return ODESolution(path, v, dv, s, sq)


def _polyline_distance(path, p):
    a, b = path[:-1], path[1:]
    seg = b - a
    s = np.clip(((p - a) * np.conj(seg)).real / np.maximum(np.abs(seg) ** 2, 1e-300), 0, 1)
    return float(np.abs(a + s * seg - p).min())


def wronskian(sol1, sol2):
    return sol1.v * sol2.dv - sol1.dv * sol2.v


# -------------------------------------------------------- Liouville-Green


@dataclass(frozen=True)
class LGTable:
    epsilons: np.ndarray
    errors: np.ndarray
    coefficients: list

    @property
    def ratios(self):
        return self.errors / self.epsilons

    @property
    def variation(self):
        r = self.ratios
        return float(r.max() / r.min()) if r.min() > 0 else np.inf


def sigma_plus_path(qd, z0, order=1, r_start=0.5, r_end=1.5, n=41, arc=0):
    """Points on the ``arc``-th Sigma+ arc from a zero, between two radii."""
    theta = launch_angles(qd, z0, order, PLUS)[arc]
    e = np.exp(1j * theta)
    tr = trace_trajectory(qd, z0 + 1e-3 * e, PLUS, e, max_length=2 * r_end, h_max=min(0.01, r_end / 200))
    pts = np.concatenate([[z0], tr.points])
    radius = np.abs(pts - z0)
    targets = np.linspace(r_start, r_end, n)
    k = np.searchsorted(radius, targets)
    k = np.clip(k, 1, pts.size - 1)
    frac = (targets - radius[k - 1]) / np.maximum(radius[k] - radius[k - 1], 1e-300)
    return pts[k - 1] + frac * (pts[k] - pts[k - 1])


def _lg_basis(lam, hbar, sqrt_q, dq, action):
    """f_pm = sqrt(lam) q**(-1/4) exp(+-i S / hbar) and their z-derivatives."""
    root = np.sqrt(sqrt_q)
    for i in range(1, root.size):
        if (root[i] * np.conj(root[i - 1])).real < 0:
            root[i] = -root[i]
    pref = np.sqrt(lam) / root
    q = sqrt_q**2
    out = []
    for sign in (1, -1):
        f = pref * np.exp(sign * 1j * action / hbar)
        df = f * (-dq / (4 * q) + sign * 1j * sqrt_q / hbar)
        out.append((f, df))
    return out


def lg_compare(qd, lam, z0, samples, epsilons, initial=(1.0, 0.5j), exact=None, steps_per_radian=500,
               stokes_tol=1e-8, fit="largest"):
    """Liouville-Green error e(eps) = max |v - v_LG| on the sample points.

    For each eps the ODE v'' = -phi' v / (lam eps)**2 is solved from the first
    sample with v = initial[0] and v' = initial[1] sqrt(phi') / (lam eps) (so
    the LG constants do not depend on eps), by RK4 or, if given, from the
    fundamental pair returned by ``exact(z, hbar)``. C1, C2 are fitted by
    collocation at the first sample, either once at the largest eps
    (``fit="largest"``; smaller eps then start from the LG data of those
    constants) or afresh for every eps from the same initial data
    (``fit="each"``). The LG form is compared on the remaining samples.
    Samples must lie on a Sigma+ arc from ``z0``; samples that drift off it
    (Im S != 0) are replaced by points of the traced arc.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    z0 = complex(z0)
    branch = np.sqrt(complex(qd(samples[0])))
    base = ode_solve(qd, lam, samples, 1.0, 0.0, h_max=1e-2, sqrt_branch=branch)
    stokes_scale = max(1.0, float(np.abs(base.action).max()))
    if np.abs(base.action.imag).max() > stokes_tol * stokes_scale:
        log.warning("samples leave the Sigma+ arc; resampling along the traced arc")
        r = np.abs(samples - z0)
        samples = sigma_plus_path(qd, z0, 1, float(r.min()), float(r.max()), samples.size)
        branch = np.sqrt(complex(qd(samples[0])))
        base = ode_solve(qd, lam, samples, 1.0, 0.0, h_max=1e-2, sqrt_branch=branch)
    dq = qd.derivative(samples)
    sq_max = float(np.abs(base.sqrt_q).max())
    if fit not in ("largest", "each"):
        raise ValueError("fit must be 'largest' or 'each'")
    errors, coeffs = [], []
    fixed = None
    for eps in sorted(epsilons, reverse=True) if fit == "largest" else epsilons:
        hbar = lam * eps
        v0 = complex(initial[0])
        dv0 = complex(initial[1]) * base.sqrt_q[0] / hbar
        (f1, df1), (f2, df2) = _lg_basis(lam, hbar, base.sqrt_q.copy(), dq, base.action)
        if fixed is None or fit == "each":
            mat = np.array([[f1[0], f2[0]], [df1[0], df2[0]]])
            fixed = np.linalg.solve(mat, [v0, dv0])
        else:
            # same LG constants, so start the ODE from the LG data they imply
            v0 = fixed[0] * f1[0] + fixed[1] * f2[0]
            dv0 = fixed[0] * df1[0] + fixed[1] * df2[0]
        c1, c2 = fixed
        v_lg = c1 * f1 + c2 * f2
        if exact is None:
            h = min(1e-2, hbar / (steps_per_radian * sq_max))
            v_num = ode_solve(qd, hbar, samples, v0, dv0, h_max=h, sqrt_branch=branch).v
        else:
            (g1, dg1), (g2, dg2) = exact(samples, hbar)
            a1, a2 = np.linalg.solve(np.array([[g1[0], g2[0]], [dg1[0], dg2[0]]]), [v0, dv0])
            v_num = a1 * g1 + a2 * g2
        errors.append(float(np.abs(v_num[1:] - v_lg[1:]).max()))
        coeffs.append((complex(c1), complex(c2)))
    eps_out = sorted(epsilons, reverse=True) if fit == "largest" else list(epsilons)
    return LGTable(np.asarray(eps_out, dtype=float), np.array(errors), coeffs)
