"""Analytic boundary curves and finitely connected planar domains.

A boundary component is a truncated Fourier series

    z(t) = sum_{j=j_min}^{j_max} a_j exp(i j t),   0 <= t < 2 pi,

traversed with the domain on its left: the outer curve counterclockwise,
every inner curve clockwise.

Curvature sign convention: ``kappa = -i (d2 zbar/ds2) / (dzbar/ds)``, which is
the negative of the usual signed curvature. A counterclockwise circle of
radius R has kappa = -1/R and a clockwise one has kappa = +1/R, so the total
curvature is -2 pi on the outer curve and +2 pi on each inner curve.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._kernels import count_crossings, winding_numbers

TWO_PI = 2.0 * np.pi
DEFAULT_J = 32


class InvalidCurveError(ValueError):
    pass


class InvalidDomainError(ValueError):
    pass


class OrientationError(InvalidDomainError):
    pass


def _trim(coeffs, j_min, rel=1e-15):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    big = np.abs(coeffs) > rel * max(np.abs(coeffs).max(), 1e-300)
    if not big.any():
        raise InvalidCurveError("curve has no nonzero coefficients")
    lo, hi = np.flatnonzero(big)[[0, -1]]
    return coeffs[lo:hi + 1].copy(), j_min + int(lo)


@dataclass(frozen=True, eq=False)
class AnalyticCurve:
    """Closed analytic curve as a truncated complex Fourier series.

    ``coeffs[0]`` multiplies ``exp(i j_min t)``. ``orientation`` is ``"outer"``
    (counterclockwise) or ``"inner"`` (clockwise); it is checked, not imposed.
    """

    coeffs: np.ndarray
    j_min: int
    orientation: str = "outer"
    n_samples: int | None = None

    def __post_init__(self):
        if self.orientation not in ("outer", "inner"):
            raise InvalidCurveError(f"orientation must be 'outer' or 'inner', got {self.orientation!r}")
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128))
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "j_min", int(self.j_min))
        if self.n_samples is None:
            object.__setattr__(self, "n_samples", max(16 * max(self.degree, 1), 256))
        self._validate()

    # -- construction ------------------------------------------------------

    @classmethod
    def circle(cls, center=0j, radius=1.0, orientation="outer", **kw):
        if radius <= 0:
            raise InvalidCurveError("radius must be positive")
        if orientation == "outer":
            return cls(np.array([center, radius], dtype=complex), 0, "outer", **kw)
        return cls(np.array([radius, center], dtype=complex), -1, "inner", **kw)

    @classmethod
    def ellipse(cls, a=1.0, b=0.6, center=0j, rotation=0.0, orientation="outer", **kw):
        """x = a cos t, y = b sin t, rotated by ``rotation`` and shifted."""
        rot = np.exp(1j * rotation)
        plus, minus = rot * (a + b) / 2, rot * (a - b) / 2
        if orientation == "outer":
            return cls(np.array([minus, center, plus]), -1, "outer", **kw)
        return cls(np.array([plus, center, minus]), -1, "inner", **kw)

    @classmethod
    def from_samples(cls, z, orientation="outer", **kw):
        """Fourier-fit equispaced samples z(2 pi k / M), k = 0..M-1."""
        z = np.asarray(z, dtype=np.complex128)
        m = z.size
        c = np.fft.fft(z) / m
        half = m // 2
        c = np.concatenate([c[-half + 1:], c[:half]]) if m % 2 == 0 else np.concatenate([c[-half:], c[:half + 1]])
        j_min = -(half - 1) if m % 2 == 0 else -half
        coeffs, j_min = _trim(c, j_min, rel=1e-14)
        return cls(coeffs, j_min, orientation, **kw)

    # -- basic evaluation --------------------------------------------------

    @property
    def j_max(self):
        return self.j_min + self.coeffs.size - 1

    @property
    def degree(self):
        return max(abs(self.j_min), abs(self.j_max))

    @property
    def modes(self):
        return np.arange(self.j_min, self.j_max + 1)

    def evaluate(self, t, derivative=0):
        t = np.asarray(t, dtype=float)
        j = self.modes
        w = self.coeffs * (1j * j) ** derivative
        return np.exp(1j * np.multiply.outer(t, j)) @ w

    def __call__(self, t):
        return self.evaluate(t)

    def signed_distance(self, z):
        """Distance from z to the curve, positive to its left.

        Nearest sample, then Newton on the parameter.
        """
        z = complex(z)
        t = TWO_PI * np.argmin(np.abs(self.points - z)) / self.points.size
        for _ in range(20):
            d = self.evaluate(t) - z
            d1, d2 = self.evaluate(t, 1), self.evaluate(t, 2)
            dg = abs(d1) ** 2 + (np.conj(d) * d2).real
            step = (np.conj(d) * d1).real / dg if dg > 0 else 0.0
            t -= step
            if abs(step) < 1e-15:
                break
        tau = self.evaluate(t, 1)
        return float((np.conj(1j * tau / abs(tau)) * (z - self.evaluate(t))).real)

    @cached_property
    def _grid(self):
        m = self.n_samples
        t = TWO_PI * np.arange(m) / m
        e = np.exp(1j * np.outer(t, self.modes))
        j = 1j * self.modes
        return t, e @ self.coeffs, e @ (self.coeffs * j), e @ (self.coeffs * j * j)

    @property
    def t(self):
        return self._grid[0]

    @property
    def points(self):
        return self._grid[1]

    @property
    def velocity(self):
        return self._grid[2]

    @property
    def acceleration(self):
        return self._grid[3]

    @property
    def speed(self):
        return np.abs(self.velocity)

    @property
    def length(self):
        return float(self.speed.mean() * TWO_PI)

    @property
    def signed_area(self):
        """(1/2i) oint zbar dz along the parametrization; exact for the series."""
        return float(np.pi * np.sum(self.modes * np.abs(self.coeffs) ** 2))

    @property
    def diameter(self):
        p = self.points
        return float(np.ptp(p.real) + np.ptp(p.imag)) or 1.0

    def integrate(self, values):
        """Spectrally accurate integral of sampled values against dt."""
        return np.mean(values, axis=-1) * TWO_PI

    # -- derived curves ----------------------------------------------------

    def shifted(self, dt):
        """Same curve with t -> t + dt."""
        return AnalyticCurve(self.coeffs * np.exp(1j * self.modes * dt), self.j_min, self.orientation, self.n_samples)

    def padded(self, degree):
        """Same curve with zero coefficients up to |j| = degree."""
        if degree < self.degree:
            raise ValueError("padding cannot lower the degree")
        c = np.zeros(2 * degree + 1, dtype=np.complex128)
        c[self.j_min + degree:self.j_max + degree + 1] = self.coeffs
        return AnalyticCurve(c, -degree, self.orientation, 16 * degree)

    def reversed(self, orientation=None):
        """t -> -t, optionally relabelling the orientation."""
        orientation = orientation or ("inner" if self.orientation == "outer" else "outer")
        return AnalyticCurve(self.coeffs[::-1].copy(), -self.j_max, orientation, self.n_samples)

    def affine(self, a, b=0j):
        """Image under z -> a z + b."""
        c = self.coeffs * a
        c0 = -self.j_min
        if 0 <= c0 < c.size:
            c[c0] += b
            return AnalyticCurve(c, self.j_min, self.orientation, self.n_samples)
        lo, hi = min(self.j_min, 0), max(self.j_max, 0)
        full = np.zeros(hi - lo + 1, dtype=np.complex128)
        full[self.j_min - lo:self.j_max - lo + 1] = c
        full[-lo] += b
        return AnalyticCurve(full, lo, self.orientation, self.n_samples)

    # -- validation --------------------------------------------------------

    def _validate(self):
        if not np.all(np.isfinite(self.coeffs)):
            raise InvalidCurveError("non-finite Fourier coefficient")
        speed = self.speed
        scale = np.abs(self.coeffs).sum()
        if speed.min() <= 1e-10 * scale:
            raise InvalidCurveError("curve is not immersed: |z'(t)| vanishes")
        turns = tangent_winding(self)
        want = 1 if self.orientation == "outer" else -1
        if turns != want:
            raise OrientationError(
                f"tangent winds {turns:+d} times; an {self.orientation} curve must wind {want:+d}"
            )
        diam = self.diameter
        if count_crossings(self.points, tol=(1e-9 * diam * diam) ** 2):
            raise InvalidCurveError("curve is not simple")


def tangent_winding(curve):
    v = curve.velocity
    dphi = np.angle(np.roll(v, -1) / v)
    return int(np.rint(dphi.sum() / TWO_PI))


# ------------------------------------------------------------------ domains


@dataclass(frozen=True, eq=False)
class PlanarDomain:
    """Bounded domain with one outer and n-1 inner analytic boundary curves.

    ``hole_points`` holds one point strictly inside each hole, in the order
    of ``inners``; missing entries default to the hole's area centroid.
    """

    outer: AnalyticCurve
    inners: tuple = ()
    hole_points: tuple = ()
    exterior_point: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "inners", tuple(self.inners))
        if self.outer.orientation != "outer":
            raise OrientationError("the outer curve must be counterclockwise ('outer')")
        for c in self.inners:
            if c.orientation != "inner":
                raise OrientationError("inner curves must be clockwise ('inner')")
        pts = [complex(p) for p in self.hole_points]
        if len(pts) > len(self.inners):
            raise InvalidDomainError("more hole points than holes")
        for c in self.inners[len(pts):]:
            pts.append(hole_centroid(c))
        object.__setattr__(self, "hole_points", tuple(pts))
        self._validate()

    @classmethod
    def disk(cls, radius=1.0, center=0j):
        return cls(AnalyticCurve.circle(center, radius))

    @classmethod
    def annulus(cls, r_outer=1.0, r_inner=0.5, center=0j, inner_center=None):
        ic = center if inner_center is None else inner_center
        return cls(
            AnalyticCurve.circle(center, r_outer),
            (AnalyticCurve.circle(ic, r_inner, "inner"),),
            (ic,),
        )

    @classmethod
    def ellipse(cls, a=1.0, b=0.6, center=0j, rotation=0.0):
        return cls(AnalyticCurve.ellipse(a, b, center, rotation))

    @property
    def curves(self):
        return (self.outer,) + self.inners

    @property
    def connectivity(self):
        return 1 + len(self.inners)

    @property
    def diameter(self):
        return self.outer.diameter

    @cached_property
    def centroid(self):
        """Area centroid, via int z dA = (1/2i) oint |z|^2 dz."""
        total = 0j
        for c in self.curves:
            total += c.integrate(np.abs(c.points) ** 2 * c.velocity) / 2j
        return complex(total / area_perimeter(self)[0])

    def contains(self, points):
        """Point-in-domain test against the sampled boundary polygons."""
        p = np.asarray(points, dtype=np.complex128)
        inside = winding_numbers(p.ravel(), self.outer.points) != 0
        for c in self.inners:
            inside &= winding_numbers(p.ravel(), c.points) == 0
        return inside.reshape(p.shape)

    def signed_distance(self, z):
        """Distance from z to the analytic boundary, positive inside."""
        return min((c.signed_distance(z) for c in self.curves), key=abs)

    def affine(self, a, b=0j):
        """Image under z -> a z + b (a != 0)."""
        return PlanarDomain(
            self.outer.affine(a, b),
            tuple(c.affine(a, b) for c in self.inners),
            tuple(a * p + b for p in self.hole_points),
            None if self.exterior_point is None else a * self.exterior_point + b,
        )

    def with_samples(self, m):
        def resample(c):
            return AnalyticCurve(c.coeffs, c.j_min, c.orientation, m)

        return PlanarDomain(resample(self.outer), tuple(resample(c) for c in self.inners), self.hole_points)

    def _validate(self):
        outer = self.outer.points
        for k, c in enumerate(self.inners):
            if count_crossings(outer, c.points):
                raise InvalidDomainError(f"inner curve {k} crosses the outer curve")
            if np.any(winding_numbers(c.points, outer) != 1):
                raise InvalidDomainError(f"inner curve {k} is not inside the outer curve")
            for m, d in enumerate(self.inners[:k]):
                if count_crossings(c.points, d.points):
                    raise InvalidDomainError(f"inner curves {m} and {k} cross")
                if np.any(winding_numbers(c.points[:1], d.points) != 0) or np.any(
                    winding_numbers(d.points[:1], c.points) != 0
                ):
                    raise InvalidDomainError(f"inner curves {m} and {k} are nested")
            a = self.hole_points[k]
            if winding_numbers([a], c.points)[0] != -1:
                raise InvalidDomainError(f"hole point {a} is not inside hole {k}")
        if self.exterior_point is not None and winding_numbers([self.exterior_point], outer)[0] != 0:
            raise InvalidDomainError("exterior point lies inside the outer curve")
        area, _ = area_perimeter(self)
        if area <= 0:
            raise OrientationError("nonpositive area: check curve orientations")


def hole_centroid(curve):
    """Area centroid of the region enclosed by ``curve``."""
    sign = 1.0 if curve.orientation == "outer" else -1.0
    area = sign * curve.signed_area
    moment = sign * curve.integrate(np.abs(curve.points) ** 2 * curve.velocity) / 2j
    return complex(moment / area)


# --------------------------------------------------------------- operations


@dataclass(frozen=True)
class ArcLengthTable:
    t: np.ndarray
    s: np.ndarray
    length: float

    def s_of(self, t):
        """Arc length at arbitrary parameters, periodic extension included."""
        t = np.asarray(t, dtype=float)
        turns = np.floor(t / TWO_PI)
        tt = np.concatenate([self.t, [TWO_PI]])
        ss = np.concatenate([self.s, [self.length]])
        return np.interp(t - turns * TWO_PI, tt, ss) + turns * self.length


def arc_length_table(curve, m=None):
    """Cumulative arc length s(t) on an equispaced grid of ``m`` points."""
    m = int(m or curve.n_samples)
    if m < 8 * curve.degree:
        raise ValueError(f"need at least 8J = {8 * curve.degree} samples, got {m}")
    t = TWO_PI * np.arange(m) / m
    speed = np.abs(curve.evaluate(t, 1))
    if speed.min() <= 1e-10 * np.abs(curve.coeffs).sum():
        raise InvalidCurveError("curve is not immersed")
    c = np.fft.fft(speed) / m
    k = np.fft.fftfreq(m, 1.0 / m)
    if m % 2 == 0:
        c[m // 2] = 0.0
    d = np.zeros_like(c)
    nz = k != 0
    d[nz] = c[nz] / (1j * k[nz])
    s = c[0].real * t + (np.fft.ifft(d) * m).real - d.sum().real
    s[0] = 0.0
    return ArcLengthTable(t, s, float(c[0].real * TWO_PI))


def area_perimeter(domain):
    """(area, perimeter); area = (1/2i) oint zbar dz over the oriented boundary."""
    area = sum(c.signed_area for c in domain.curves)
    perimeter = sum(c.length for c in domain.curves)
    return float(area), float(perimeter)


def tangent_and_curvature(curve, t=None):
    """Unit tangent and curvature ``kappa = -i (d2 zbar/ds2)/(dzbar/ds)``.

    Note the sign: kappa = -1/R on a counterclockwise circle.
    """
    if t is None:
        d1, d2 = curve.velocity, curve.acceleration
    else:
        d1, d2 = curve.evaluate(t, 1), curve.evaluate(t, 2)
    speed = np.abs(d1)
    dspeed = np.real(np.conj(d1) * d2) / speed
    dzbar_ds = np.conj(d1) / speed
    # d/ds = (1/|z'|) d/dt
    d2zbar_ds2 = (np.conj(d2) / speed - np.conj(d1) * dspeed / speed**2) / speed
    kappa = -1j * d2zbar_ds2 / dzbar_ds
    scale = np.maximum(np.abs(kappa), 1.0)
    if np.max(np.abs(kappa.imag) / scale) > 1e-8:
        raise ArithmeticError("curvature came out complex; derivative data inconsistent")
    return d1 / speed, kappa.real


def total_curvature(curve):
    _, kappa = tangent_and_curvature(curve)
    return float(curve.integrate(kappa * curve.speed))


def winding_check(domain, tol=1e-8):
    """Total curvature per component; -2 pi (outer) and +2 pi (inner) expected."""
    values = [total_curvature(c) for c in domain.curves]
    for k, v in enumerate(values):
        want = -TWO_PI if k == 0 else TWO_PI
        if abs(v - want) > tol:
            raise OrientationError(f"component {k}: total curvature {v:.12g}, expected {want:.12g}")
    return values


def map_domain(domain, f, m=1024):
    """Image of a domain under an analytic map injective near its closure.

    Boundary images are refit as Fourier series; orientations and the roles of
    outer and inner curves are reassigned as needed (z -> 1/z swaps them).
    Hole points are reset to the centroids of the new holes.
    """
    t = TWO_PI * np.arange(m) / m
    images = [np.asarray(f(c.evaluate(t)), dtype=np.complex128) for c in domain.curves]
    polys = [z for z in images]
    outer_idx = None
    for i, z in enumerate(polys):
        others = [p for j, p in enumerate(polys) if j != i]
        if all(np.all(winding_numbers(p[:4], z) != 0) for p in others):
            outer_idx = i
            break
    if outer_idx is None:
        raise InvalidDomainError("no image curve encloses the others; map is not admissible")
    curves = []
    for i, z in enumerate(images):
        role = "outer" if i == outer_idx else "inner"
        v = np.gradient(np.concatenate([z[-2:], z, z[:2]]))[2:-2]
        turns = int(np.rint(np.angle(np.roll(v, -1) / v).sum() / TWO_PI))
        want = 1 if role == "outer" else -1
        if turns != want:
            z = np.concatenate([z[:1], z[:0:-1]])
        curves.append(AnalyticCurve.from_samples(z, role))
    outer = curves[outer_idx]
    inners = tuple(c for i, c in enumerate(curves) if i != outer_idx)
    return PlanarDomain(outer, inners)
