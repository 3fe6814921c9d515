"""Area-mean versus boundary-mean tests and the vortex-flow identities.

Area integrals of analytic f are turned into boundary integrals with
Green's theorem, int_Omega f dA = (1/2i) oint zbar f(z) dz, so everything is
a periodic trapezoid rule on the analytic boundary parametrizations.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .geometry import area_perimeter, tangent_and_curvature


class PoleInDomainError(ValueError):
    pass


@dataclass(frozen=True)
class PowerFunction:
    """(z - at)**power, with a pole at ``at`` when ``power`` < 0."""

    at: complex
    power: int
    label: str = ""

    def __call__(self, z):
        return (np.asarray(z) - self.at) ** self.power

    @property
    def poles(self):
        return (self.at,) if self.power < 0 else ()


def quadrature_basis(domain, max_degree):
    center = domain.centroid
    out = [PowerFunction(center, j, f"(z-c)^{j}") for j in range(max_degree + 1)]
    for k, a in enumerate(domain.hole_points):
        out += [PowerFunction(a, -j, f"(z-a{k + 1})^-{j}") for j in range(1, max_degree + 1)]
    return out


def _check_poles(domain, poles):
    poles = list(poles)
    if poles and np.any(domain.contains(np.array(poles, dtype=complex))):
        raise PoleInDomainError("integrand has a pole inside the domain")


def area_integral(domain, f, poles=()):
    _check_poles(domain, getattr(f, "poles", poles))
    total = 0j
    for c in domain.curves:
        z = c.points
        total += c.integrate(np.conj(z) * f(z) * c.velocity) / 2j
    return complex(total)


def area_mean(domain, f, poles=()):
    """(1/A) int_Omega f dA for f analytic on the closed domain."""
    return area_integral(domain, f, poles) / area_perimeter(domain)[0]


def boundary_mean(domain, f):
    """(1/P) oint f ds over all boundary components."""
    total = 0j
    for c in domain.curves:
        total += c.integrate(f(c.points) * c.speed)
    return complex(total / area_perimeter(domain)[1])


@dataclass(frozen=True)
class QuadratureReport:
    labels: list
    area_means: np.ndarray
    boundary_means: np.ndarray

    @property
    def differences(self):
        return np.abs(self.area_means - self.boundary_means)

    @property
    def residual(self):
        return float(self.differences.max())

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["basis_label", "area_mean", "boundary_mean", "abs_difference"])
        for lab, a, b, d in zip(self.labels, self.area_means, self.boundary_means, self.differences):
            w.writerow([lab, _fmt(a), _fmt(b), repr(float(d))])
        return buf.getvalue()


def _fmt(c):
    c = complex(c)
    return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}j"


def quadrature_residual(domain, max_degree=8):
    """Compare area and boundary means over the power basis up to ``max_degree``."""
    basis = quadrature_basis(domain, max_degree)
    am = np.array([area_mean(domain, f) for f in basis])
    bm = np.array([boundary_mean(domain, f) for f in basis])
    return QuadratureReport([f.label for f in basis], am, bm)


@dataclass(frozen=True)
class FlowReport:
    boundary_speed_dev: float
    vorticity_flux_gap: float
    circulation: float
    circulation_gap: float
    speed_profile: list


def velocity(z, phi):
    """v = 2i (z - conj(phi(z))), the field with constant vorticity 4."""
    return 2j * (z - np.conj(phi(z)))


def flow_identities(domain, cert):
    """Boundary speed and circulation checks for the flow built from ``cert``.

    ``boundary_speed_dev`` is max ||v| - 2 lambda| on the boundary,
    ``vorticity_flux_gap`` is |circulation - 2 lambda P|, and
    ``circulation_gap`` is |circulation - 4A| (Green's theorem; holds for any
    analytic phi).
    """
    lam = cert.lambda_hat
    area, perim = area_perimeter(domain)
    speeds = []
    circulation = 0.0
    for c in domain.curves:
        tau, _ = tangent_and_curvature(c)
        v = velocity(c.points, cert.phi)
        speeds.append(np.abs(v))
        circulation += c.integrate(np.real(v * np.conj(tau)) * c.speed)
    dev = float(max(np.abs(s - 2 * lam).max() for s in speeds))
    return FlowReport(
        boundary_speed_dev=dev,
        vorticity_flux_gap=float(abs(circulation - 2 * lam * perim)),
        circulation=float(circulation),
        circulation_gap=float(abs(circulation - 4 * area)),
        speed_profile=speeds,
    )
