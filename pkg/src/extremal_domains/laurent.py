"""Functions that are a polynomial plus finitely many principal parts.

    f(z) = sum_j poly[j] (z - center)**j + sum_k sum_{j>=1} c_kj (z - a_k)**(-j)

This is the closed class produced by the approximation basis, and it is
closed under differentiation, which is all the quadratic-differential code
needs.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels


def _as_complex_array(x):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.complex128)))


@dataclass(frozen=True)
class Laurent:
    center: complex = 0j
    poly: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.complex128))
    pole_at: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.complex128))
    pole_coef: np.ndarray = field(default_factory=lambda: np.zeros((0, 1), dtype=np.complex128))

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        poly = _as_complex_array(self.poly)
        if poly.size == 0:
            poly = np.zeros(1, dtype=np.complex128)
        object.__setattr__(self, "poly", poly)
        pole_at = _as_complex_array(self.pole_at) if np.size(self.pole_at) else np.zeros(0, np.complex128)
        coef = np.asarray(self.pole_coef, dtype=np.complex128)
        if coef.ndim == 1:
            coef = coef[None, :] if pole_at.size else np.zeros((0, max(1, coef.size)), np.complex128)
        if coef.shape[0] != pole_at.size:
            raise ValueError("one row of pole coefficients is needed per pole")
        if coef.shape[1] == 0:
            coef = np.zeros((pole_at.size, 1), dtype=np.complex128)
        object.__setattr__(self, "pole_at", pole_at)
        object.__setattr__(self, "pole_coef", np.ascontiguousarray(coef))

    @classmethod
    def polynomial(cls, coeffs, center=0j):
        return cls(center=center, poly=coeffs)

    @classmethod
    def from_poles(cls, poles, poly=(0,), center=0j):
        """``poles`` maps a pole location to coefficients of (z-a)^-1, (z-a)^-2, ..."""
        items = list(poles.items())
        width = max((len(c) for _, c in items), default=1)
        at = np.array([complex(a) for a, _ in items], dtype=np.complex128)
        coef = np.zeros((len(items), width), dtype=np.complex128)
        for k, (_, c) in enumerate(items):
            coef[k, : len(c)] = c
        return cls(center=center, poly=poly, pole_at=at, pole_coef=coef)

    @property
    def poles(self):
        return [complex(a) for a, row in zip(self.pole_at, self.pole_coef) if np.any(row != 0)]

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = _kernels.laurent_eval(z.ravel(), self.center, self.poly, self.pole_at, self.pole_coef)
        return out.reshape(z.shape) if z.ndim else complex(out[0])

    def deriv(self):
        n = self.poly.size
        poly = self.poly[1:] * np.arange(1, n) if n > 1 else np.zeros(1)
        m = self.pole_coef.shape[1]
        coef = np.zeros((self.pole_at.size, m + 1), dtype=np.complex128)
        # d/dz (z-a)^-j = -j (z-a)^-(j+1)
        coef[:, 1:] = -self.pole_coef * np.arange(1, m + 1)
        return Laurent(self.center, poly, self.pole_at, coef)

    def scaled(self, factor):
        return Laurent(self.center, self.poly * factor, self.pole_at, self.pole_coef * factor)

    def kernel_args(self):
        return self.center, self.poly, self.pole_at, self.pole_coef

    def to_json(self):
        def pairs(a):
            return [[float(c.real), float(c.imag)] for c in np.ravel(a)]

        return {
            "center": [self.center.real, self.center.imag],
            "poly": pairs(self.poly),
            "poles": [
                {"at": [complex(a).real, complex(a).imag], "coeffs": pairs(row)}
                for a, row in zip(self.pole_at, self.pole_coef)
            ],
        }

    @classmethod
    def from_json(cls, data):
        def cplx(p):
            return complex(p[0], p[1])

        center = cplx(data.get("center", [0.0, 0.0]))
        poly = [cplx(p) for p in data.get("poly", [[0.0, 0.0]])]
        poles = {cplx(p["at"]): [cplx(c) for c in p["coeffs"]] for p in data.get("poles", [])}
        return cls.from_poles(poles, poly=poly, center=center)
