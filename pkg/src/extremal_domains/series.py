"""Truncated power series about a point.

``Series(c, at)`` represents ``sum_k c[k] (z - at)**k`` known up to order
``len(c) - 1``; coefficients beyond the order are unknown, not zero, so
binary operations keep the smaller order::

    >>> f = Series([0, 1, 0.5])          # z + z**2/2 about 0
    >>> (f * f).coeffs
    array([0.+0.j, 0.+0.j, 1.+0.j])

Composition ``f(g)`` expands ``f`` about ``g``'s constant term, so ``f.at``
must equal ``g(at)``.
"""

import numpy as np


class Series:
    __slots__ = ("coeffs", "at")

    def __init__(self, coeffs, at=0j):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).copy()
        if c.size == 0:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs = c
        self.at = complex(at)

    # -- constructors -------------------------------------------------------

    @classmethod
    def variable(cls, at=0j, order=8):
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = at
        if order >= 1:
            c[1] = 1.0
        return cls(c, at)

    @classmethod
    def constant(cls, value, at=0j, order=8):
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c, at)

    @classmethod
    def from_function(cls, f, at, radius, order=16, n=None):
        """Taylor coefficients of an analytic callable by Cauchy's formula.

        ``radius`` must be smaller than the distance from ``at`` to the
        nearest singularity of ``f``; the trapezoid rule on the circle is
        then geometrically convergent in ``n``.
        """
        n = n or max(4 * (order + 1), 64)
        theta = 2 * np.pi * np.arange(n) / n
        w = np.asarray(f(at + radius * np.exp(1j * theta)), dtype=np.complex128)
        c = np.fft.fft(w)[: order + 1] / n
        return cls(c / radius ** np.arange(order + 1), at)

    # -- basic protocol -----------------------------------------------------

    @property
    def order(self):
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        return f"Series({np.array2string(self.coeffs, precision=6)}, at={self.at})"

    def truncate(self, order):
        return Series(self.coeffs[: order + 1], self.at)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128) - self.at
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc if acc.ndim else complex(acc)

    def _coerce(self, other):
        if isinstance(other, Series):
            if abs(other.at - self.at) > 1e-14 * max(1.0, abs(self.at)):
                raise ValueError("series are expanded about different points")
            n = min(self.coeffs.size, other.coeffs.size)
            return self.coeffs[:n], other.coeffs[:n]
        c = np.zeros_like(self.coeffs)
        c[0] = other
        return self.coeffs, c

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return Series(-self.coeffs, self.at)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Series(a + b, self.at)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Series(a - b, self.at)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series(self.coeffs * other, self.at)
        a, b = self._coerce(other)
        return Series(np.convolve(a, b)[: a.size], self.at)

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        r = np.zeros_like(a)
        r[0] = 1.0 / a[0]
        for n in range(1, a.size):
            r[n] = -np.dot(a[1 : n + 1], r[n - 1 :: -1][:n]) / a[0]
        return Series(r, self.at)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return Series(self.coeffs / other, self.at)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not float(n).is_integer():
            raise ValueError("only integer powers; use sqrt/log/exp for others")
        n = int(n)
        if n < 0:
            return self.reciprocal() ** (-n)
        out = Series.constant(1.0, self.at, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus -----------------------------------------------------------

    def deriv(self, times=1):
        c = self.coeffs
        for _ in range(times):
            if c.size == 1:
                c = np.zeros(1, dtype=np.complex128)
                continue
            c = c[1:] * np.arange(1, c.size)
        return Series(c, self.at)

    def integ(self, constant=0.0):
        c = np.empty(self.coeffs.size + 1, dtype=np.complex128)
        c[0] = constant
        c[1:] = self.coeffs / np.arange(1, self.coeffs.size + 1)
        return Series(c, self.at)

    def log(self):
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ValueError("log of a series vanishing at its center")
        if self.order == 0:
            return Series([np.log(c0)], self.at)
        return (self.deriv() / self).integ(np.log(c0))

    def exp(self):
        a = self.coeffs
        e = np.zeros_like(a)
        e[0] = np.exp(a[0])
        k = np.arange(a.size)
        for n in range(1, a.size):
            e[n] = np.dot(k[1 : n + 1] * a[1 : n + 1], e[n - 1 :: -1][:n]) / n
        return Series(e, self.at)

    def sqrt(self, branch=None):
        """Square root with constant term nearest to ``branch`` (if given)."""
        a = self.coeffs
        if a[0] == 0:
            raise ValueError("sqrt of a series vanishing at its center is not a power series")
        s = np.zeros_like(a)
        s0 = np.sqrt(a[0])
        if branch is not None and (s0 * np.conj(branch)).real < 0:
            s0 = -s0
        s[0] = s0
        for n in range(1, a.size):
            s[n] = (a[n] - np.dot(s[1:n], s[n - 1 : 0 : -1])) / (2 * s0)
        return Series(s, self.at)

    # -- composition --------------------------------------------------------

    def compose(self, inner):
        """``self(inner(z))``; requires ``inner(inner.at) == self.at``."""
        w0 = inner.coeffs[0]
        if abs(w0 - self.at) > 1e-10 * max(1.0, abs(self.at)):
            raise ValueError("inner series must map its center onto the outer center")
        n = min(self.coeffs.size, inner.coeffs.size)
        h = Series(inner.coeffs[:n].copy(), inner.at)
        h.coeffs[0] = 0.0
        out = Series.constant(self.coeffs[n - 1], inner.at, n - 1)
        for c in self.coeffs[: n - 1][::-1]:
            out = out * h + c
        return out

    def revert(self):
        """Inverse function as a series about ``self(at)``."""
        a = self.coeffs
        if a.size < 2 or abs(a[1]) < 1e-14 * max(1.0, np.abs(a).max()):
            raise ValueError("series reversion needs a nonvanishing first derivative")
        order = self.order
        w0 = a[0]
        g = Series.variable(w0, order) - w0
        g = g / a[1] + self.at
        # the padded top coefficient only touches orders above the truncation
        df = Series(np.append(self.deriv().coeffs, 0.0), self.at)
        ident = Series.variable(w0, order)
        steps = int(np.ceil(np.log2(order + 1))) + 2
        for _ in range(steps):
            resid = self.compose(g) - ident
            slope = df.compose(g)
            g = g - resid / slope
        return g

    def mobius(self, a, b, c, d):
        """(a f + b) / (c f + d)."""
        return (self * a + b) / (self * c + d)


def schwarzian(f):
    """Schwarzian derivative (log f')'' - ((log f')')**2 / 2 as a series.

    Three orders are lost to differentiation.
    """
    d1 = f.deriv()
    if abs(d1.coeffs[0]) < 1e-300:
        raise ZeroDivisionError("Schwarzian is singular where f' vanishes")
    u = f.deriv(2) / d1
    return u.deriv() - u * u * 0.5


def schwarzian_at(f, z, radius=None, order=8):
    """Pointwise Schwarzian of an analytic callable via Cauchy-integral Taylor data."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.empty(z.shape, dtype=np.complex128)
    for i, z0 in enumerate(z.flat):
        r = radius if radius is not None else 0.1 * max(abs(z0), 1e-3)
        out.flat[i] = schwarzian(Series.from_function(f, z0, r, order)).coeffs[0]
    return out
