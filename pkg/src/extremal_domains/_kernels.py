"""Inner loops: polygon predicates, Laurent evaluation, path RK4.

Every kernel below is plain Python over numpy arrays; ``njit`` compiles it
when numba is enabled. Kernels with a vectorized numpy equivalent expose it
as ``*_numpy`` and the public dispatchers in this module pick one of the two.
"""

import numpy as np

from ._backend import HAS_NUMBA, njit, prange

_CHUNK = 1 << 20


# ---------------------------------------------------------------- polygons


@njit
def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


@njit
def _count_crossings_loop(ax, ay, bx, by, same, tol):
    na = ax.shape[0]
    nb = bx.shape[0]
    count = 0
    for i in range(na):
        i1 = (i + 1) % na
        p0x, p0y, p1x, p1y = ax[i], ay[i], ax[i1], ay[i1]
        ux, uy = p1x - p0x, p1y - p0y
        jstart = i + 2 if same else 0
        for j in range(jstart, nb):
            if same and i == 0 and j == nb - 1:
                continue
            j1 = (j + 1) % nb
            q0x, q0y, q1x, q1y = bx[j], by[j], bx[j1], by[j1]
            vx, vy = q1x - q0x, q1y - q0y
            d1 = _cross(ux, uy, q0x - p0x, q0y - p0y)
            d2 = _cross(ux, uy, q1x - p0x, q1y - p0y)
            if d1 * d2 > -tol:
                continue
            d3 = _cross(vx, vy, p0x - q0x, p0y - q0y)
            d4 = _cross(vx, vy, p1x - q0x, p1y - q0y)
            if d3 * d4 > -tol:
                continue
            count += 1
    return count


def _count_crossings_numpy(ax, ay, bx, by, same, tol):
    na, nb = ax.shape[0], bx.shape[0]
    a1x, a1y = np.roll(ax, -1), np.roll(ay, -1)
    b1x, b1y = np.roll(bx, -1), np.roll(by, -1)
    ux, uy = a1x - ax, a1y - ay
    vx, vy = b1x - bx, b1y - by
    rows = max(1, _CHUNK // max(nb, 1))
    count = 0
    jj = np.arange(nb)
    for start in range(0, na, rows):
        i = np.arange(start, min(na, start + rows))[:, None]
        d1 = ux[i] * (by - ay[i]) - uy[i] * (bx - ax[i])
        d2 = ux[i] * (b1y - ay[i]) - uy[i] * (b1x - ax[i])
        d3 = vx * (ay[i] - by) - vy * (ax[i] - bx)
        d4 = vx * (a1y[i] - by) - vy * (a1x[i] - bx)
        hit = (d1 * d2 <= -tol) & (d3 * d4 <= -tol)
        if same:
            hit &= jj >= i + 2
            hit &= ~((i == 0) & (jj == nb - 1))
        count += int(hit.sum())
    return count


def count_crossings(a, b=None, tol=0.0):
    """Number of proper crossings between edges of closed polygons ``a`` and ``b``.

    With ``b`` omitted, counts self-crossings of ``a`` (adjacent edges skipped).
    ``tol`` is compared against products of edge cross products, so it scales
    like length**4.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    same = b is None
    b = a if same else np.ascontiguousarray(b, dtype=np.complex128)
    args = (a.real.copy(), a.imag.copy(), b.real.copy(), b.imag.copy(), same, float(tol))
    if HAS_NUMBA:
        return int(_count_crossings_loop(*args))
    return _count_crossings_numpy(*args)


@njit(parallel=HAS_NUMBA)
def _winding_loop(px, py, vx, vy):
    n = px.shape[0]
    m = vx.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for k in prange(n):
        x, y = px[k], py[k]
        w = 0
        for i in range(m):
            i1 = (i + 1) % m
            x0, y0, x1, y1 = vx[i], vy[i], vx[i1], vy[i1]
            side = (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0)
            if y0 <= y:
                if y1 > y and side > 0:
                    w += 1
            elif y1 <= y and side < 0:
                w -= 1
        out[k] = w
    return out


def _winding_numpy(px, py, vx, vy):
    m = vx.shape[0]
    x1, y1 = np.roll(vx, -1), np.roll(vy, -1)
    out = np.zeros(px.shape[0], dtype=np.int64)
    cols = max(1, _CHUNK // max(m, 1))
    for start in range(0, px.shape[0], cols):
        x = px[start:start + cols, None]
        y = py[start:start + cols, None]
        side = (x1 - vx) * (y - vy) - (x - vx) * (y1 - vy)
        up = (vy <= y) & (y1 > y) & (side > 0)
        down = (vy > y) & (y1 <= y) & (side < 0)
        out[start:start + cols] = up.sum(axis=1) - down.sum(axis=1)
    return out


def winding_numbers(points, polygon):
    """Winding number of the closed polygon around each point."""
    p = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    v = np.ascontiguousarray(polygon, dtype=np.complex128)
    args = (p.real.copy(), p.imag.copy(), v.real.copy(), v.imag.copy())
    if HAS_NUMBA:
        return _winding_loop(*args)
    return _winding_numpy(*args)


# ---------------------------------------------------------------- Laurent


@njit
def laurent_eval_scalar(z, center, poly, pole_at, pole_coef):
    """sum_j poly[j] (z-center)^j + sum_k sum_j pole_coef[k, j] (z-pole_at[k])^-(j+1)."""
    w = z - center
    acc = 0j
    for j in range(poly.shape[0] - 1, -1, -1):
        acc = acc * w + poly[j]
    for k in range(pole_at.shape[0]):
        r = 1.0 / (z - pole_at[k])
        part = 0j
        for j in range(pole_coef.shape[1] - 1, -1, -1):
            part = (part + pole_coef[k, j]) * r
        acc += part
    return acc


@njit
def _laurent_eval_loop(zs, center, poly, pole_at, pole_coef):
    out = np.empty(zs.shape[0], dtype=np.complex128)
    for i in range(zs.shape[0]):
        out[i] = laurent_eval_scalar(zs[i], center, poly, pole_at, pole_coef)
    return out


def laurent_eval_numpy(zs, center, poly, pole_at, pole_coef):
    w = zs - center
    acc = np.zeros_like(zs)
    for c in poly[::-1]:
        acc = acc * w + c
    for k in range(pole_at.shape[0]):
        r = 1.0 / (zs - pole_at[k])
        part = np.zeros_like(zs)
        for c in pole_coef[k, ::-1]:
            part = (part + c) * r
        acc = acc + part
    return acc


def laurent_eval(zs, center, poly, pole_at, pole_coef):
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    if HAS_NUMBA:
        return _laurent_eval_loop(zs, complex(center), poly, pole_at, pole_coef)
    return laurent_eval_numpy(zs, complex(center), poly, pole_at, pole_coef)


# ---------------------------------------------------------------- path ODE


@njit
def _near_branch(r, ref):
    # pick +-r closest to ref
    if (r.real * ref.real + r.imag * ref.imag) < 0.0:
        return -r
    return r


@njit
def rk4_path(path, center, poly, pole_at, pole_coef, hbar, v0, dv0, h_max, sq0):
    """Integrate v'' = -q(z) v / hbar**2 along a polyline with classical RK4.

    The state also carries S = int sqrt(q) dz with the square-root branch
    continued from ``sq0``. Returns (v, dv, S, sqrt_q) at every path vertex.
    """
    n = path.shape[0]
    v_out = np.empty(n, dtype=np.complex128)
    dv_out = np.empty(n, dtype=np.complex128)
    s_out = np.empty(n, dtype=np.complex128)
    sq_out = np.empty(n, dtype=np.complex128)
    v, dv, s = v0, dv0, 0j
    inv = 1.0 / (hbar * hbar)
    sq = _near_branch(np.sqrt(laurent_eval_scalar(path[0], center, poly, pole_at, pole_coef) + 0j), sq0)
    v_out[0], dv_out[0], s_out[0], sq_out[0] = v, dv, s, sq
    for k in range(n - 1):
        z0 = path[k]
        seg = path[k + 1] - z0
        length = abs(seg)
        if length == 0.0:
            v_out[k + 1], dv_out[k + 1], s_out[k + 1], sq_out[k + 1] = v, dv, s, sq
            continue
        steps = int(np.ceil(length / h_max))
        dz = seg / steps
        for i in range(steps):
            za = z0 + dz * i
            zm = za + 0.5 * dz
            zb = za + dz
            qa = laurent_eval_scalar(za, center, poly, pole_at, pole_coef)
            qm = laurent_eval_scalar(zm, center, poly, pole_at, pole_coef)
            qb = laurent_eval_scalar(zb, center, poly, pole_at, pole_coef)
            sa = _near_branch(np.sqrt(qa + 0j), sq)
            sm = _near_branch(np.sqrt(qm + 0j), sa)
            sb = _near_branch(np.sqrt(qb + 0j), sm)
            k1v = dv
            k1d = -qa * inv * v
            k2v = dv + 0.5 * dz * k1d
            k2d = -qm * inv * (v + 0.5 * dz * k1v)
            k3v = dv + 0.5 * dz * k2d
            k3d = -qm * inv * (v + 0.5 * dz * k2v)
            k4v = dv + dz * k3d
            k4d = -qb * inv * (v + dz * k3v)
            v = v + dz * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
            dv = dv + dz * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
            s = s + dz * (sa + 4.0 * sm + sb) / 6.0
            sq = sb
        v_out[k + 1], dv_out[k + 1], s_out[k + 1], sq_out[k + 1] = v, dv, s, sq
    return v_out, dv_out, s_out, sq_out
