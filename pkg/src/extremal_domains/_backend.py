"""Kernel backend selection.

Hot loops are written once as plain Python over numpy arrays and compiled
with numba when available. Setting ``EXTREMAL_DOMAINS_NO_NUMBA=1`` in the
environment (before import) keeps the interpreted path, which is also what
runs when numba cannot be imported.
"""

import os

_DISABLED = os.environ.get("EXTREMAL_DOMAINS_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by EXTREMAL_DOMAINS_NO_NUMBA")
    # TBB in this image is too old for numba's preferred layer
    os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")
    import numba as _numba

    HAS_NUMBA = True
except ImportError:
    _numba = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if HAS_NUMBA:
        kwargs.setdefault("cache", True)
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


if HAS_NUMBA:
    prange = _numba.prange
else:
    prange = range


def backend_name():
    return "numba" if HAS_NUMBA else "numpy"


def set_threads(n):
    """Cap kernel parallelism; no-op on the numpy path."""
    if HAS_NUMBA and n:
        n = max(1, min(int(n), _numba.config.NUMBA_NUM_THREADS))
        _numba.set_num_threads(n)
