"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time.  Set ``DDGATE_BACKEND=numpy`` to
force the fallback; the default is ``numba`` when it can be imported.
"""
import os

import numpy as np

from . import _numpy

_requested = os.environ.get("DDGATE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"DDGATE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

_impl = _numpy
BACKEND = "numpy"
if _requested == "numba":
    try:
        from . import _numba
    except ImportError:  # pragma: no cover - numba missing
        pass
    else:
        _impl = _numba
        BACKEND = "numba"

__all__ = ["BACKEND", "boundary_sum", "series_sum", "im_functional", "dirichlet",
           "aleph_factor", "pair_sum_sine", "pair_sum_ohmic", "y_minus_sin", "z_minus_arctan"]


def _f64(a):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(a, dtype=float)))


def boundary_sum(x, positions, coeffs):
    return _impl.boundary_sum(_f64(x), _f64(positions), _f64(coeffs))


def series_sum(x, coeffs):
    return _impl.series_sum(_f64(x), np.ascontiguousarray(np.asarray(coeffs, dtype=complex)))


def im_functional(omega, starts, lengths, signs):
    return _impl.im_functional(_f64(omega), _f64(starts), _f64(lengths), _f64(signs))


def dirichlet(x, ms, eps):
    return _impl.dirichlet(_f64(x), np.ascontiguousarray(np.atleast_1d(ms), dtype=np.int64), float(eps))


def aleph_factor(x, ms):
    return _impl.aleph_factor(_f64(x), np.ascontiguousarray(np.atleast_1d(ms), dtype=np.int64))


def pair_sum_sine(omegas, bounds, s1, s2):
    return _impl.pair_sum_sine(_f64(omegas), _f64(bounds), _f64(s1), _f64(s2))


def pair_sum_ohmic(eta, omega_c, bounds, s1, s2):
    return float(_impl.pair_sum_ohmic(float(eta), float(omega_c), _f64(bounds), _f64(s1), _f64(s2)))


def y_minus_sin(y):
    return _impl.y_minus_sin(_f64(y))


def z_minus_arctan(z):
    return _impl.z_minus_arctan(_f64(z))
