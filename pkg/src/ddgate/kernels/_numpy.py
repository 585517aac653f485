"""Pure-numpy reference implementations of the hot kernels.

Every function here has a twin of the same signature in ``_numba``; the two
must agree to rounding.  Positions and lengths are in units of the period
unless stated otherwise.
"""
import math

import numpy as np

TWO_PI = 2.0 * np.pi
# 2 pi split in three parts so that k * part is exact for |k| < 2**23 (Cody-Waite)
_TWO_PI_A = 6.283185303211212
_TWO_PI_B = 3.9683743166540886e-09
_TWO_PI_C = 2.068073192717642e-18
#: Below this |y| the Taylor series of y - sin y (and friends) is used.
SERIES_CUTOFF = 1.0
ARCTAN_CUTOFF = 0.3  # z - arctan z cancels more slowly than y - sin y
#: Below this reduced phase the repetition kernels switch to finite sums.
SUM_CUTOFF = 0.5


def y_minus_sin(y):
    """y - sin(y) without cancellation for small y."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < SERIES_CUTOFF
    y2 = y * y
    acc = np.zeros_like(y)
    for k in range(10, 0, -1):  # terms through y^21 / 21!
        acc = 1.0 / math.factorial(2 * k + 1) - y2 * acc
    series = y * y2 * acc
    return np.where(small, series, y - np.sin(y))


def z_minus_arctan(z):
    """z - arctan(z) without cancellation for small z."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < ARCTAN_CUTOFF
    z2 = z * z
    acc = np.zeros_like(z)
    for k in range(18, 0, -1):  # terms through z^37
        acc = 1.0 / (2 * k + 1) - z2 * acc
    series = z * z2 * acc
    return np.where(small, series, z - np.arctan(z))


def boundary_sum(x, positions, coeffs):
    """Sum_j c_j exp(i x p_j) for each x."""
    x = np.asarray(x, dtype=float)
    phases = np.exp(1j * np.multiply.outer(x, np.asarray(positions, dtype=float)))
    return phases @ np.asarray(coeffs, dtype=float)


def series_sum(x, coeffs):
    """-i * x * sum_n c_n x^n (Horner), the small-x filter expansion."""
    x = np.asarray(x, dtype=float)
    acc = np.zeros(x.shape, dtype=complex)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return -1j * x * acc


def im_functional(omega, starts, lengths, signs):
    """omega^2 int_0^T int_0^t1 f(t1) f(t2) sin(omega (t1 - t2)) dt2 dt1.

    ``starts``/``lengths`` are absolute interval data of the switching
    function, ``omega`` is an array.
    """
    omega = np.asarray(omega, dtype=float)[:, None]
    starts = np.asarray(starts, dtype=float)[None, :]
    lengths = np.asarray(lengths, dtype=float)[None, :]
    signs = np.asarray(signs, dtype=float)[None, :]
    y = omega * lengths
    diag = y_minus_sin(y).sum(axis=1)
    # E_k = int over interval k of exp(i omega t) dt, in its cancellation-free form
    e = signs * lengths * np.sinc(y / TWO_PI) * np.exp(1j * omega * (starts + 0.5 * lengths))
    before = np.cumsum(e, axis=1) - e
    cross = np.sum(e * before.conj(), axis=1).imag
    return diag + omega[:, 0] ** 2 * cross


def _reduce(x):
    k = np.round(x / TWO_PI)
    return ((x - k * _TWO_PI_A) - k * _TWO_PI_B) - k * _TWO_PI_C


def dirichlet(x, ms, eps):
    """|(1 - e^{i M x}) / (1 - e^{i x})|^2, shape (len(x), len(ms))."""
    y = _reduce(np.asarray(x, dtype=float))[:, None]
    m = np.asarray(ms, dtype=float)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(0.5 * m * y) / np.sin(0.5 * y)
    limit = m * m * (1.0 - (m * m - 1.0) * y * y / 12.0)
    return np.where(np.abs(y) < eps, limit, ratio * ratio)


def aleph_factor(x, ms):
    """(sin Mx - M sin x) / (1 - cos x), shape (len(x), len(ms)).

    Near x = 2 pi k the identical finite sum -2 sum_k (M - k) sin(k y) is used.
    """
    y = _reduce(np.asarray(x, dtype=float))
    ms = np.asarray(ms, dtype=np.int64)
    m = ms.astype(float)[None, :]
    yy = y[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (np.sin(m * yy) - m * np.sin(yy)) / (2.0 * np.sin(0.5 * yy) ** 2)
    kmax = int(ms.max()) if ms.size else 1
    k = np.arange(1, max(kmax, 2), dtype=float)[None, :]
    sk = np.sin(k * yy)
    a = np.concatenate([np.zeros((y.size, 1)), np.cumsum(sk, axis=1)], axis=1)
    b = np.concatenate([np.zeros((y.size, 1)), np.cumsum(k * sk, axis=1)], axis=1)
    idx = ms - 1
    finite = -2.0 * (m * a[:, idx] - b[:, idx])
    return np.where(np.abs(yy) < SUM_CUTOFF, finite, closed)


def _pairs(bounds, s1, s2):
    bounds = np.asarray(bounds, dtype=float)
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    a, b = bounds[:-1], bounds[1:]
    k, l = np.tril_indices(a.size, -1)
    weight = s1[k] * s2[l] + s2[k] * s1[l]
    corners = np.stack([b[k] - a[l], a[k] - a[l], b[k] - b[l], a[k] - b[l]])
    return b - a, 2.0 * s1 * s2, weight, corners


def pair_sum_sine(omegas, bounds, s1, s2):
    """int_0^t int_0^t1 [f1 f2 + f2 f1] sin(w (t1 - t2)) for each w in ``omegas``.

    Uses the reduced second antiderivative H(tau) = (w tau - sin w tau) / w^2.
    """
    w = np.asarray(omegas, dtype=float)[:, None]
    lengths, diag_w, weight, corners = _pairs(bounds, s1, s2)
    h = lambda tau: y_minus_sin(w * tau[None, :]) / (w * w)
    diag = h(lengths) @ diag_w
    rect = h(corners[0]) - h(corners[1]) - h(corners[2]) + h(corners[3])
    return diag + rect @ weight


def pair_sum_ohmic(eta, omega_c, bounds, s1, s2):
    """Same double integral with the Ohmic kernel int J(w) sin(w tau) dw.

    H(tau) = eta (omega_c tau - arctan(omega_c tau)).
    """
    lengths, diag_w, weight, corners = _pairs(bounds, s1, s2)
    h = lambda tau: eta * z_minus_arctan(omega_c * tau)
    rect = h(corners[0]) - h(corners[1]) - h(corners[2]) + h(corners[3])
    return float(h(lengths) @ diag_w + rect @ weight)
