"""numba-compiled versions of the kernels in ``_numpy`` (same signatures)."""
import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi
# 2 pi split in three parts so that k * part is exact for |k| < 2**23 (Cody-Waite)
_TWO_PI_A = 6.283185303211212
_TWO_PI_B = 3.9683743166540886e-09
_TWO_PI_C = 2.068073192717642e-18
SERIES_CUTOFF = 1.0
_INV_ODD_FACTORIAL = np.array([1.0 / math.factorial(2 * k + 1) for k in range(11)])
ARCTAN_CUTOFF = 0.3  # z - arctan z cancels more slowly than y - sin y
SUM_CUTOFF = 0.5


@njit(cache=True)
def _y_minus_sin(y):
    if abs(y) < SERIES_CUTOFF:
        y2 = y * y
        acc = 0.0
        for k in range(10, 0, -1):
            acc = _INV_ODD_FACTORIAL[k] - y2 * acc
        return y * y2 * acc
    return y - math.sin(y)


@njit(cache=True)
def _z_minus_arctan(z):
    if abs(z) < ARCTAN_CUTOFF:
        # alternating odd series through z^37; truncation below 1e-17 at the cutoff
        z2 = z * z
        acc = 0.0
        for k in range(18, 0, -1):
            acc = 1.0 / (2 * k + 1) - z2 * acc
        return z * z2 * acc
    return z - math.atan(z)


@njit(cache=True)
def _sinc_half(y):
    # sin(y/2) / (y/2)
    h = 0.5 * y
    if abs(h) < 1e-4:
        return 1.0 - h * h / 6.0
    return math.sin(h) / h


@njit(cache=True)
def y_minus_sin(y):
    out = np.empty(y.shape[0])
    for i in range(y.shape[0]):
        out[i] = _y_minus_sin(y[i])
    return out


@njit(cache=True)
def z_minus_arctan(z):
    out = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        out[i] = _z_minus_arctan(z[i])
    return out


@njit(cache=True)
def boundary_sum(x, positions, coeffs):
    out = np.empty(x.shape[0], dtype=np.complex128)
    for i in range(x.shape[0]):
        re = 0.0
        im = 0.0
        for j in range(positions.shape[0]):
            ph = x[i] * positions[j]
            re += coeffs[j] * math.cos(ph)
            im += coeffs[j] * math.sin(ph)
        out[i] = complex(re, im)
    return out


@njit(cache=True)
def series_sum(x, coeffs):
    out = np.empty(x.shape[0], dtype=np.complex128)
    for i in range(x.shape[0]):
        acc = 0.0 + 0.0j
        for n in range(coeffs.shape[0] - 1, -1, -1):
            acc = acc * x[i] + coeffs[n]
        out[i] = -1j * x[i] * acc
    return out


@njit(cache=True)
def im_functional(omega, starts, lengths, signs):
    n = omega.shape[0]
    k = lengths.shape[0]
    out = np.empty(n)
    for i in range(n):
        w = omega[i]
        diag = 0.0
        cre = 0.0
        cim = 0.0
        cross = 0.0
        for j in range(k):
            y = w * lengths[j]
            diag += _y_minus_sin(y)
            amp = signs[j] * lengths[j] * _sinc_half(y)
            ph = w * (starts[j] + 0.5 * lengths[j])
            ere = amp * math.cos(ph)
            eim = amp * math.sin(ph)
            # Im(E_j * conj(C)) with C the running sum of earlier intervals
            cross += eim * cre - ere * cim
            cre += ere
            cim += eim
        out[i] = diag + w * w * cross
    return out


@njit(cache=True)
def _reduce(x):
    k = float(round(x / TWO_PI))
    return ((x - k * _TWO_PI_A) - k * _TWO_PI_B) - k * _TWO_PI_C


@njit(cache=True)
def dirichlet(x, ms, eps):
    out = np.empty((x.shape[0], ms.shape[0]))
    for i in range(x.shape[0]):
        y = _reduce(x[i])
        s = math.sin(0.5 * y)
        for j in range(ms.shape[0]):
            m = float(ms[j])
            if abs(y) < eps:
                out[i, j] = m * m * (1.0 - (m * m - 1.0) * y * y / 12.0)
            else:
                r = math.sin(0.5 * m * y) / s
                out[i, j] = r * r
    return out


@njit(cache=True)
def aleph_factor(x, ms):
    out = np.empty((x.shape[0], ms.shape[0]))
    for i in range(x.shape[0]):
        y = _reduce(x[i])
        if abs(y) < SUM_CUTOFF:
            for j in range(ms.shape[0]):
                m = ms[j]
                acc = 0.0
                for k in range(1, m):
                    acc += (m - k) * math.sin(k * y)
                out[i, j] = -2.0 * acc
        else:
            den = 2.0 * math.sin(0.5 * y) ** 2
            sy = math.sin(y)
            for j in range(ms.shape[0]):
                m = float(ms[j])
                out[i, j] = (math.sin(m * y) - m * sy) / den
    return out


@njit(cache=True)
def pair_sum_sine(omegas, bounds, s1, s2):
    nint = bounds.shape[0] - 1
    out = np.empty(omegas.shape[0])
    for i in range(omegas.shape[0]):
        w = omegas[i]
        inv = 1.0 / (w * w)
        acc = 0.0
        for k in range(nint):
            ak = bounds[k]
            bk = bounds[k + 1]
            acc += 2.0 * s1[k] * s2[k] * _y_minus_sin(w * (bk - ak)) * inv
            for l in range(k):
                al = bounds[l]
                bl = bounds[l + 1]
                wt = s1[k] * s2[l] + s2[k] * s1[l]
                if wt != 0.0:
                    r = (_y_minus_sin(w * (bk - al)) - _y_minus_sin(w * (ak - al))
                         - _y_minus_sin(w * (bk - bl)) + _y_minus_sin(w * (ak - bl)))
                    acc += wt * r * inv
        out[i] = acc
    return out


@njit(cache=True)
def pair_sum_ohmic(eta, omega_c, bounds, s1, s2):
    nint = bounds.shape[0] - 1
    acc = 0.0
    for k in range(nint):
        ak = bounds[k]
        bk = bounds[k + 1]
        acc += 2.0 * s1[k] * s2[k] * _z_minus_arctan(omega_c * (bk - ak))
        for l in range(k):
            al = bounds[l]
            bl = bounds[l + 1]
            wt = s1[k] * s2[l] + s2[k] * s1[l]
            if wt != 0.0:
                acc += wt * (_z_minus_arctan(omega_c * (bk - al)) - _z_minus_arctan(omega_c * (ak - al))
                             - _z_minus_arctan(omega_c * (bk - bl)) + _z_minus_arctan(omega_c * (ak - bl)))
    return eta * acc
