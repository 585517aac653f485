"""Quadrature engines.

``integrate_omega`` does the semi-infinite frequency integrals through a
vectorized adaptive Gauss-Kronrod (7/15) scheme with panel splits at the
repetition resonances w = 2 pi k / Delta.  ``double_time_integral`` evaluates
the time-ordered double integral of two switching functions by summing closed
forms over interval pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate as _sp_integrate

from . import kernels
from .core import (Composite, CrossDensity, DiscreteModes, DomainError, Ohmic,
                   QuadratureError, Tabulated, UnsupportedVariantError,
                   ValidationError, SpectralDensity)
from .pulses import SwitchingFunction

__all__ = [
    "QuadratureSpec", "gauss_kronrod", "integrate_interval", "integrate_omega",
    "resonances", "dirichlet_factor", "SineKernel", "OhmicKernel", "ModeSumKernel",
    "CallableKernel", "double_time_integral", "merge_switching",
]

# QUADPACK qk15 abscissae / weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
# full 15-point node set, and the 7 Gauss weights scattered onto it
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:14:2] = _WG[:3][::-1]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for the frequency integrals.

    ``resonance_eps`` is the half-width, in units of w*Delta, of the window
    around 2 pi k in which removable singularities take their series value.
    """

    rtol: float = 1e-9
    atol: float = 1e-12
    cutoff_multiplier: float = 60.0
    limit: int = 4000
    resonance_eps: float = 1e-6

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0 and self.resonance_eps > 0):
            raise ValidationError("tolerances must be positive")
        if not self.cutoff_multiplier >= 10:
            raise ValidationError("cutoff_multiplier must be >= 10")
        if self.limit < 1:
            raise ValidationError("limit must be >= 1")


def gauss_kronrod(fun: Callable, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Apply the 7/15 pair on every panel [a_i, b_i] in one vectorized call.

    ``fun`` maps a 1-D array of abscissae to an array whose first axis
    matches.  Returns (K15 values, |K15 - G7|), shaped (panels, ...).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = (mid[:, None] + half[:, None] * NODES[None, :]).ravel()
    y = np.asarray(fun(x))
    y = y.reshape((a.size, 15) + y.shape[1:])
    extra = (None,) * (y.ndim - 2)
    hk = half[(slice(None),) + extra]
    kron = hk * np.tensordot(KRONROD_WEIGHTS, np.moveaxis(y, 1, 0), axes=1)
    gauss = hk * np.tensordot(GAUSS_WEIGHTS, np.moveaxis(y, 1, 0), axes=1)
    return kron, np.abs(kron - gauss)


def integrate_interval(fun: Callable, edges: Sequence[float], rtol: float = 1e-9,
                       atol: float = 1e-12, limit: int = 4000):
    """Globally adaptive integration of ``fun`` over consecutive ``edges``.

    The error criterion is applied per output component.  Returns
    ``(value, error)``.

    Raises
    ------
    QuadratureError
        When ``limit`` panels do not reach the tolerance.
    """
    edges = np.unique(np.asarray(edges, dtype=float))
    if edges.size < 2:
        return 0.0, 0.0
    a, b = edges[:-1], edges[1:]
    vals, errs = gauss_kronrod(fun, a, b)
    scale = float(np.max(np.abs(edges)))
    while True:
        total = vals.sum(axis=0)
        err = errs.sum(axis=0)
        tol = np.maximum(atol, rtol * np.abs(total))
        if np.all(err <= tol):
            return total, err
        if a.size >= limit:
            raise QuadratureError(f"no convergence within {limit} panels", total, err)
        score = errs / tol
        score = score.reshape(a.size, -1).max(axis=1)
        order = np.argsort(-score, kind="stable")
        remaining = score.sum() - np.cumsum(score[order])
        n_split = int(np.searchsorted(-remaining, -0.5, side="left")) + 1
        n_split = min(n_split, order.size, max(1, limit - a.size))
        split = np.zeros(a.size, dtype=bool)
        split[order[:n_split]] = True
        split &= (b - a) > 1e-13 * max(scale, 1e-300)
        if not np.any(split):
            raise QuadratureError("panels cannot be refined further", total, err)
        m = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], m])
        nb = np.concatenate([m, b[split]])
        nv, ne = gauss_kronrod(fun, na, nb)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])


def resonances(period: float, upper: float) -> np.ndarray:
    """Angular frequencies 2 pi k / period below ``upper`` (k >= 1)."""
    kmax = int(math.floor(upper * period / (2.0 * math.pi)))
    return 2.0 * math.pi * np.arange(1, kmax + 1) / period


def integrate_omega(kernel: Callable, density: SpectralDensity, spec: Optional[QuadratureSpec] = None,
                    breakpoints: Sequence[float] = ()):
    """int_0^inf J(w) k(w) dw.

    Continuous densities are integrated on [0, c * omega_c] (Ohmic) or over
    the tabulated grid, split at ``breakpoints``; discrete modes give the
    exact sum sum_j lambda_j^2 k(w_j).  ``kernel`` is vectorized and may
    return extra trailing axes.  Returns ``(value, error)``.
    """
    spec = spec or QuadratureSpec()
    if isinstance(density, Composite):
        value, error = 0.0, 0.0
        for coef, term in density.terms:
            v, e = integrate_omega(kernel, term, spec, breakpoints)
            value = value + coef * v
            error = error + abs(coef) * e
        return value, error
    if isinstance(density, DiscreteModes):
        w = np.asarray(density.frequencies)
        k = np.asarray(kernel(w))
        weights = density.weights.reshape((-1,) + (1,) * (k.ndim - 1))
        value = np.sum(weights * k, axis=0)
        return value, np.zeros_like(value)
    if not isinstance(density, (Ohmic, Tabulated, CrossDensity)):
        raise UnsupportedVariantError(f"cannot integrate against {density!r}")
    upper = density.upper_limit(spec.cutoff_multiplier)
    lower = density.omega[0] if isinstance(density, Tabulated) else 0.0
    points = [lower, upper, *[p for p in breakpoints if lower < p < upper]]
    if isinstance(density, Tabulated):
        points.extend(density.omega)

    def integrand(w):
        k = np.asarray(kernel(w))
        j = density(w).reshape((-1,) + (1,) * (k.ndim - 1))
        return j * k

    return integrate_interval(integrand, points, spec.rtol, spec.atol, spec.limit)


def dirichlet_factor(omega, period: float, m: int, eps: float = 1e-6):
    """|(1 - e^{i w Delta M}) / (1 - e^{i w Delta})|^2 with its limit M^2 at w Delta = 2 pi k."""
    if m < 1:
        raise DomainError("repetition count must be >= 1")
    omega = np.asarray(omega, dtype=float)
    out = kernels.dirichlet(omega.ravel() * period, [int(m)], eps)[:, 0].reshape(omega.shape)
    return float(out) if out.ndim == 0 else out


# --- time-domain double integrals ------------------------------------------------

@dataclass(frozen=True)
class SineKernel:
    """K(tau) = sin(w tau), optionally for several w at once."""

    omega: Tuple[float, ...]

    def __init__(self, omega):
        object.__setattr__(self, "omega", tuple(np.atleast_1d(np.asarray(omega, dtype=float))))


@dataclass(frozen=True)
class ModeSumKernel:
    """K(tau) = sum_j lambda_j^2 sin(w_j tau)."""

    modes: DiscreteModes


@dataclass(frozen=True)
class OhmicKernel:
    """K(tau) = int_0^inf eta w e^{-w/omega_c} sin(w tau) dw = 2 eta a tau / (a^2 + tau^2)^2, a = 1/omega_c."""

    eta: float
    omega_c: float


@dataclass(frozen=True)
class CallableKernel:
    """Arbitrary odd kernel K(tau); its double antiderivative is found by quadrature."""

    func: Callable[[float], float]

    def h2(self, tau: float) -> float:
        # H(tau) = int_0^tau (tau - s) K(s) ds
        if tau == 0.0:
            return 0.0
        return _sp_integrate.quad(lambda s: (tau - s) * self.func(s), 0.0, tau, epsabs=0.0, epsrel=1e-13, limit=200)[0]


def merge_switching(f1: SwitchingFunction, f2: SwitchingFunction):
    """Common refinement of two switching functions: (bounds, signs1, signs2)."""
    if not math.isclose(f1.duration, f2.duration, rel_tol=1e-12):
        raise ValidationError("switching functions have different durations")
    bounds = np.union1d(f1.boundaries, f2.boundaries)
    bounds = bounds[np.concatenate([[True], np.diff(bounds) > 1e-15 * f1.duration])]
    bounds[-1] = f1.duration
    mid = 0.5 * (bounds[:-1] + bounds[1:])
    return bounds, f1(mid), f2(mid)


def double_time_integral(f1: SwitchingFunction, f2: SwitchingFunction, kernel, t: float):
    """int_0^t dt1 int_0^t1 dt2 [f1(t1) f2(t2) + f2(t1) f1(t2)] K(t1 - t2).

    ``f1`` and ``f2`` describe one period each and are tiled to ``t``, which
    must be an integer multiple of the period.  Each constant-sign interval
    pair contributes a closed form in the reduced double antiderivative
    H(tau) (H(0) = H'(0) = 0, H'' = K).
    """
    period = f1.duration
    m = int(round(t / period))
    if m < 1 or not math.isclose(m * period, t, rel_tol=1e-9):
        raise DomainError("t must be a positive integer multiple of the period")
    g1 = f1.tile(m) if m > 1 else f1
    g2 = f2.tile(m) if m > 1 else f2
    return pair_integral(g1, g2, kernel)


def pair_integral(g1: SwitchingFunction, g2: SwitchingFunction, kernel):
    """Double integral of :func:`double_time_integral` for untiled inputs."""
    bounds, s1, s2 = merge_switching(g1, g2)
    if isinstance(kernel, SineKernel):
        out = kernels.pair_sum_sine(np.asarray(kernel.omega), bounds, s1, s2)
        return float(out[0]) if out.size == 1 else out
    if isinstance(kernel, ModeSumKernel):
        out = kernels.pair_sum_sine(np.asarray(kernel.modes.frequencies), bounds, s1, s2)
        return float(kernel.modes.weights @ out)
    if isinstance(kernel, OhmicKernel):
        return kernels.pair_sum_ohmic(kernel.eta, kernel.omega_c, bounds, s1, s2)
    if isinstance(kernel, CallableKernel):
        a, b = bounds[:-1], bounds[1:]
        total = sum(2.0 * s1[k] * s2[k] * kernel.h2(b[k] - a[k]) for k in range(a.size))
        for k in range(a.size):
            for l in range(k):
                wt = s1[k] * s2[l] + s2[k] * s1[l]
                if wt:
                    total += wt * (kernel.h2(b[k] - a[l]) - kernel.h2(a[k] - a[l])
                                   - kernel.h2(b[k] - b[l]) + kernel.h2(a[k] - b[l]))
        return float(total)
    raise UnsupportedVariantError(f"unknown kernel {kernel!r}")
