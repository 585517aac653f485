"""Bath-induced conditional phase, decoherence and the exact two-qubit map.

Both qubits carry the same switching function f(t), repeated M times over
t = M Delta.  The conditional phase is

    Theta(t) = -2 int_0^t dt1 int_0^t1 dt2 f(t1) f(t2) int dw Jbar(w) sin(w (t1 - t2))

and is evaluated either through the per-period decomposition
int dw Jbar/w^2 [-2 M Im(w) + aleph_M(w)] (frequency path) or by direct
interval-pair summation in the time domain (oracle path).  The decay
exponent is

    Upsilon(t) = int dw J(w) coth(w / 2 w_T) / w^2 * D_M(w Delta) |f(w, Delta)|^2.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .core import (PAIR_WEIGHTS, PAIRS, PHASE_MATRIX, BathTopology, Composite,
                   CrossDensity, DiscreteModes, DomainError, Ohmic, SpectralDensity,
                   Tabulated, UnsupportedConfigurationError, as_density_matrix,
                   is_zero, kelvin_to_angular_frequency)
from .numerics import (ModeSumKernel, OhmicKernel, QuadratureSpec, integrate_omega,
                       pair_integral, resonances)
from .pulses import PulseSchedule, filter_f_omega, switching_filter

__all__ = [
    "PhaseDecoherenceRecord", "im_functional", "aleph_integrand", "re_functional",
    "theta_of_t", "theta_time_domain", "upsilon_of_t", "pairwise_records",
    "trajectory", "reduced_density_matrix",
]

Bath = Union[BathTopology, Ohmic, Tabulated, DiscreteModes, CrossDensity, Composite]


def _topology(bath: Bath) -> BathTopology:
    return bath if isinstance(bath, BathTopology) else BathTopology(bath)


def _ms(m) -> np.ndarray:
    ms = np.atleast_1d(np.asarray(m, dtype=np.int64))
    if np.any(ms < 1):
        raise DomainError("repetition count M must be >= 1")
    return ms


def _scalar(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


# --- per-frequency functionals ----------------------------------------------------

def im_functional(schedule: PulseSchedule, omega):
    """w^2 int_0^Delta dt1 int_0^t1 dt2 f(t1) f(t2) sin(w (t1 - t2)) for one period."""
    omega = np.asarray(omega, dtype=float)
    sw = schedule.switching_function()
    out = kernels.im_functional(omega.ravel(), sw.starts, sw.lengths, sw.signs)
    return _scalar(out.reshape(omega.shape))


def aleph_integrand(schedule: PulseSchedule, m, omega):
    """Cross-period correction aleph(w) to -2 M Im(w).

    aleph = (sin(M w Delta) - M sin(w Delta)) |f(w, Delta)|^2 / (1 - cos(w Delta)),
    the removable singularities at w Delta = 2 pi k having limit 0.  ``m`` may
    be an array, which adds a trailing axis.
    """
    omega = np.asarray(omega, dtype=float)
    ms = _ms(m)
    f2 = np.abs(np.atleast_1d(filter_f_omega(schedule, omega.ravel()))) ** 2
    out = kernels.aleph_factor(omega.ravel() * schedule.period, ms) * f2[:, None]
    shape = omega.shape if np.ndim(m) == 0 else omega.shape + (ms.size,)
    return _scalar(out.reshape(shape))


def re_functional(schedule: PulseSchedule, m, omega, eps: float = 1e-6):
    """Repeated-sequence filter D_M(w Delta) |f(w, Delta)|^2."""
    omega = np.asarray(omega, dtype=float)
    ms = _ms(m)
    f2 = np.abs(np.atleast_1d(filter_f_omega(schedule, omega.ravel()))) ** 2
    out = kernels.dirichlet(omega.ravel() * schedule.period, ms, eps) * f2[:, None]
    shape = omega.shape if np.ndim(m) == 0 else omega.shape + (ms.size,)
    return _scalar(out.reshape(shape))


# --- conditional phase -------------------------------------------------------------

def _theta_frequency(schedule: PulseSchedule, ms: Tuple[int, ...], density, spec, include_aleph):
    ms_arr = np.asarray(ms, dtype=np.int64)
    sw = schedule.switching_function()

    def kernel(w):
        im = kernels.im_functional(w, sw.starts, sw.lengths, sw.signs)
        out = -2.0 * im[:, None] * ms_arr[None, :].astype(float)
        if include_aleph:
            f2 = np.abs(filter_f_omega(schedule, w)) ** 2
            out = out + kernels.aleph_factor(w * schedule.period, ms_arr) * f2[:, None]
        return out / (w * w)[:, None]

    if include_aleph:
        upper = _upper(density, spec)
        value, _ = integrate_omega(kernel, density, spec, resonances(schedule.period, upper))
        return np.asarray(value, dtype=float)
    # the -2 M Im term is exactly linear in M: integrate once
    def rate(w):
        im = kernels.im_functional(w, sw.starts, sw.lengths, sw.signs)
        return im / (w * w)
    value, _ = integrate_omega(rate, density, spec)
    return -2.0 * float(value) * ms_arr.astype(float)


def _upper(density, spec) -> float:
    if isinstance(density, Composite):
        return max((_upper(d, spec) for _, d in density.terms), default=0.0)
    if isinstance(density, DiscreteModes):
        return 0.0
    return density.upper_limit(spec.cutoff_multiplier)


def theta_time_domain(schedule: PulseSchedule, m: int, density: SpectralDensity,
                      spec: Optional[QuadratureSpec] = None) -> float:
    """Conditional phase by direct interval-pair summation of the time-ordered integral.

    Ohmic densities use the closed-form kernel int J(w) sin(w tau) dw and
    discrete modes the mode sum; other spectra integrate the per-frequency
    pair sum over w.
    """
    spec = spec or QuadratureSpec()
    horizon = schedule.horizon(int(m))
    if isinstance(density, Composite):
        return float(sum(c * theta_time_domain(schedule, m, d, spec) for c, d in density.terms))
    if is_zero(density):
        return 0.0
    if isinstance(density, Ohmic):
        return -pair_integral(horizon, horizon, OhmicKernel(density.eta, density.omega_c))
    if isinstance(density, DiscreteModes):
        return -pair_integral(horizon, horizon, ModeSumKernel(density))
    bounds, s1, s2 = np.asarray(horizon.boundaries), np.asarray(horizon.signs), np.asarray(horizon.signs)
    value, _ = integrate_omega(lambda w: kernels.pair_sum_sine(w, bounds, s1, s2), density, spec,
                               resonances(horizon.duration, _upper(density, spec)))
    return -float(value)


@functools.lru_cache(maxsize=1024)
def _theta_cached(schedule, ms, density, spec, include_aleph, method):
    if is_zero(density):
        return np.zeros(len(ms))
    if method == "time" or not schedule.periodic:
        out = np.array([theta_time_domain(schedule, m, density, spec) for m in ms])
    else:
        out = _theta_frequency(schedule, ms, density, spec, include_aleph)
    out.setflags(write=False)
    return out


def theta_of_t(schedule: PulseSchedule, m, bath: Bath, spec: Optional[QuadratureSpec] = None,
               include_aleph: bool = True, method: str = "frequency"):
    """Conditional phase Theta(M Delta).

    Parameters
    ----------
    schedule : PulseSchedule
        Sequence applied simultaneously to both qubits.
    m : int or sequence of int
        Number of periods.
    bath : BathTopology or SpectralDensity
        A bare density is taken as the symmetric common bath.  Only the
        cross density sqrt(J J') enters.
    include_aleph : bool
        Drop the cross-period term to get the pure -2 M Im part.
    method : {"frequency", "time"}
        Per-period frequency decomposition or the time-domain oracle.  Non-
        periodic schedules always use the time domain.
    """
    if method not in ("frequency", "time"):
        raise ValueError(f"unknown method {method!r}")
    spec = spec or QuadratureSpec()
    density = _topology(bath).cross
    ms = tuple(int(x) for x in _ms(m))
    if not include_aleph and (method == "time" or not schedule.periodic):
        raise UnsupportedConfigurationError("the aleph-free phase is only defined on the per-period path")
    out = _theta_cached(schedule, ms, density, spec, bool(include_aleph), method)
    return float(out[0]) if np.ndim(m) == 0 else out.copy()


# --- decoherence -------------------------------------------------------------------

@functools.lru_cache(maxsize=1024)
def _upsilon_cached(schedule, ms, density, omega_t, spec):
    if is_zero(density):
        out = np.zeros(len(ms))
        out.setflags(write=False)
        return out
    ms_arr = np.asarray(ms, dtype=np.int64)

    def thermal(w):
        return 1.0 / (np.tanh(0.5 * w / omega_t) * w * w)

    if schedule.periodic:
        def kernel(w):
            f2 = np.abs(filter_f_omega(schedule, w)) ** 2
            d = kernels.dirichlet(w * schedule.period, ms_arr, spec.resonance_eps)
            return d * (f2 * thermal(w))[:, None]

        value, _ = integrate_omega(kernel, density, spec, resonances(schedule.period, _upper(density, spec)))
        out = np.asarray(value, dtype=float)
    else:
        vals = []
        for m in ms:
            horizon = schedule.horizon(m)
            value, _ = integrate_omega(lambda w: np.abs(switching_filter(horizon, w)) ** 2 * thermal(w),
                                       density, spec)
            vals.append(float(value))
        out = np.asarray(vals)
    out = np.maximum(out, 0.0)
    out.setflags(write=False)
    return out


def upsilon_of_t(schedule: PulseSchedule, m, j_eff: SpectralDensity, temperature: float,
                 spec: Optional[QuadratureSpec] = None):
    """Decoherence exponent Upsilon(M Delta) for density ``j_eff`` at ``temperature`` kelvin."""
    spec = spec or QuadratureSpec()
    omega_t = kelvin_to_angular_frequency(temperature)
    ms = tuple(int(x) for x in _ms(m))
    out = _upsilon_cached(schedule, ms, j_eff, omega_t, spec)
    return float(out[0]) if np.ndim(m) == 0 else out.copy()


# --- records and the reduced state --------------------------------------------------

@dataclass(frozen=True)
class PhaseDecoherenceRecord:
    """Phase and decay exponents of every coherence at t = M Delta.

    ``phase[n, m]`` multiplies i and ``decay[n, m]`` is subtracted in the
    exponent of rho_nm.  ``upsilon`` is Upsilon[Jtilde_14], which equals the
    single-bath Upsilon in the symmetric model.
    """

    t: float
    m: int
    theta: float
    upsilon: float
    phase: np.ndarray
    decay: np.ndarray

    @property
    def pairs(self) -> Dict[Tuple[int, int], Tuple[float, float]]:
        """{(n, m): (Theta_nm, Upsilon_nm)} over the six coherences (1-based)."""
        return {(n, m): (float(self.phase[n - 1, m - 1]), float(self.decay[n - 1, m - 1])) for n, m in PAIRS}

    @classmethod
    def symmetric(cls, theta: float, upsilon: float, t: float = 0.0, m: int = 0) -> "PhaseDecoherenceRecord":
        """Record of the single-common-bath model from scalar Theta and Upsilon."""
        from .core import DECAY_MATRIX
        return cls(t, m, float(theta), float(upsilon), theta * PHASE_MATRIX.astype(float),
                   upsilon * DECAY_MATRIX.astype(float))


def _records(schedule, ms, topology: BathTopology, temperature, spec) -> List[PhaseDecoherenceRecord]:
    theta = np.atleast_1d(theta_of_t(schedule, list(ms), topology, spec))
    decay = np.zeros((len(ms), 4, 4))
    ups14 = None
    for n, m in PAIRS:
        density = topology.pair_density(n, m)
        ups = np.atleast_1d(upsilon_of_t(schedule, list(ms), density, temperature, spec))
        if (n, m) == (1, 4):
            ups14 = ups
        decay[:, n - 1, m - 1] = decay[:, m - 1, n - 1] = PAIR_WEIGHTS[(n, m)] * ups
    out = []
    for i, m in enumerate(ms):
        phase = theta[i] * PHASE_MATRIX.astype(float)
        out.append(PhaseDecoherenceRecord(m * schedule.period, int(m), float(theta[i]), float(ups14[i]),
                                          phase, decay[i]))
    return out


def pairwise_records(schedule: PulseSchedule, m: int, topology: Bath, temperature: float,
                     spec: Optional[QuadratureSpec] = None) -> PhaseDecoherenceRecord:
    """Per-coherence (Theta_nm, Upsilon_nm) for common plus private baths.

    The decay of rho_nm is weighted by Upsilon[Jtilde_nm], and the phase pattern
    follows 2 Theta on (1,2), (1,3), -2 Theta on (2,4), (3,4), zero elsewhere.
    """
    return _records(schedule, (int(m),), _topology(topology), temperature, spec or QuadratureSpec())[0]


def trajectory(schedule: PulseSchedule, m_max: int, topology: Bath, temperature: float,
               spec: Optional[QuadratureSpec] = None) -> List[PhaseDecoherenceRecord]:
    """Records at t = Delta, 2 Delta, ..., m_max Delta."""
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    return _records(schedule, tuple(range(1, int(m_max) + 1)), _topology(topology), temperature,
                    spec or QuadratureSpec())


def reduced_density_matrix(rho0, record: PhaseDecoherenceRecord) -> np.ndarray:
    """rho_nm(t) = rho_nm(0) exp(i Theta_nm - Upsilon_nm); populations are untouched."""
    rho0 = as_density_matrix(rho0)
    factor = np.exp(1j * record.phase - record.decay)
    iu = np.triu_indices(4, 1)
    out = np.zeros((4, 4), dtype=complex)
    out[iu] = rho0[iu] * factor[iu]
    out = out + out.conj().T
    out[np.diag_indices(4)] = rho0.diagonal().real
    return out
