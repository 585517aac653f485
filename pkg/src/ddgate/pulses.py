"""Pulse schedules, switching functions and the per-period filter f(w, Delta).

A schedule describes ideal, instantaneous pi pulses inside one period
``(0, period]``.  The switching function starts at +1 and flips sign at every
pulse; the schedule is repeated M times back to back.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import mpmath
import numpy as np

from . import kernels
from .core import DomainError, ValidationError

__all__ = [
    "Family", "PulseSchedule", "SwitchingFunction", "udd_times",
    "build_switching_function", "filter_f_omega", "switching_filter",
    "filter_f_omega_oracle",
]

#: Below this value of w*duration the filter is evaluated from its Taylor series.
SERIES_X_MAX = 0.5
#: Extra Taylor terms beyond the number of intervals.
_EXTRA_TERMS = 30
_MOMENT_DPS = 50


class Family(str, enum.Enum):
    UDD = "udd"
    CPMG = "cpmg"
    PDD = "pdd"
    FREE = "free"
    CUSTOM = "custom"


def udd_times(n_pulses: int, t: float, end_correction: bool = True) -> np.ndarray:
    """Uhrig pulse times t sin^2(j pi / (2N + 2)), j = 1..N.

    For odd ``n_pulses`` a closing pulse at ``t`` is appended unless
    ``end_correction`` is False.
    """
    if n_pulses < 0 or int(n_pulses) != n_pulses:
        raise DomainError(f"pulse count must be a non-negative integer, got {n_pulses!r}")
    if not t > 0.0:
        raise DomainError(f"sequence duration must be positive, got {t!r}")
    n = int(n_pulses)
    j = np.arange(1, n + 1)
    times = t * np.sin(j * np.pi / (2 * n + 2)) ** 2
    if end_correction and n % 2 == 1:
        times = np.append(times, t)
    return times


@dataclass(frozen=True)
class SwitchingFunction:
    """Piecewise-constant +-1 function on ``[0, boundaries[-1]]``."""

    boundaries: Tuple[float, ...]
    signs: Tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.boundaries)
        s = tuple(float(x) for x in self.signs)
        if len(b) != len(s) + 1 or not s:
            raise ValidationError("need one more boundary than signs")
        if b[0] != 0.0 or any(hi <= lo for lo, hi in zip(b, b[1:])):
            raise ValidationError("boundaries must start at 0 and increase strictly")
        if s[0] != 1.0 or any(v not in (1.0, -1.0) for v in s):
            raise ValidationError("signs must be +-1 and start at +1")
        if any(a == c for a, c in zip(s, s[1:])):
            raise ValidationError("adjacent intervals must have opposite signs")
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "signs", s)

    @property
    def duration(self) -> float:
        return self.boundaries[-1]

    @property
    def starts(self) -> np.ndarray:
        return np.asarray(self.boundaries[:-1])

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.boundaries)

    def __call__(self, t):
        """Value at time(s) ``t``; right-continuous, last interval closed."""
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.boundaries, t, side="right") - 1, 0, len(self.signs) - 1)
        return np.asarray(self.signs)[idx]

    def tile(self, m: int, flip: bool = False) -> "SwitchingFunction":
        """Concatenate ``m`` copies; with ``flip`` every other copy is negated.

        Adjacent equal-sign intervals at copy seams are merged.
        """
        if m < 1:
            raise DomainError("need at least one repetition")
        period = self.duration
        bounds = [0.0]
        signs: list = []
        for p in range(m):
            factor = -1.0 if (flip and p % 2) else 1.0
            for lo, hi, s in zip(self.boundaries[:-1], self.boundaries[1:], self.signs):
                s = factor * s
                if signs and signs[-1] == s:
                    bounds[-1] = p * period + hi
                else:
                    signs.append(s)
                    bounds.append(p * period + hi)
        return SwitchingFunction(tuple(bounds), tuple(signs))

    def boundary_coefficients(self) -> Tuple[np.ndarray, np.ndarray]:
        """(positions / duration, jump coefficients) so that
        f(w) = sum_j c_j exp(i w duration p_j)."""
        s = np.asarray(self.signs)
        coeffs = np.concatenate([[s[0]], np.diff(s), [-s[-1]]])
        return np.asarray(self.boundaries) / self.duration, coeffs


@functools.lru_cache(maxsize=256)
def _series_coefficients(positions: Tuple, signs: Tuple, n_terms: int) -> np.ndarray:
    """c_n = i^n mu_n / n!, mu_n = int_0^1 u^n f(u) du, computed at high precision."""
    with mpmath.workdps(_MOMENT_DPS):
        pos = [mpmath.mpf(p) if not isinstance(p, mpmath.mpf) else p for p in positions]
        out = np.empty(n_terms, dtype=complex)
        for n in range(n_terms):
            mu = mpmath.fsum(s * (hi ** (n + 1) - lo ** (n + 1)) for lo, hi, s in zip(pos[:-1], pos[1:], signs))
            mu = mu / (n + 1) / mpmath.factorial(n)
            out[n] = complex(float(mu), 0.0) * (1j ** n)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PulseSchedule:
    """Pulse times within one period of a repeated decoupling sequence.

    Parameters
    ----------
    period : float
        Period Delta in us.
    pulse_times : tuple of float
        Strictly increasing times in ``(0, period]``; a pulse exactly at
        ``period`` is the closing (end-correction) pulse.
    family : Family
        Sequence family tag, used for the closed-form UDD filter.
    n_pulses : int
        Nominal pulse count N_d, not counting the closing pulse.
    end_corrected : bool
        Whether a closing pulse at ``period`` was appended.
    """

    period: float
    pulse_times: Tuple[float, ...]
    family: Family = Family.CUSTOM
    n_pulses: int = 0
    end_corrected: bool = False

    def __post_init__(self):
        period = float(self.period)
        if not (np.isfinite(period) and period > 0.0):
            raise ValidationError(f"period must be positive, got {self.period!r}")
        times = tuple(float(x) for x in self.pulse_times)
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("pulse times must be strictly increasing (duplicates are not allowed)")
        if times and (times[0] <= 0.0 or times[-1] > period):
            raise ValidationError("pulse times must lie in (0, period]")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "pulse_times", times)
        object.__setattr__(self, "family", Family(self.family))

    # -- constructors -----------------------------------------------------

    @classmethod
    def udd(cls, n_pulses: int, period: float, end_correction: bool = True) -> "PulseSchedule":
        times = udd_times(n_pulses, period, end_correction)
        return cls(period, tuple(times), Family.UDD, int(n_pulses), bool(end_correction and n_pulses % 2))

    @classmethod
    def cpmg(cls, n_pulses: int, period: float, end_correction: bool = True) -> "PulseSchedule":
        """Equally spaced pulses at (j - 1/2) period / N."""
        times = [(j - 0.5) * period / n_pulses for j in range(1, n_pulses + 1)]
        return cls._with_end(times, period, Family.CPMG, n_pulses, end_correction)

    @classmethod
    def pdd(cls, n_pulses: int, period: float, end_correction: bool = True) -> "PulseSchedule":
        """Equally spaced pulses at j period / (N + 1)."""
        times = [j * period / (n_pulses + 1) for j in range(1, n_pulses + 1)]
        return cls._with_end(times, period, Family.PDD, n_pulses, end_correction)

    @classmethod
    def free(cls, period: float) -> "PulseSchedule":
        return cls(period, (), Family.FREE, 0, False)

    @classmethod
    def custom(cls, pulse_times: Sequence[float], period: float, end_correction: bool = True) -> "PulseSchedule":
        times = [float(t) for t in pulse_times]
        n = len([t for t in times if t < period])
        return cls._with_end(times, period, Family.CUSTOM, n, end_correction)

    @classmethod
    def from_family(cls, family, n_pulses: int, period: float, end_correction: bool = True,
                    pulse_times: Optional[Sequence[float]] = None) -> "PulseSchedule":
        family = Family(family)
        if family is Family.CUSTOM:
            if pulse_times is None:
                raise ValidationError("custom schedules need explicit pulse times")
            return cls.custom(pulse_times, period, end_correction)
        if family is Family.FREE or n_pulses == 0:
            return cls.free(period)
        return {Family.UDD: cls.udd, Family.CPMG: cls.cpmg, Family.PDD: cls.pdd}[family](n_pulses, period, end_correction)

    @classmethod
    def _with_end(cls, times, period, family, n, end_correction):
        times = list(times)
        added = False
        if end_correction and len(times) % 2 == 1:
            if times and math.isclose(times[-1], period, rel_tol=0.0, abs_tol=0.0):
                raise ValidationError("odd pulse count with a pulse already at the period end")
            times.append(period)
            added = True
        return cls(period, tuple(times), family, int(n), added)

    def with_period(self, period: float) -> "PulseSchedule":
        """Same sequence rescaled to a new period."""
        scale = float(period) / self.period
        times = tuple(t * scale for t in self.pulse_times)
        if self.pulse_times and self.pulse_times[-1] == self.period:
            times = times[:-1] + (float(period),)
        return PulseSchedule(period, times, self.family, self.n_pulses, self.end_corrected)

    # -- derived ----------------------------------------------------------

    @property
    def periodic(self) -> bool:
        """True when the sign after one period is again +1 (even flip count)."""
        return len(self.pulse_times) % 2 == 0

    def switching_function(self) -> SwitchingFunction:
        return build_switching_function(self)

    def horizon(self, m: int) -> SwitchingFunction:
        """Switching function over ``m`` periods."""
        return self.switching_function().tile(m, flip=not self.periodic)

    def positions_and_coefficients(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.family is Family.UDD and self.n_pulses > 0:
            n = self.n_pulses
            p = np.arange(1, n + 1)
            delta = np.sin(np.pi * p / (2 * (n + 1))) ** 2
            positions = np.concatenate([[0.0], delta, [1.0]])
            coeffs = np.concatenate([[1.0], 2.0 * (-1.0) ** p, [(-1.0) ** (n + 1)]])
            return positions, coeffs
        return self.switching_function().boundary_coefficients()

    def series_coefficients(self) -> np.ndarray:
        return _schedule_series(self)

    def _series_coefficients(self) -> np.ndarray:
        sw = self.switching_function()
        n_terms = len(sw.signs) + _EXTRA_TERMS
        if self.family is Family.UDD and self.n_pulses > 0:
            n = self.n_pulses
            with mpmath.workdps(_MOMENT_DPS):
                inner = tuple(mpmath.sin(mpmath.pi * p / (2 * (n + 1))) ** 2 for p in range(1, n + 1))
            positions = (mpmath.mpf(0),) + inner + (mpmath.mpf(1),)
            signs = tuple((-1) ** k for k in range(n + 1))
            return _series_coefficients(positions, signs, n_terms)
        with mpmath.workdps(_MOMENT_DPS):
            positions = tuple(mpmath.mpf(b) / mpmath.mpf(sw.duration) for b in sw.boundaries)
        return _series_coefficients(positions, tuple(int(s) for s in sw.signs), n_terms)


@functools.lru_cache(maxsize=512)
def _schedule_series(schedule: PulseSchedule) -> np.ndarray:
    return schedule._series_coefficients()


def build_switching_function(schedule: PulseSchedule) -> SwitchingFunction:
    """Switching function of one period: +1 at 0+, flipping at every interior pulse."""
    interior = [t for t in schedule.pulse_times if t < schedule.period]
    bounds = (0.0, *interior, schedule.period)
    signs = tuple((-1.0) ** k for k in range(len(interior) + 1))
    return SwitchingFunction(bounds, signs)


def _filter(x, positions, coeffs, series):
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    out = np.empty(flat.shape, dtype=complex)
    small = np.abs(flat) < SERIES_X_MAX
    if np.any(small):
        out[small] = kernels.series_sum(flat[small], series)
    if np.any(~small):
        out[~small] = kernels.boundary_sum(flat[~small], positions, coeffs)
    out = out.reshape(x.shape)
    return complex(out) if out.ndim == 0 else out


def filter_f_omega(schedule: PulseSchedule, omega):
    """Per-period filter f(w, Delta) = -i w int_0^Delta e^{i w t} f(t) dt.

    UDD schedules use the closed sum over the Uhrig phases delta_p, other
    families the equivalent sum over switching-function jumps.  For
    w Delta < 0.5 a Taylor series with high-precision moments is used so
    that the high-order zero at w = 0 is resolved.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise DomainError("filter is defined for w >= 0")
    positions, coeffs = schedule.positions_and_coefficients()
    return _filter(omega * schedule.period, positions, coeffs, schedule.series_coefficients())


@functools.lru_cache(maxsize=64)
def _switching_series(sw: SwitchingFunction) -> np.ndarray:
    with mpmath.workdps(_MOMENT_DPS):
        positions = tuple(mpmath.mpf(b) / mpmath.mpf(sw.duration) for b in sw.boundaries)
    return _series_coefficients(positions, tuple(int(s) for s in sw.signs), len(sw.signs) + _EXTRA_TERMS)


def switching_filter(sw: SwitchingFunction, omega):
    """Filter -i w int_0^T e^{i w t} f(t) dt of an arbitrary switching function."""
    omega = np.asarray(omega, dtype=float)
    positions, coeffs = sw.boundary_coefficients()
    return _filter(omega * sw.duration, positions, coeffs, _switching_series(sw))


def filter_f_omega_oracle(sw: SwitchingFunction, omega: float, n_points: int = 10_000,
                          dps: Optional[int] = None, boundaries: Optional[Sequence] = None) -> complex:
    """Brute-force quadrature of -i w int_0^T e^{i w t} f(t) dt.

    Composite Gauss-Legendre with at least ``n_points`` nodes, panels aligned
    with the sign changes.  With ``dps`` the sum is carried out in mpmath at
    that many digits (needed where the result is far below 1e-16);
    ``boundaries`` may then supply the sign-change times at that precision.
    Test oracle only; :func:`filter_f_omega` is the production path.
    """
    omega = float(omega)
    if omega == 0.0:
        return 0j
    node_count = 12
    panels_total = max(1, math.ceil(n_points / node_count))
    dur = sw.duration
    if dps is None:
        xs, ws = np.polynomial.legendre.leggauss(node_count)
        total = 0j
        for lo, hi, s in zip(sw.boundaries[:-1], sw.boundaries[1:], sw.signs):
            n_pan = max(1, math.ceil(panels_total * (hi - lo) / dur))
            edges = np.linspace(lo, hi, n_pan + 1)
            half = 0.5 * np.diff(edges)[:, None]
            mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
            t = mid + half * xs[None, :]
            total += s * np.sum(half * ws[None, :] * np.exp(1j * omega * t))
        return complex(-1j * omega * total)
    from mpmath.calculus.quadrature import GaussLegendre

    with mpmath.workdps(dps):
        mp = mpmath.mp
        nodes = GaussLegendre(mp).calc_nodes(3, mp.prec)
        w = mpmath.mpf(omega)
        total = mpmath.mpc(0)
        bounds = [mpmath.mpf(b) for b in (sw.boundaries if boundaries is None else boundaries)]
        for lo, hi, s in zip(bounds[:-1], bounds[1:], sw.signs):
            n_pan = max(1, math.ceil(panels_total * float((hi - lo) / mpmath.mpf(dur))))
            h = (hi - lo) / n_pan
            acc = mpmath.mpc(0)
            for j in range(n_pan):
                mid = lo + (j + mpmath.mpf(0.5)) * h
                for x, wt in nodes:
                    acc += wt * mpmath.expj(w * (mid + x * h / 2))
            total += s * acc * h / 2
        return complex(-1j * w * total)
