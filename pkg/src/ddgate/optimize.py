"""Deterministic search over pulse-schedule parameters.

Stage one scores a grid of (N_d, Delta) with Delta log-spaced; stage two
refines Delta by golden-section search around the best grid points.  All
candidates are ranked by (-score, N_d, Delta), so the order never depends on
evaluation order or thread scheduling.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import BathTopology, DomainError, ValidationError, is_zero, plus_plus
from .dynamics import PhaseDecoherenceRecord, reduced_density_matrix, trajectory
from .entanglement import CZ_PHASE, concurrence, cz_target, state_fidelity, time_to_cz
from .numerics import QuadratureSpec
from .pulses import Family, PulseSchedule

__all__ = ["Objective", "OptimizationProblem", "Candidate", "OptimizationReport",
           "evaluate", "optimize", "NO_INTERACTION"]

NO_INTERACTION = "no entangling interaction"

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Objective(str, enum.Enum):
    MIN_TIME_TO_CZ = "min-time-to-cz"
    MAX_CONCURRENCE = "max-concurrence"
    MAX_FIDELITY_AT_CZ = "max-fidelity-at-cz"


@dataclass(frozen=True)
class OptimizationProblem:
    """Search problem over one pulse family.

    Parameters
    ----------
    topology : BathTopology
        Fixed bath couplings.
    temperature : float
        Kelvin.
    n_pulses : tuple of int
        Candidate N_d values.
    period_range : (float, float)
        Bounds on Delta in microseconds.
    m_max : int
        Largest number of periods to evolve.
    time_budget : float, optional
        Total-time cap in microseconds; the horizon becomes
        min(m_max, floor(time_budget / Delta)) periods.
    fidelity_threshold : float
        Minimum CZ fidelity for the min-time objective.
    seeds : tuple of (int, float)
        Extra (N_d, Delta) points scored alongside the grid.
    """

    topology: BathTopology
    temperature: float
    n_pulses: Tuple[int, ...] = (0, 2, 4, 6, 8)
    period_range: Tuple[float, float] = (0.008, 0.064)
    m_max: int = 16
    family: Family = Family.UDD
    objective: Objective = Objective.MIN_TIME_TO_CZ
    fidelity_threshold: float = 0.9
    time_budget: Optional[float] = None
    n_grid: int = 9
    top_q: int = 5
    refine_iterations: int = 16
    initial_state: Tuple[complex, ...] = tuple(np.full(4, 0.5, dtype=complex))
    seeds: Tuple[Tuple[int, float], ...] = ()
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_pulses", tuple(int(n) for n in self.n_pulses))
        object.__setattr__(self, "period_range", tuple(float(p) for p in self.period_range))
        object.__setattr__(self, "objective", Objective(self.objective))
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "seeds", tuple((int(n), float(d)) for n, d in self.seeds))
        object.__setattr__(self, "initial_state", tuple(complex(a) for a in self.initial_state))
        if not self.n_pulses or any(n < 0 for n in self.n_pulses):
            raise ValidationError("n_pulses must be a non-empty set of non-negative integers")
        lo, hi = self.period_range
        if not (0.0 < lo <= hi) or not np.isfinite(hi):
            raise ValidationError("period_range must satisfy 0 < lo <= hi")
        if self.m_max < 1 or self.n_grid < 1 or self.top_q < 0 or self.refine_iterations < 0:
            raise ValidationError("m_max, n_grid must be >= 1; top_q, refine_iterations >= 0")
        if self.time_budget is not None and not self.time_budget > 0.0:
            raise ValidationError("time_budget must be positive")
        if not 0.0 <= self.fidelity_threshold <= 1.0:
            raise ValidationError("fidelity_threshold must lie in [0, 1]")
        if self.temperature <= 0.0:
            raise DomainError("temperature must be positive")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")

    def horizon(self, period: float) -> int:
        m = self.m_max
        if self.time_budget is not None:
            m = min(m, int(math.floor(self.time_budget / period * (1 + 1e-12))))
        return m

    def schedule(self, n_pulses: int, period: float) -> PulseSchedule:
        return PulseSchedule.from_family(self.family, n_pulses, period)


@dataclass(frozen=True)
class Candidate:
    schedule: PulseSchedule
    m: int
    score: float
    metrics: Dict[str, Optional[float]]

    @property
    def key(self):
        return (-self.score, self.schedule.n_pulses, self.schedule.period)


@dataclass(frozen=True)
class OptimizationReport:
    candidates: Tuple[Candidate, ...]
    diagnostic: Optional[str]
    evaluations: int

    @property
    def best(self) -> Optional[Candidate]:
        return self.candidates[0] if self.candidates else None


def _interpolate(records: Sequence[PhaseDecoherenceRecord], t: float) -> PhaseDecoherenceRecord:
    # linear interpolation of phase and decay matrices, origin included
    prev = PhaseDecoherenceRecord.symmetric(0.0, 0.0)
    for rec in records:
        if rec.t >= t:
            w = 1.0 if rec.t == prev.t else (t - prev.t) / (rec.t - prev.t)
            theta = prev.theta + w * (rec.theta - prev.theta)
            return PhaseDecoherenceRecord(t, rec.m, theta, prev.upsilon + w * (rec.upsilon - prev.upsilon),
                                          prev.phase + w * (rec.phase - prev.phase),
                                          prev.decay + w * (rec.decay - prev.decay))
        prev = rec
    raise DomainError("time outside the trajectory")


def evaluate(problem: OptimizationProblem, n_pulses: int, period: float) -> Candidate:
    """Score one (N_d, Delta) point through the public dynamics and entanglement API."""
    schedule = problem.schedule(n_pulses, period)
    m = problem.horizon(period)
    empty = {"t_cz": None, "fidelity_at_cz": None, "max_concurrence": 0.0, "theta_final": 0.0,
             "upsilon_final": 0.0}
    if m < 1:
        return Candidate(schedule, 0, 0.0, empty)
    psi0 = np.asarray(problem.initial_state)
    rho0 = np.outer(psi0, psi0.conj())
    records = trajectory(schedule, m, problem.topology, problem.temperature, problem.quadrature)
    conc = [concurrence(reduced_density_matrix(rho0, r)) for r in records]
    t_cz = time_to_cz(records)
    f_cz = None
    if t_cz is not None:
        rec = _interpolate(records, t_cz)
        sign = 1.0 if rec.theta >= 0 else -1.0
        # pin the phase exactly at the gate point
        rec = PhaseDecoherenceRecord(t_cz, rec.m, sign * CZ_PHASE, rec.upsilon,
                                     rec.phase * (CZ_PHASE / abs(rec.theta)), rec.decay)
        f_cz = state_fidelity(reduced_density_matrix(rho0, rec), cz_target(psi0, sign))
    metrics = {"t_cz": t_cz, "fidelity_at_cz": f_cz, "max_concurrence": float(max(conc)),
               "theta_final": records[-1].theta, "upsilon_final": records[-1].upsilon}
    if problem.objective is Objective.MAX_CONCURRENCE:
        score = metrics["max_concurrence"]
    elif problem.objective is Objective.MAX_FIDELITY_AT_CZ:
        score = f_cz or 0.0
    else:
        score = 1.0 / t_cz if t_cz is not None and f_cz >= problem.fidelity_threshold else 0.0
    return Candidate(schedule, m, float(score), metrics)


def _golden(problem, n, lo, hi, known: Dict[float, Candidate]) -> List[Candidate]:
    """Golden-section maximization of the score over log(Delta) in [lo, hi]."""
    def score(d):
        if d not in known:
            known[d] = evaluate(problem, n, d)
        return known[d].score

    a, b = math.log(lo), math.log(hi)
    c, d = b - _INV_GOLDEN * (b - a), a + _INV_GOLDEN * (b - a)
    fc, fd = score(math.exp(c)), score(math.exp(d))
    for _ in range(problem.refine_iterations):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = score(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = score(math.exp(d))
    return list(known.values())


def optimize(problem: OptimizationProblem) -> OptimizationReport:
    """Rank schedules for ``problem``; empty with a diagnostic if nothing scores above zero."""
    if is_zero(problem.topology.cross):
        return OptimizationReport((), NO_INTERACTION, 0)
    lo, hi = problem.period_range
    grid = np.geomspace(lo, hi, problem.n_grid) if problem.n_grid > 1 else np.array([lo])
    points = [(n, float(d)) for n in problem.n_pulses for d in grid]
    points += [s for s in problem.seeds if s not in points]

    if problem.workers > 1:
        with ThreadPoolExecutor(problem.workers) as pool:
            scored = list(pool.map(lambda p: evaluate(problem, *p), points))
    else:
        scored = [evaluate(problem, *p) for p in points]
    evaluations = len(scored)

    ranked = sorted((c for c in scored if c.score > 0.0), key=lambda c: c.key)
    pool_out = {(c.schedule.n_pulses, c.schedule.period): c for c in scored}
    for best in ranked[:problem.top_q]:
        n, d = best.schedule.n_pulses, best.schedule.period
        idx = int(np.searchsorted(grid, d))
        left = grid[max(idx - 1, 0)] if d >= grid[0] else d
        right = grid[min(idx + 1, grid.size - 1)] if d <= grid[-1] else d
        if idx < grid.size and grid[idx] != d:  # seed between grid points
            left, right = grid[max(idx - 1, 0)], grid[idx]
        if right <= left:
            continue
        known = {d: best}
        for c in _golden(problem, n, left, right, known):
            pool_out.setdefault((n, c.schedule.period), c)
        evaluations += len(known) - 1

    final = sorted((c for c in pool_out.values() if c.score > 0.0), key=lambda c: c.key)
    diagnostic = None if final else f"no candidate satisfies objective {problem.objective.value}"
    return OptimizationReport(tuple(final), diagnostic, evaluations)
