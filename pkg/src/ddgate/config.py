"""JSON run configuration, unit conversion into internal units, and figure presets.

Frequencies are given in MHz and read as angular (rad/us) unless
``frequency_convention`` is ``"ordinary"``, in which case they are multiplied
by 2 pi.  Times are in ns, temperatures in K.  Unknown keys are rejected.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .core import (BathTopology, DiscreteModes, FrequencyConvention, Ohmic, Tabulated,
                   ValidationError, mhz_to_angular, ns_to_us)
from .numerics import QuadratureSpec
from .pulses import Family, PulseSchedule

__all__ = ["RunConfig", "PRESETS", "preset", "load_config", "OhmicSpec", "TabulatedSpec",
           "DiscreteSpec", "BathSpec", "ScheduleSpec", "InitialStateSpec", "QuadratureOverrides",
           "SpectraSpec", "OptimizeSpec", "OutputSpec"]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class OhmicSpec(_Model):
    variant: Literal["ohmic"] = "ohmic"
    eta: float = Field(ge=0.0)
    omega_c_mhz: float = Field(gt=0.0)

    def build(self, conv):
        return Ohmic(self.eta, mhz_to_angular(self.omega_c_mhz, conv))


class TabulatedSpec(_Model):
    variant: Literal["tabulated"] = "tabulated"
    omega_mhz: List[float]
    j_mhz: List[float]

    def build(self, conv):
        return Tabulated(tuple(np.atleast_1d(mhz_to_angular(np.asarray(self.omega_mhz), conv))),
                         tuple(np.atleast_1d(mhz_to_angular(np.asarray(self.j_mhz), conv))))


class DiscreteSpec(_Model):
    variant: Literal["discrete"] = "discrete"
    couplings_mhz: List[float]
    frequencies_mhz: List[float]

    def build(self, conv):
        return DiscreteModes(tuple(np.atleast_1d(mhz_to_angular(np.asarray(self.couplings_mhz), conv))),
                             tuple(np.atleast_1d(mhz_to_angular(np.asarray(self.frequencies_mhz), conv))))


DensitySpec = Annotated[Union[OhmicSpec, TabulatedSpec, DiscreteSpec], Field(discriminator="variant")]


class BathSpec(_Model):
    """Common bath J, optional J' for qubit 2 (null means J' = J), optional private baths."""

    common: Optional[DensitySpec] = None
    common_prime: Optional[DensitySpec] = None
    individual_1: Optional[DensitySpec] = None
    individual_2: Optional[DensitySpec] = None

    def build(self, conv) -> BathTopology:
        b = lambda s: None if s is None else s.build(conv)
        return BathTopology(b(self.common) or Ohmic(0.0, 1.0), b(self.common_prime),
                            b(self.individual_1), b(self.individual_2))


class ScheduleSpec(_Model):
    family: Family = Family.UDD
    n_pulses: int = Field(default=0, ge=0)
    period_ns: float = Field(gt=0.0)
    m: int = Field(default=1, ge=1)
    end_correction: bool = True
    pulse_times_ns: Optional[List[float]] = None

    @model_validator(mode="after")
    def _custom(self):
        if (self.family is Family.CUSTOM) != (self.pulse_times_ns is not None):
            raise ValueError("pulse_times_ns is required for, and only for, the custom family")
        return self

    def build(self) -> PulseSchedule:
        period = ns_to_us(self.period_ns)
        if self.family is Family.CUSTOM:
            return PulseSchedule.custom([ns_to_us(t) for t in self.pulse_times_ns], period, self.end_correction)
        return PulseSchedule.from_family(self.family, self.n_pulses, period, self.end_correction)


class InitialStateSpec(_Model):
    preset: Optional[Literal["plus-plus"]] = "plus-plus"
    amplitudes: Optional[List[Tuple[float, float]]] = None

    @model_validator(mode="after")
    def _one(self):
        if self.amplitudes is not None:
            if len(self.amplitudes) != 4:
                raise ValueError("amplitudes needs 4 (re, im) pairs")
            norm = sum(a * a + b * b for a, b in self.amplitudes)
            if abs(norm - 1.0) > 1e-10:
                raise ValueError(f"amplitudes are not normalized (norm^2 = {norm})")
        elif self.preset is None:
            raise ValueError("give a preset or amplitudes")
        return self

    def vector(self) -> np.ndarray:
        if self.amplitudes is not None:
            return np.array([complex(a, b) for a, b in self.amplitudes])
        return np.full(4, 0.5, dtype=complex)


class QuadratureOverrides(_Model):
    rtol: float = 1e-9
    atol: float = 1e-12
    cutoff_multiplier: float = 60.0
    limit: int = 4000

    def build(self) -> QuadratureSpec:
        return QuadratureSpec(rtol=self.rtol, atol=self.atol, cutoff_multiplier=self.cutoff_multiplier,
                              limit=self.limit)


class SpectraSpec(_Model):
    omega_min_mhz: float = Field(default=0.1, gt=0.0)
    omega_max_mhz: float = Field(default=3000.0, gt=0.0)
    points: int = Field(default=2000, ge=2)

    @model_validator(mode="after")
    def _order(self):
        if self.omega_max_mhz <= self.omega_min_mhz:
            raise ValueError("omega_max_mhz must exceed omega_min_mhz")
        return self


class OptimizeSpec(_Model):
    n_pulses: List[int] = [0, 2, 4, 6, 8]
    period_ns: Tuple[float, float] = (8.0, 64.0)
    m_max: int = Field(default=16, ge=1)
    objective: Literal["min-time-to-cz", "max-concurrence", "max-fidelity-at-cz"] = "min-time-to-cz"
    fidelity_threshold: float = Field(default=0.9, ge=0.0, le=1.0)
    time_budget_ns: Optional[float] = Field(default=None, gt=0.0)
    n_grid: int = Field(default=9, ge=1)
    top_q: int = Field(default=5, ge=0)
    refine_iterations: int = Field(default=16, ge=0)
    workers: int = Field(default=1, ge=1)
    seed_with_schedule: bool = True


class OutputSpec(_Model):
    path: Optional[str] = None


class RunConfig(_Model):
    """Complete run description.

    ``qubit_frequencies_mhz`` holds the local qubit energies.  They enter no
    observable (pure dephasing commutes with them) and are kept for the record.
    """

    frequency_convention: FrequencyConvention = FrequencyConvention.ANGULAR
    bath: BathSpec
    temperature_k: float = Field(gt=0.0)
    schedule: ScheduleSpec
    qubit_frequencies_mhz: Tuple[float, float] = (10.0, 10.0)
    initial_state: InitialStateSpec = InitialStateSpec()
    quadrature: QuadratureOverrides = QuadratureOverrides()
    spectra: SpectraSpec = SpectraSpec()
    optimize: OptimizeSpec = OptimizeSpec()
    output: OutputSpec = OutputSpec()

    def topology(self) -> BathTopology:
        return self.bath.build(self.frequency_convention)

    def pulse_schedule(self) -> PulseSchedule:
        return self.schedule.build()

    def quadrature_spec(self) -> QuadratureSpec:
        return self.quadrature.build()

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"


def load_config(path) -> RunConfig:
    """Parse a JSON config file."""
    text = Path(path).read_text()
    return RunConfig.model_validate_json(text)


def _ohmic(eta, wc):
    return OhmicSpec(eta=eta, omega_c_mhz=wc)


def _fig2(eta, eta_i, temperature, period, m, n):
    indiv = _ohmic(eta_i, 30.0)
    return RunConfig(bath=BathSpec(common=_ohmic(eta, 30.0), individual_1=indiv, individual_2=indiv),
                     temperature_k=temperature,
                     schedule=ScheduleSpec(family=Family.UDD, n_pulses=n, period_ns=period, m=m))


PRESETS = {
    "fig1": lambda: RunConfig(bath=BathSpec(common=_ohmic(135.0, 34.0)), temperature_k=1.0,
                              schedule=ScheduleSpec(family=Family.UDD, n_pulses=8, period_ns=16.0, m=3)),
    "fig2-curve1": lambda: _fig2(1.0, 0.0, 0.08e-3, 60.0, 16, 9),
    "fig2-curve2": lambda: _fig2(10.0, 10.0, 1e-3, 29.0, 9, 7),
    "fig2-curve3": lambda: _fig2(100.0, 100.0, 1.0, 16.0, 8, 8),
}


def preset(name: str) -> RunConfig:
    """Figure parameter sets; unknown names raise with the valid list."""
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; valid presets: {', '.join(sorted(PRESETS))}") from None
