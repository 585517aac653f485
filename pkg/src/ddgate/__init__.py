"""Two qubits dephasing in a common bosonic bath under dynamical decoupling.

The package computes the bath-induced conditional phase Theta(t), the
decoherence exponent Upsilon(t), the exact reduced two-qubit density matrix,
its concurrence, and optimized pulse schedules for fast conditional-phase
gates.  Internal units are rad/us for angular frequency and us for time.
"""
__version__ = "0.1.0"

from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .pulses import (Family, PulseSchedule, SwitchingFunction, filter_f_omega,
                     filter_f_omega_oracle, switching_filter, udd_times)
from .numerics import (QuadratureSpec, dirichlet_factor, double_time_integral, integrate_omega,
                       OhmicKernel, ModeSumKernel, SineKernel, CallableKernel)
from .dynamics import (PhaseDecoherenceRecord, aleph_integrand, im_functional, pairwise_records,
                       re_functional, reduced_density_matrix, theta_of_t, theta_time_domain,
                       trajectory, upsilon_of_t)
from .entanglement import (concurrence, concurrence_wootters, conditional_phase_state, cz_target,
                           state_fidelity, time_to_cz)
from .optimize import Objective, OptimizationProblem, OptimizationReport, evaluate, optimize
from .config import RunConfig, load_config, preset
from .kernels import BACKEND

__all__ = list(_core_all) + [
    "Family", "PulseSchedule", "SwitchingFunction", "filter_f_omega", "filter_f_omega_oracle",
    "switching_filter", "udd_times", "QuadratureSpec", "dirichlet_factor", "double_time_integral",
    "integrate_omega", "OhmicKernel", "ModeSumKernel", "SineKernel", "CallableKernel",
    "PhaseDecoherenceRecord", "aleph_integrand", "im_functional", "pairwise_records", "re_functional",
    "reduced_density_matrix", "theta_of_t", "theta_time_domain", "trajectory", "upsilon_of_t",
    "concurrence", "concurrence_wootters", "conditional_phase_state", "cz_target", "state_fidelity",
    "time_to_cz", "Objective", "OptimizationProblem", "OptimizationReport", "evaluate", "optimize",
    "RunConfig", "load_config", "preset", "BACKEND", "__version__",
]
