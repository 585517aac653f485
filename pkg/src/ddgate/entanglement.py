"""Concurrence, fidelity and gate-timing metrics on two-qubit states."""
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .core import ValidationError, as_density_matrix

__all__ = ["SPIN_FLIP", "concurrence", "concurrence_wootters", "state_fidelity",
           "conditional_phase_state", "cz_target", "time_to_cz", "CZ_PHASE"]

_SY = np.array([[0.0, -1.0], [1.0, 0.0]])  # sigma_y / i, real
SPIN_FLIP = -np.kron(_SY, _SY)  # sigma_y (x) sigma_y, real
SPIN_FLIP.setflags(write=False)

_ZZ = np.array([1.0, -1.0, -1.0, 1.0])

CZ_PHASE = math.pi / 4


def concurrence(rho, rank_tol: float = 1e-13) -> float:
    """Wootters concurrence C = max(0, l1 - l2 - l3 - l4).

    The l_i are the square roots of the eigenvalues of rho Y rho* Y,
    Y = sigma_y (x) sigma_y.  With rho = X X^dagger they are the singular values of
    the complex-symmetric matrix X^T Y X, which avoids the square roots of
    tiny, noisy eigenvalues of the non-Hermitian product.
    """
    rho = as_density_matrix(rho)
    evals, vecs = np.linalg.eigh(rho)
    keep = evals > rank_tol
    x = vecs[:, keep] * np.sqrt(evals[keep])
    lam = np.zeros(4)
    if x.shape[1]:
        sv = np.linalg.svd(x.T @ SPIN_FLIP @ x, compute_uv=False)
        lam[:sv.size] = sv
    lam = np.sort(lam)[::-1]
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence_wootters(rho) -> float:
    """Reference concurrence from a general eigensolver of rho Y rho* Y."""
    rho = as_density_matrix(rho)
    ev = np.linalg.eigvals(rho @ SPIN_FLIP @ rho.conj() @ SPIN_FLIP)
    if np.max(np.abs(ev.imag)) > 1e-10:
        raise ValidationError("spin-flip product has complex eigenvalues")
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1:].sum()))


def _pure(target) -> np.ndarray:
    psi = np.asarray(target, dtype=complex).ravel()
    if psi.shape != (4,):
        raise ValidationError("target must have 4 amplitudes")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise ValidationError("target state is not normalized")
    return psi


def state_fidelity(rho, target) -> float:
    """F = <target| rho |target>, clipped to [0, 1]."""
    rho = as_density_matrix(rho)
    psi = _pure(target)
    f = float(np.vdot(psi, rho @ psi).real)
    if f < -1e-12 or f > 1.0 + 1e-12:
        raise ValidationError(f"fidelity {f} outside [0, 1]")
    return min(1.0, max(0.0, f))


def conditional_phase_state(psi0, theta: float) -> np.ndarray:
    """exp(i theta sz sz) |psi0>, the noiseless image of |psi0>."""
    return np.exp(1j * theta * _ZZ) * _pure(psi0)


def cz_target(psi0, sign: float = 1.0) -> np.ndarray:
    """Ideal CZ-equivalent output: theta = +-pi/4 according to ``sign``."""
    return conditional_phase_state(psi0, math.copysign(CZ_PHASE, sign))


def time_to_cz(trajectory: Sequence, threshold: float = CZ_PHASE) -> Optional[float]:
    """First time |Theta(t)| reaches ``threshold``, linearly interpolated.

    ``trajectory`` holds records with ``t`` and ``theta`` attributes sampled
    at increasing times.  The origin (0, 0) is prepended so a crossing inside
    the first period is interpolated too.  Returns ``None`` if never reached.
    """
    t_prev, a_prev = 0.0, 0.0
    for rec in trajectory:
        t, a = float(rec.t), abs(float(rec.theta))
        if a >= threshold:
            if a == threshold or a == a_prev:
                return t
            return t_prev + (threshold - a_prev) * (t - t_prev) / (a - a_prev)
        t_prev, a_prev = t, a
    return None
