"""Domain types, unit conversions and the fixed phase/decay pattern matrices.

Canonical internal units are angular frequency in rad/us and time in us, with
hbar = 1.  User-facing input (config files, presets) is given in MHz, ns and K
and converted here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import constants

__all__ = [
    "DDGateError", "DomainError", "UnsupportedVariantError", "ValidationError",
    "QuadratureError", "UnsupportedConfigurationError",
    "FrequencyConvention", "KB_OVER_HBAR", "mhz_to_angular", "angular_to_mhz",
    "ns_to_us", "us_to_ns", "kelvin_to_angular_frequency",
    "Ohmic", "Tabulated", "DiscreteModes", "CrossDensity", "Composite",
    "SpectralDensity", "evaluate_spectral_density", "cross_density", "is_zero",
    "BathTopology", "PAIRS", "PAIR_WEIGHTS", "PHASE_MATRIX", "DECAY_MATRIX", "BASIS_LABELS",
    "as_density_matrix", "density_from_amplitudes", "plus_plus",
]


class DDGateError(Exception):
    """Base class for all package errors."""


class DomainError(DDGateError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedVariantError(DDGateError, TypeError):
    """Operation not defined for this spectral-density variant."""


class ValidationError(DDGateError, ValueError):
    """Malformed schedule, state or configuration."""


class UnsupportedConfigurationError(DDGateError, ValueError):
    """Physically valid input that this library does not model."""


class QuadratureError(DDGateError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    value : float or ndarray
        Best estimate at the point of failure.
    error : float or ndarray
        Error estimate belonging to ``value``.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


# --- units -------------------------------------------------------------------

class FrequencyConvention(str, enum.Enum):
    """How a number quoted in "MHz" is read.

    ``ANGULAR`` takes it as rad/us directly, ``ORDINARY`` as cycles/us and
    multiplies by 2 pi.
    """

    ANGULAR = "angular"
    ORDINARY = "ordinary"


#: k_B / hbar in rad/us per kelvin (CODATA 2018 exact constants).
KB_OVER_HBAR = constants.k / constants.hbar * 1e-6


def _scale(convention) -> float:
    return 2.0 * np.pi if FrequencyConvention(convention) is FrequencyConvention.ORDINARY else 1.0


def mhz_to_angular(value, convention="angular"):
    """Convert a frequency quoted in MHz to rad/us."""
    out = np.asarray(value, dtype=float) * _scale(convention)
    return float(out) if out.ndim == 0 else out


def angular_to_mhz(value, convention="angular"):
    """Inverse of :func:`mhz_to_angular`."""
    out = np.asarray(value, dtype=float) / _scale(convention)
    return float(out) if out.ndim == 0 else out


def ns_to_us(value: float) -> float:
    return float(value) * 1e-3


def us_to_ns(value: float) -> float:
    return float(value) * 1e3


def kelvin_to_angular_frequency(temperature: float) -> float:
    """Thermal angular frequency k_B T / hbar in rad/us.

    Raises
    ------
    DomainError
        If the temperature is not strictly positive and finite.
    """
    temperature = float(temperature)
    if not np.isfinite(temperature) or temperature <= 0.0:
        raise DomainError(f"temperature must be positive and finite, got {temperature!r}")
    return KB_OVER_HBAR * temperature


# --- spectral densities --------------------------------------------------------

@dataclass(frozen=True)
class Ohmic:
    """Ohmic density J(w) = eta * w * exp(-w / omega_c)."""

    eta: float
    omega_c: float

    def __post_init__(self):
        if not (np.isfinite(self.eta) and self.eta >= 0.0):
            raise ValidationError(f"eta must be >= 0, got {self.eta!r}")
        if not (np.isfinite(self.omega_c) and self.omega_c > 0.0):
            raise ValidationError(f"omega_c must be > 0, got {self.omega_c!r}")

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.eta * omega * np.exp(-omega / self.omega_c)

    def upper_limit(self, multiplier: float) -> float:
        return multiplier * self.omega_c


@dataclass(frozen=True)
class Tabulated:
    """Sampled density, linearly interpolated and zero outside the grid."""

    omega: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if w.ndim != 1 or w.shape != v.shape or w.size < 2:
            raise ValidationError("tabulated density needs matching 1-D grids of length >= 2")
        if np.any(np.diff(w) <= 0.0) or w[0] < 0.0:
            raise ValidationError("tabulated omega grid must be non-negative and strictly increasing")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise ValidationError("tabulated J values must be finite and >= 0")
        object.__setattr__(self, "omega", tuple(float(x) for x in w))
        object.__setattr__(self, "values", tuple(float(x) for x in v))

    def __call__(self, omega):
        return np.interp(np.asarray(omega, dtype=float), self.omega, self.values, left=0.0, right=0.0)

    def upper_limit(self, multiplier: float) -> float:
        return self.omega[-1]


@dataclass(frozen=True)
class DiscreteModes:
    """Finite set of bath modes, J(w) = sum_j lambda_j^2 delta(w - w_j)."""

    couplings: Tuple[float, ...]
    frequencies: Tuple[float, ...]

    def __post_init__(self):
        lam = tuple(float(x) for x in np.atleast_1d(self.couplings))
        w = tuple(float(x) for x in np.atleast_1d(self.frequencies))
        if len(lam) != len(w) or not w:
            raise ValidationError("couplings and frequencies must be non-empty and equally long")
        if any(not np.isfinite(x) or x <= 0.0 for x in w):
            raise ValidationError("mode frequencies must be > 0")
        object.__setattr__(self, "couplings", lam)
        object.__setattr__(self, "frequencies", w)

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.couplings) ** 2

    def __call__(self, omega):
        raise UnsupportedVariantError("a discrete-mode density has no pointwise value; it only enters sums")


@dataclass(frozen=True)
class CrossDensity:
    """Pointwise geometric mean sqrt(J(w) J'(w)) of two continuous densities."""

    first: "SpectralDensity"
    second: "SpectralDensity"

    def __call__(self, omega):
        return np.sqrt(self.first(omega) * self.second(omega))

    def upper_limit(self, multiplier: float) -> float:
        return min(self.first.upper_limit(multiplier), self.second.upper_limit(multiplier))


@dataclass(frozen=True)
class Composite:
    """Linear combination sum_i c_i J_i(w); identical terms are merged."""

    terms: Tuple[Tuple[float, "SpectralDensity"], ...] = field(default_factory=tuple)

    def __post_init__(self):
        merged: list = []
        for coef, density in self.terms:
            if isinstance(density, Composite):
                pieces = [(coef * c, d) for c, d in density.terms]
            else:
                pieces = [(coef, density)]
            for c, d in pieces:
                for i, (c0, d0) in enumerate(merged):
                    if d0 == d:
                        merged[i] = (c0 + c, d0)
                        break
                else:
                    merged.append((float(c), d))
        kept = tuple((c, d) for c, d in merged if c != 0.0 and not is_zero(d))
        object.__setattr__(self, "terms", kept)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        total = np.zeros_like(omega)
        for c, d in self.terms:
            total = total + c * d(omega)
        return total


SpectralDensity = Union[Ohmic, Tabulated, DiscreteModes, CrossDensity, Composite]


def is_zero(density: Optional[SpectralDensity]) -> bool:
    """True for ``None``, eta = 0 Ohmic, all-zero tables and empty sums."""
    if density is None:
        return True
    if isinstance(density, Ohmic):
        return density.eta == 0.0
    if isinstance(density, Tabulated):
        return not any(density.values)
    if isinstance(density, DiscreteModes):
        return not any(density.couplings)
    if isinstance(density, CrossDensity):
        return is_zero(density.first) or is_zero(density.second)
    if isinstance(density, Composite):
        return not density.terms
    raise UnsupportedVariantError(f"unknown spectral density {density!r}")


def evaluate_spectral_density(density: SpectralDensity, omega):
    """Evaluate J(w) for w >= 0.

    Raises
    ------
    DomainError
        For negative frequencies.
    UnsupportedVariantError
        For :class:`DiscreteModes`, which only appear inside mode sums.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0) or not np.all(np.isfinite(w)):
        raise DomainError("spectral density is only defined for finite w >= 0")
    value = density(w)
    return float(value) if np.ndim(omega) == 0 else value


def cross_density(first: SpectralDensity, second: SpectralDensity) -> SpectralDensity:
    """Return Jbar = sqrt(J J') for the common-bath cross coupling.

    Two Ohmic densities combine to another Ohmic density; matching discrete
    mode sets combine mode by mode (lambda_j lambda'_j); anything else is
    evaluated pointwise.
    """
    if first == second:
        return first
    if isinstance(first, Ohmic) and isinstance(second, Ohmic):
        omega_c = 2.0 * first.omega_c * second.omega_c / (first.omega_c + second.omega_c)
        return Ohmic(float(np.sqrt(first.eta * second.eta)), omega_c)
    if isinstance(first, DiscreteModes) or isinstance(second, DiscreteModes):
        if not (isinstance(first, DiscreteModes) and isinstance(second, DiscreteModes)):
            raise UnsupportedVariantError("cannot mix discrete and continuous common-bath densities")
        if first.frequencies != second.frequencies:
            raise UnsupportedVariantError("discrete common-bath densities must share mode frequencies")
        products = np.asarray(first.couplings) * np.asarray(second.couplings)
        if np.any(products < 0.0):
            raise UnsupportedConfigurationError("opposite-sign common couplings are not representable as sqrt(J J')")
        return DiscreteModes(tuple(np.sqrt(products)), first.frequencies)
    return CrossDensity(first, second)


# --- bath topology -------------------------------------------------------------

#: Coherence pairs (n, m), 1-based, in the order used throughout.
PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

#: Multiplier of Upsilon[Jtilde_nm] in the decay exponent of rho_nm.
PAIR_WEIGHTS = {(1, 2): 2.0, (1, 3): 2.0, (1, 4): 8.0, (2, 3): 2.0, (2, 4): 2.0, (3, 4): 2.0}


@dataclass(frozen=True)
class BathTopology:
    """Coupling of both qubits to the common bath and to optional private baths.

    Parameters
    ----------
    common : SpectralDensity
        J(w), qubit 1 to the common bath.
    common_prime : SpectralDensity, optional
        J'(w), qubit 2 to the common bath; defaults to ``common``.
    individual_1, individual_2 : SpectralDensity, optional
        J_1(w), J_2(w) of the private baths.
    """

    common: SpectralDensity
    common_prime: Optional[SpectralDensity] = None
    individual_1: Optional[SpectralDensity] = None
    individual_2: Optional[SpectralDensity] = None

    @property
    def j(self) -> SpectralDensity:
        return self.common

    @property
    def j_prime(self) -> SpectralDensity:
        return self.common if self.common_prime is None else self.common_prime

    @property
    def cross(self) -> SpectralDensity:
        if is_zero(self.j) or is_zero(self.j_prime):
            return Composite(())
        return cross_density(self.j, self.j_prime)

    @property
    def is_symmetric(self) -> bool:
        """J' = J and no private baths: the single-common-bath model."""
        return self.j_prime == self.j and is_zero(self.individual_1) and is_zero(self.individual_2)

    def pair_density(self, n: int, m: int) -> Composite:
        """Effective density Jtilde_nm governing the decay of rho_nm."""
        n, m = sorted((n, m))
        j, jp, jb = self.j, self.j_prime, self.cross
        j1 = self.individual_1 if self.individual_1 is not None else Composite(())
        j2 = self.individual_2 if self.individual_2 is not None else Composite(())
        table = {
            (1, 2): ((1.0, jp), (1.0, j2)),
            (1, 3): ((1.0, j), (1.0, j1)),
            (1, 4): ((0.25, j), (0.25, jp), (0.5, jb), (0.25, j1), (0.25, j2)),
            (2, 3): ((1.0, j), (1.0, jp), (-2.0, jb), (1.0, j1), (1.0, j2)),
            (2, 4): ((1.0, j), (1.0, j1)),
            (3, 4): ((1.0, jp), (1.0, j2)),
        }
        if (n, m) not in table:
            raise ValidationError(f"({n}, {m}) is not an off-diagonal pair of the 4-level basis")
        return Composite(table[(n, m)])


# --- two-qubit states ------------------------------------------------------------

BASIS_LABELS = ("g1g2", "g1e2", "e1g2", "e1e2")

PHASE_MATRIX = np.array([[0, 2, 2, 0],
                         [-2, 0, 0, -2],
                         [-2, 0, 0, -2],
                         [0, 2, 2, 0]], dtype=np.int64)
PHASE_MATRIX.setflags(write=False)

DECAY_MATRIX = np.array([[0, 2, 2, 8],
                         [2, 0, 0, 2],
                         [2, 0, 0, 2],
                         [8, 2, 2, 0]], dtype=np.int64)
DECAY_MATRIX.setflags(write=False)


def as_density_matrix(rho, atol: float = 1e-12, eig_tol: float = 1e-10) -> np.ndarray:
    """Validate and return a 4x4 two-qubit density matrix as a complex array.

    Raises
    ------
    ValidationError
        If the matrix is not 4x4, Hermitian, unit-trace and positive
        semidefinite within the given tolerances.
    """
    rho = np.array(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=atol):
        raise ValidationError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValidationError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -eig_tol:
        raise ValidationError("density matrix has a negative eigenvalue")
    return rho


def density_from_amplitudes(amplitudes: Sequence[complex]) -> np.ndarray:
    """Projector onto a normalized copy of the given 4-amplitude state."""
    psi = np.asarray(amplitudes, dtype=complex).reshape(4)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValidationError("state vector has zero norm")
    psi = psi / norm
    return np.outer(psi, psi.conj())


def plus_plus() -> np.ndarray:
    """|++><++|, the default initial state."""
    return density_from_amplitudes([0.5, 0.5, 0.5, 0.5])
