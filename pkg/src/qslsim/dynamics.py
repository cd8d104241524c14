"""Qubit state, the decoherence map, and its time-local generator.

The single-excitation dynamics act on the (rho11, rho10) pair as

    rho11 -> rho11 |b|^2,   rho10 -> rho10 b,

with rho00 and rho01 implied by trace and Hermiticity.  The matching
time-local generator is

    L rho = i eps [P1, rho] + gam (P1 rho + rho P1 - 2 sm rho sp),
    eps = Im(b'/b),  gam = Re(b'/b),

where P1 = sp sm projects on the excited state.  Note the sign convention:
the dissipator enters with +gam and gam itself is negative during monotone
decay (this differs from the common Lindblad normalization where the rate
stays positive; we keep the convention literal and test the derived identity
dP/dt = 2 gam P instead of a sign).  Basis order is (|1>, |0>), excited
first, everywhere.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ContractivityError, DomainError, SingularRateError

__all__ = ["QubitDensityMatrix", "GeneratorRates", "SIGMA_PLUS",
           "SIGMA_MINUS", "EXCITED_PROJECTOR", "apply_map", "rates_from_b",
           "generator_action"]

SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
EXCITED_PROJECTOR = SIGMA_PLUS @ SIGMA_MINUS

_STATE_TOL = 1e-12


@dataclass(frozen=True)
class QubitDensityMatrix:
    """Hermitian unit-trace qubit state stored as (rho11, rho10)."""
    rho11: float
    rho10: complex

    def __post_init__(self):
        r11 = self.rho11
        if not (np.isfinite(r11) and -_STATE_TOL <= r11 <= 1.0 + _STATE_TOL):
            raise DomainError(f"rho11 = {r11} outside [0, 1]")
        c = complex(self.rho10)
        if not (np.isfinite(c.real) and np.isfinite(c.imag)):
            raise DomainError("rho10 must be finite")
        if abs(c) ** 2 > r11 * (1.0 - r11) + _STATE_TOL:
            raise DomainError(
                f"|rho10|^2 = {abs(c)**2:.3e} violates positivity bound "
                f"rho11(1-rho11) = {r11 * (1.0 - r11):.3e}")

    @property
    def matrix(self):
        """Full 2x2 matrix in the (|1>, |0>) basis."""
        return np.array([[self.rho11, self.rho10],
                         [np.conj(self.rho10), 1.0 - self.rho11]],
                        dtype=complex)

    @property
    def is_pure(self):
        return abs(abs(self.rho10) ** 2
                   - self.rho11 * (1.0 - self.rho11)) <= _STATE_TOL

    @classmethod
    def excited(cls):
        return cls(1.0, 0.0)

    @classmethod
    def ground(cls):
        return cls(0.0, 0.0)

    @classmethod
    def from_bloch(cls, x, y, z):
        """State at Bloch vector (x, y, z); z = +1 is the excited pole."""
        r = np.sqrt(x * x + y * y + z * z)
        if r > 1.0 + _STATE_TOL:
            raise DomainError(f"Bloch vector length {r} exceeds 1")
        return cls(0.5 * (1.0 + z), 0.5 * (x - 1j * y))


@dataclass(frozen=True)
class GeneratorRates:
    """Time-local Lamb shift eps and rate gam, both Im/Re of b'/b."""
    epsilon: float
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and np.isfinite(self.gamma)):
            raise DomainError("rates must be finite")


def apply_map(rho0, b):
    """Evolve rho0 under the decoherence map at amplitude b, |b| <= 1."""
    if abs(b) > 1.0 + _STATE_TOL:
        raise ContractivityError(f"|b| = {abs(b)} exceeds 1")
    return QubitDensityMatrix(rho0.rho11 * abs(b) ** 2, rho0.rho10 * b)


def rates_from_b(b, b_dot):
    """Generator rates (eps, gam) = (Im, Re) of b'/b; b = 0 is a map node
    where the rates blow up and callers must excise the instant."""
    if b == 0:
        raise SingularRateError("rates undefined at a zero of b")
    quot = complex(b_dot) / complex(b)
    if not (np.isfinite(quot.real) and np.isfinite(quot.imag)):
        raise SingularRateError(f"rates overflow near a zero of b (|b|={abs(b):.3e})")
    return GeneratorRates(epsilon=quot.imag, gamma=quot.real)


def generator_action(rho, rates):
    """Right-hand side L rho of the time-local master equation."""
    m = rho.matrix
    p1 = EXCITED_PROJECTOR
    commutator = p1 @ m - m @ p1
    dissipator = p1 @ m + m @ p1 - 2.0 * (SIGMA_MINUS @ m @ SIGMA_PLUS)
    return 1j * rates.epsilon * commutator + rates.gamma * dissipator
