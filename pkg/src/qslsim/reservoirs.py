"""Decoherence functions for a two-level emitter in two structured reservoirs.

PBG reservoir (isotropic photonic band gap, upper band edge): with time in
units of 1/beta and detuning delta = (omega0 - omega_edge)/beta, the excited
amplitude obeys b~(s) = 1/(s - i^{3/2}/sqrt(s - i delta)) in the Laplace
picture.  The squared pole condition is the cubic

    s^3 - i delta s^2 + i = (s + x1)(s + x2)(s + x3),

and inverting the transform in closed form gives

    b(t) = sum_l e^{-x_l t} [x_l^2 + i delta x_l
           + i^{3/2} q_l erf(q_l sqrt(t))] / prod_{m != l} (x_m - x_l),

with q_l = sqrt(-(x_l + i delta)), principal branches throughout.  Squaring
the pole condition can admit non-physical-sheet roots, so the closed form is
never trusted blindly: sample points are checked against direct Talbot
contour inversion (see laplace module and the validation suites).

Damped-cavity reservoir (resonant Lorentzian coupling, width lambda, Markov
rate gamma0):

    b(t) = e^{-lambda t/2} [cosh(Omega t/2) + (lambda/Omega) sinh(Omega t/2)],
    Omega = sqrt(lambda^2 - 2 gamma0 lambda),

equivalently the solution of b'' + lambda b' + (gamma0 lambda / 2) b = 0 with
b(0) = 1, b'(0) = 0.  Omega may be imaginary (oscillatory revivals) or zero
(critical point, handled by the analytic series limit).
"""
import cmath
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy import constants as _const

from .errors import (ConfigError, ContractivityError, DegenerateRootsError,
                     DomainError, SingularityError)
from .specfun import erf_complex

__all__ = [
    "PbgModel", "JcModel", "CubicRoots", "DecoherenceTrace",
    "solve_cubic", "pbg_bt_laplace", "pbg_bt", "jc_bt",
    "bt", "bt_derivative", "sample_trace", "physical_beta",
]

# i^{3/2} on the principal branch, e^{i 3 pi / 4}.  Read at call time in
# pbg_bt / pbg_bt_dot so branch-flip fault injection propagates.
_IBETA32 = 1j ** 1.5

_DEGENERACY_TOL = 1e-9
_BISECT_ITERS = 22          # step/2^22 < 1e-9 for any step <= 4e-3
_OMEGA_SERIES_CUT = 1e-6


@dataclass(frozen=True)
class PbgModel:
    """Band-gap reservoir; delta is the edge detuning in units of beta."""
    delta: float

    def __post_init__(self):
        if not np.isfinite(self.delta):
            raise DomainError("delta must be finite")


@dataclass(frozen=True)
class JcModel:
    """Damped-cavity reservoir; gamma0 is the Markov decay scale and lam
    the spectral width, in shared inverse-time units."""
    gamma0: float
    lam: float

    def __post_init__(self):
        if not (np.isfinite(self.gamma0) and self.gamma0 > 0):
            raise DomainError("gamma0 must be finite and positive")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise DomainError("lam must be finite and positive")


@dataclass(frozen=True)
class CubicRoots:
    """Parameters x_l with s^3 - i delta s^2 + i = (s+x1)(s+x2)(s+x3)."""
    x1: complex
    x2: complex
    x3: complex

    @property
    def as_array(self):
        return np.array([self.x1, self.x2, self.x3])


@dataclass(frozen=True)
class DecoherenceTrace:
    """Sampled decoherence history on [0, tau].

    grid is strictly increasing with grid[0] = 0; crossings lists the
    bisection-located zeros of dPdt, each bracketed by two grid nodes no more
    than 1e-9 apart.
    """
    model: object
    tau: float
    step: float
    grid: np.ndarray
    b: np.ndarray
    b_dot: np.ndarray
    P: np.ndarray
    dPdt: np.ndarray
    crossings: np.ndarray


@lru_cache(maxsize=None)
def _solve_cubic_cached(delta):
    # Cardano on the monic cubic s^3 + a2 s^2 + a0, a2 = -i delta, a0 = i
    a2 = -1j * delta
    a0 = 1j
    p = -a2 * a2 / 3.0
    q = 2.0 * a2 ** 3 / 27.0 + a0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    sq = np.sqrt(complex(disc))
    big = -q / 2.0 + sq
    if abs(-q / 2.0 - sq) > abs(big):
        big = -q / 2.0 - sq
    c = big ** (1.0 / 3.0)
    omega = np.exp(2j * np.pi / 3.0)
    us = np.array([c, c * omega, c * omega ** 2])
    s_roots = us - p / (3.0 * us) - a2 / 3.0
    # Newton polish wipes out the cancellation in the u - p/(3u) form
    for _ in range(3):
        s_roots = s_roots - (s_roots ** 3 - 1j * delta * s_roots ** 2 + 1j) \
            / (3 * s_roots ** 2 - 2j * delta * s_roots)
    x = -s_roots
    order = np.lexsort((x.imag, x.real))
    x = x[order]
    return CubicRoots(complex(x[0]), complex(x[1]), complex(x[2]))


def solve_cubic(delta):
    """Roots x_l of the factorized pole cubic, deterministically ordered by
    real part (ties by imaginary part)."""
    if not np.isfinite(delta):
        raise DomainError("delta must be finite")
    return _solve_cubic_cached(float(delta))


@lru_cache(maxsize=None)
def _pbg_coeffs(delta):
    """Per-root quantities (x_l, q_l, A_l, D_l) of the closed form."""
    x = solve_cubic(delta).as_array
    sep = min(abs(x[0] - x[1]), abs(x[0] - x[2]), abs(x[1] - x[2]))
    if sep < _DEGENERACY_TOL:
        raise DegenerateRootsError(delta, sep)
    q = np.sqrt(-(x + 1j * delta))
    a = x * x + 1j * delta * x
    d = np.array([(x[1] - x[0]) * (x[2] - x[0]),
                  (x[0] - x[1]) * (x[2] - x[1]),
                  (x[0] - x[2]) * (x[1] - x[2])])
    return x, q, a, d


def pbg_bt_laplace(delta, s):
    """Laplace transform b~(s) = 1/(s - i^{3/2}/sqrt(s - i delta)).

    Accepts python/numpy complex or mpmath values (the contour-inversion
    oracle calls it with mpmath nodes).  Principal branch for the square
    root; poles and the branch point raise SingularityError.
    """
    if not np.isfinite(delta):
        raise DomainError("delta must be finite")
    if isinstance(s, (mp.mpf, mp.mpc)):
        k = mp.power(mp.mpc(0, 1), mp.mpf(3) / 2)
        root = mp.sqrt(s - mp.mpc(0, 1) * delta)
        try:
            den = s - k / root
            return 1 / den
        except ZeroDivisionError:
            raise SingularityError(f"b~(s) singular at s={s}") from None
    s = complex(s)
    root = cmath.sqrt(s - 1j * delta)
    try:
        den = s - _IBETA32 / root
        value = 1.0 / den
    except ZeroDivisionError:
        raise SingularityError(f"b~(s) singular at s={s}") from None
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise SingularityError(f"b~(s) singular at s={s}")
    return value


def _pbg_pair(delta, t):
    """b and db/dt in one pass; the erf evaluations are shared.

    The d(erf)/dt pieces ~ t^{-1/2} cancel exactly across the three roots
    (sum_l q_l^2 / D_l = 0 by Vieta), so the derivative is the term-wise
    -x_l multiple of the same sum."""
    x, q, a, d = _pbg_coeffs(delta)
    b32 = _IBETA32
    sq_t = np.sqrt(t)
    b = np.zeros(t.shape, dtype=complex)
    b_dot = np.zeros(t.shape, dtype=complex)
    for l in range(3):
        term = np.exp(-x[l] * t) \
            * (a[l] + b32 * q[l] * erf_complex(q[l] * sq_t)) / d[l]
        b += term
        b_dot -= x[l] * term
    return b, b_dot


def _check_time(t, positive=False):
    ta = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(ta)):
        raise DomainError("time must be finite")
    if positive:
        if np.any(ta <= 0.0):
            raise DomainError("time must be strictly positive")
    elif np.any(ta < 0.0):
        raise DomainError("time must be non-negative")
    return ta.ravel(), ta.shape, np.isscalar(t) or ta.shape == ()


def pbg_bt(delta, t):
    """Closed-form band-gap decoherence function b(t) for t >= 0."""
    flat, shape, scalar = _check_time(t)
    out = _pbg_pair(float(delta), flat)[0]
    out[flat == 0.0] = 1.0
    return complex(out[0]) if scalar else out.reshape(shape)


def _jc_pair(model, flat):
    """b and db/dt of the damped-cavity model in one pass."""
    om = np.sqrt(complex(model.lam ** 2 - 2.0 * model.gamma0 * model.lam))
    xx = 0.5 * om * flat
    if abs(om) * (np.max(flat) if flat.size else 0.0) < _OMEGA_SERIES_CUT:
        # sinh(x)/Omega by series; exact analytic limit at Omega = 0
        shc = 0.5 * flat * (1.0 + xx * xx / 6.0 + xx ** 4 / 120.0)
    else:
        shc = np.sinh(xx) / om
    decay = np.exp(-0.5 * model.lam * flat)
    return (decay * (np.cosh(xx) + model.lam * shc),
            -model.gamma0 * model.lam * decay * shc)


def jc_bt(model, t):
    """Damped-cavity decoherence function b(t) for t >= 0."""
    flat, shape, scalar = _check_time(t)
    out = _jc_pair(model, flat)[0]
    out[flat == 0.0] = 1.0
    return complex(out[0]) if scalar else out.reshape(shape)


def bt(model, t):
    """Decoherence function of either reservoir model at t >= 0."""
    if isinstance(model, PbgModel):
        return pbg_bt(model.delta, t)
    if isinstance(model, JcModel):
        return jc_bt(model, t)
    raise DomainError(f"unknown reservoir model {model!r}")


def bt_derivative(model, t):
    """Analytic db/dt for t > 0 (the one-sided t=0 limit is not exposed)."""
    flat, shape, scalar = _check_time(t, positive=True)
    out = _bt_pair(model, flat)[1]
    return complex(out[0]) if scalar else out.reshape(shape)


def _bt_pair(model, flat):
    """(b, db/dt) on an array of strictly positive times."""
    if isinstance(model, PbgModel):
        return _pbg_pair(model.delta, flat)
    if isinstance(model, JcModel):
        return _jc_pair(model, flat)
    raise DomainError(f"unknown reservoir model {model!r}")


def _dpdt(model, flat):
    """d|b|^2/dt = 2 Re(b' conj(b)) on an array of strictly positive times."""
    b, bd = _bt_pair(model, flat)
    return 2.0 * (bd * np.conj(b)).real


def sample_trace(model, tau, step=1e-3):
    """Sample b, b', P = |b|^2, dP/dt on a uniform grid over [0, tau], with
    every sign change of dP/dt located by bisection to 1e-9 and bracketed by
    two inserted grid nodes."""
    if not (np.isfinite(tau) and tau > 0):
        raise DomainError("tau must be finite and positive")
    if not (np.isfinite(step) and step > 0):
        raise DomainError("step must be finite and positive")
    if step >= tau:
        raise ConfigError(f"step {step} must be smaller than tau {tau}")
    n = max(int(round(tau / step)), 2)
    t = np.linspace(0.0, tau, n + 1)
    b = np.empty(t.shape, dtype=complex)
    b_dot = np.empty_like(b)
    b[0], b_dot[0] = 1.0, 0.0        # exact initial condition, b'(0) = 0
    b[1:], b_dot[1:] = _bt_pair(model, t[1:])
    dp = 2.0 * (b_dot * np.conj(b)).real
    sign = np.sign(dp)
    idx = np.where(sign[:-1] * sign[1:] < 0)[0]
    if idx.size:
        lo, hi, flo = t[idx].copy(), t[idx + 1].copy(), dp[idx].copy()
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            fm = _dpdt(model, mid)
            same = flo * fm > 0
            lo = np.where(same, mid, lo)
            flo = np.where(same, fm, flo)
            hi = np.where(same, hi, mid)
        crossings = 0.5 * (lo + hi)
        added = np.column_stack([lo, hi]).ravel()
        b_add, bd_add = _bt_pair(model, added)
        where = np.searchsorted(t, added)
        t = np.insert(t, where, added)
        b = np.insert(b, where, b_add)
        b_dot = np.insert(b_dot, where, bd_add)
        # a bracket end can coincide with a grid node; drop the duplicate
        keep = np.empty(t.size, dtype=bool)
        keep[0] = True
        keep[1:] = np.diff(t) > 0
        t, b, b_dot = t[keep], b[keep], b_dot[keep]
        dp = 2.0 * (b_dot * np.conj(b)).real
        dp[0] = 0.0
    else:
        crossings = np.array([])
    P = np.abs(b) ** 2
    if P.max() > 1.0 + 1e-12:
        raise ContractivityError(
            f"|b|^2 exceeded 1 by {P.max() - 1.0:.2e} (model {model!r})")
    return DecoherenceTrace(model=model, tau=float(tau), step=float(step),
                            grid=t, b=b, b_dot=b_dot, P=P, dPdt=dp,
                            crossings=crossings)


def physical_beta(omega0, dipole):
    """Band-edge frequency scale beta in Hz from the transition frequency
    omega0 (rad/s) and dipole moment (C m): beta^{3/2} = omega0^{7/2} d^2
    / (6 pi eps0 hbar c^3)."""
    if not (np.isfinite(omega0) and omega0 > 0):
        raise DomainError("omega0 must be finite and positive")
    if not (np.isfinite(dipole) and dipole > 0):
        raise DomainError("dipole must be finite and positive")
    beta32 = omega0 ** 3.5 * dipole ** 2 / (
        6.0 * np.pi * _const.epsilon_0 * _const.hbar * _const.c ** 3)
    return beta32 ** (2.0 / 3.0)
