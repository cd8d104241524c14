"""Quantum-speed-limit time for the decohering qubit.

The open-system bound is tau_p = sin^2(B) / E_p over p in {1, 2, inf}, with
B the Bures angle between the initial pure state and the evolved state and
E_p the time average of ||L_t rho_t||_p; the QSL time is the largest of the
three.  Because L_t rho_t is Hermitian and traceless here, its two singular
values coincide, the three norms are proportional, and tau_inf always wins.

For the excited initial state the bound collapses to the population form

    tau_qsl = tau (1 - P_tau) / int_0^tau |dP/dt| dt,

which is what the sweep commands evaluate.  The |dP/dt| integrand has kinks
at its zeros and a sqrt(t) branch at t = 0 (band-gap model), so the integral
is split at bisection-located zeros and the first piece is integrated in
u = sqrt(t), where the integrand is analytic.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .dynamics import QubitDensityMatrix, apply_map
from .errors import DegenerateEvolutionError, DomainError
from .reservoirs import bt, sample_trace
from . import reservoirs as _res

__all__ = ["QslResult", "bures_angle", "schatten_norm",
           "qsl_time_general", "qsl_time_excited"]

_HEAD_SPAN = 0.05        # max extent of the sqrt-substituted first piece
_HEAD_NODES = 128        # u-grid intervals on the first piece


@dataclass(frozen=True)
class QslResult:
    """QSL evaluation at driving time tau: the three p-bounds, their max,
    the Bures angle reached, and the time-averaged generator norms."""
    tau: float
    tau_qsl: float
    tau_p: dict
    bures_angle: float
    E_p: dict


def bures_angle(psi0, rho_tau):
    """Bures angle arccos sqrt(<psi0| rho_tau |psi0>) for pure psi0."""
    if not psi0.is_pure:
        raise DomainError("bures_angle requires a pure initial state")
    # amplitude vector of psi0 up to global phase
    if psi0.rho11 > 0.5:
        v = np.array([np.sqrt(psi0.rho11),
                      np.conj(psi0.rho10) / np.sqrt(psi0.rho11)])
    else:
        v = np.array([psi0.rho10 / np.sqrt(1.0 - psi0.rho11),
                      np.sqrt(1.0 - psi0.rho11)])
    fid = float(np.real(np.conj(v) @ rho_tau.matrix @ v))
    fid = min(max(fid, 0.0), 1.0)
    return math.acos(math.sqrt(fid))


def schatten_norm(m, p):
    """Schatten p-norm of a 2x2 matrix from its singular values."""
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix entries must be finite")
    sv = np.linalg.svd(m, compute_uv=False)
    if p == 1:
        return float(np.sum(sv))
    if p == 2:
        return float(np.sqrt(np.sum(sv ** 2)))
    if p == math.inf:
        return float(np.max(sv))
    raise DomainError(f"p must be 1, 2 or inf, got {p!r}")


def _segment_bounds(trace):
    return np.concatenate([[0.0], trace.crossings, [trace.tau]])


def _split_integral(trace, integrand, grid_vals):
    """Integrate a non-negative integrand over [0, tau], splitting at the
    dP/dt zeros recorded in the trace and substituting u = sqrt(t) on the
    first piece.  grid_vals holds the integrand on trace.grid (reused to
    avoid re-evaluating the model); integrand(t_array) serves the head piece
    and is called with strictly positive times."""
    t = trace.grid
    bounds = _segment_bounds(trace)
    tau = trace.tau
    # head piece: land its end on an existing grid node unless the first
    # dP/dt zero arrives sooner
    t_head = min(_HEAD_SPAN, tau)
    if bounds.size > 2:
        t_head = min(t_head, bounds[1])
    i_head = min(np.searchsorted(t, t_head), t.size - 1)
    t_head = t[i_head]
    u = np.linspace(0.0, np.sqrt(t_head), _HEAD_NODES + 1)
    g = np.zeros_like(u)
    g[1:] = 2.0 * u[1:] * integrand(u[1:] ** 2)
    total = abs(float(simpson(g, x=u)))
    # remaining pieces on the sampled grid, one per monotone segment
    starts = np.concatenate([[t_head], bounds[1:-1]])
    ends = np.concatenate([bounds[1:-1], [tau]])
    t_tail = t[i_head:]
    vals = grid_vals[i_head:]
    for a, c in zip(starts, ends):
        if c <= a:
            continue
        mask = (t_tail >= a) & (t_tail <= c)
        if np.count_nonzero(mask) >= 2:
            total += abs(float(simpson(vals[mask], x=t_tail[mask])))
        else:
            ts = np.linspace(a, c, 9)
            total += abs(float(simpson(integrand(ts), x=ts)))
    return total


def integrate_abs_dpdt(trace):
    """int_0^tau |dP/dt| dt by kink-split composite quadrature."""
    model = trace.model

    def integrand(ts):
        return np.abs(_res._dpdt(model, ts))

    return _split_integral(trace, integrand, np.abs(trace.dPdt))


def _generator_norm_integrals(psi0, trace):
    """Time integrals of ||L_t rho_t||_p for p = 1, 2, inf.

    L_t rho_t equals the exact time derivative of the mapped state,
    [[a, c], [conj(c), -a]] with a = psi11 dP/dt and c = psi10 b', which
    stays finite through zeros of b."""
    model = trace.model
    p11, p10 = psi0.rho11, complex(psi0.rho10)

    def singvals(a, c):
        mats = np.empty(a.shape + (2, 2), dtype=complex)
        mats[..., 0, 0] = a
        mats[..., 0, 1] = c
        mats[..., 1, 0] = np.conj(c)
        mats[..., 1, 1] = -a
        return np.linalg.svd(mats, compute_uv=False)

    def norms(ts):
        ts = np.asarray(ts)
        b, b_dot = _res._bt_pair(model, ts)
        return singvals(p11 * 2.0 * (b_dot * np.conj(b)).real, p10 * b_dot)

    sv_grid = singvals(p11 * trace.dPdt, p10 * trace.b_dot)
    integrals = {}
    for p, reduce_sv in ((1, lambda sv: sv.sum(axis=-1)),
                         (2, lambda sv: np.sqrt((sv ** 2).sum(axis=-1))),
                         (math.inf, lambda sv: sv.max(axis=-1))):
        integrals[p] = _split_integral(
            trace, lambda ts, red=reduce_sv: red(norms(ts)),
            reduce_sv(sv_grid))
    return integrals


def qsl_time_general(psi0, model, tau, step=1e-3):
    """Full three-norm QSL bound for an arbitrary pure initial state."""
    if not isinstance(psi0, QubitDensityMatrix):
        psi0 = QubitDensityMatrix(*psi0)
    if not psi0.is_pure:
        raise DomainError("QSL bound is defined for pure initial states")
    trace = sample_trace(model, tau, step)
    integrals = _generator_norm_integrals(psi0, trace)
    if max(integrals.values()) == 0.0:
        raise DegenerateEvolutionError(
            "dynamics are frozen: all generator norms vanish on [0, tau]")
    rho_tau = apply_map(psi0, bt(model, tau))
    angle = bures_angle(psi0, rho_tau)
    e_p = {p: v / trace.tau for p, v in integrals.items()}
    tau_p = {p: math.sin(angle) ** 2 / e for p, e in e_p.items()}
    return QslResult(tau=trace.tau, tau_qsl=max(tau_p.values()),
                     tau_p=tau_p, bures_angle=angle, E_p=e_p)


def qsl_time_excited(model, tau, step=1e-3):
    """Population-form QSL time for the excited initial state."""
    trace = sample_trace(model, tau, step)
    return qsl_time_excited_from_trace(trace)


def qsl_time_excited_from_trace(trace):
    """Same as qsl_time_excited but reusing an existing trace."""
    absint = integrate_abs_dpdt(trace)
    if absint == 0.0:
        raise DegenerateEvolutionError(
            "dynamics are frozen: int |dP/dt| vanishes on [0, tau]")
    p_tau = float(trace.P[-1])
    return trace.tau * (1.0 - p_tau) / absint
