"""Self-validation suites: every closed form in the package is checked here
against an independent numerical route (contour inversion, ODE integration,
extended precision, brute-force linear algebra).

Each suite returns a CheckResult; run_all_checks() runs them all.  The
suites are deliberately small so a full run stays interactive, but each one
is sensitive to the failure mode it guards (for example, flipping the
i^{3/2} branch in the band-gap closed form is caught by the Talbot suite).
"""
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp

from . import nonmarkov, qsl, reservoirs, specfun
from .laplace import inverse_laplace_numeric

__all__ = ["CheckResult", "run_all_checks", "format_report", "ALL_SUITES"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    passed: bool
    worst: float
    tolerance: float
    detail: str


def _talbot_degree_hint(delta, t):
    # contour degree grows with the oscillation scale t*(|delta| + 2)
    return max(24, int(1.8 * t * (abs(delta) + 2.0)))


def check_talbot_inversion():
    """Band-gap closed form against direct contour inversion."""
    worst = 0.0
    at = ""
    for delta in (-10.0, 0.0, 10.0):
        fhat = lambda s, d=delta: reservoirs.pbg_bt_laplace(d, s)
        for t in (0.5, 2.0, 7.0):
            ref = inverse_laplace_numeric(
                fhat, t, accuracy_target=1e-8,
                degree_hint=_talbot_degree_hint(delta, t))
            err = abs(ref - reservoirs.pbg_bt(delta, t))
            if err > worst:
                worst, at = err, f"delta={delta}, t={t}"
    return CheckResult("talbot-inversion", worst < 1e-6, worst, 1e-6,
                       f"max |closed form - inversion| at {at}")


def check_jc_ode():
    """Damped-cavity closed form against the memory-kernel ODE."""
    worst = 0.0
    at = ""
    grid = np.linspace(0.0, 20.0, 401)
    for gamma0, lam in ((1.0, 5.0), (1.0, 2.0), (1.0, 0.2)):
        def rhs(t, y, g=gamma0, l=lam):
            return [-y[2], -y[3],
                    0.5 * g * l * y[0] - l * y[2],
                    0.5 * g * l * y[1] - l * y[3]]
        sol = solve_ivp(rhs, (0.0, 20.0), [1.0, 0.0, 0.0, 0.0], t_eval=grid,
                        method="DOP853", rtol=1e-12, atol=1e-14)
        b_ode = sol.y[0] + 1j * sol.y[1]
        b_cf = reservoirs.jc_bt(reservoirs.JcModel(gamma0, lam), grid)
        err = float(np.max(np.abs(b_cf - b_ode)))
        if err > worst:
            worst, at = err, f"gamma0={gamma0}, lam={lam}"
    return CheckResult("jc-ode", worst < 1e-8, worst, 1e-8,
                       f"max |closed form - ODE| at {at}")


def check_blp_closed_form():
    """Telescoped backflow sum against the |dP/dt|-quadrature closed form."""
    worst = 0.0
    at = ""
    pair = nonmarkov.canonical_pair()
    for delta, tau in ((-10.0, 10.0), (-1.0, 10.0), (0.5, 5.0)):
        trace = reservoirs.sample_trace(reservoirs.PbgModel(delta), tau)
        n_sum = nonmarkov.blp_integral(pair, trace).value
        n_closed = nonmarkov.nonmarkovianity_closed(trace)
        err = abs(n_sum - n_closed)
        if err > worst:
            worst, at = err, f"delta={delta}, tau={tau}"
    return CheckResult("blp-closed-form", worst < 1e-8, worst, 1e-8,
                       f"max |interval sum - closed form| at {at}")


def check_qsl_identity():
    """Population-form QSL time against the backflow/trapping identity."""
    worst = 0.0
    at = ""
    pair = nonmarkov.canonical_pair()
    for delta, tau in ((-10.0, 10.0), (-1.0, 10.0), (0.5, 5.0)):
        trace = reservoirs.sample_trace(reservoirs.PbgModel(delta), tau)
        direct = qsl.qsl_time_excited_from_trace(trace)
        n_val = nonmarkov.blp_integral(pair, trace).value
        via_n = nonmarkov.qsl_from_nonmarkov(n_val, float(trace.P[-1]), tau)
        err = abs(direct - via_n) / tau
        if err > worst:
            worst, at = err, f"delta={delta}, tau={tau}"
    return CheckResult("qsl-identity", worst < 1e-6, worst, 1e-6,
                       f"max relative |direct - identity| at {at}")


def check_erf_oracle():
    """erf and w against extended-precision evaluation."""
    rng = np.random.default_rng(1804289383)
    n = 150
    # cover all three internal regions; stay clear of the overflow domain
    z = (rng.uniform(-12, 12, n) + 1j * rng.uniform(-12, 12, n))
    z = np.concatenate([z, rng.uniform(-30, 30, 40)
                        + 1j * rng.uniform(0, 30, 40)])
    worst = 0.0
    at = ""
    with mp.workdps(30):
        for zv in z:
            ref_w = complex(mp.exp(-mp.mpc(zv) ** 2)
                            * mp.erfc(-1j * mp.mpc(zv)))
            err = abs(specfun.faddeeva(zv) - ref_w) / max(abs(ref_w), 1.0)
            if err > worst:
                worst, at = err, f"w({zv:.3g})"
            if abs(zv.imag) <= 12:
                ref_e = complex(mp.erf(mp.mpc(zv)))
                err = abs(specfun.erf_complex(zv) - ref_e) \
                    / max(abs(ref_e), 1.0)
                if err > worst:
                    worst, at = err, f"erf({zv:.3g})"
    return CheckResult("erf-oracle", worst < 1e-10, worst, 1e-10,
                       f"max relative error at {at}")


def check_cubic_roots():
    """Cardano roots against the companion-matrix eigenvalue solver."""
    rng = np.random.default_rng(846930886)
    worst = 0.0
    at = ""
    for delta in rng.uniform(-20.0, 20.0, 50):
        x = reservoirs.solve_cubic(delta).as_array
        s = -x
        resid = float(np.max(np.abs(s ** 3 - 1j * delta * s ** 2 + 1j)))
        ref = np.roots([1.0, -1j * delta, 0.0, 1j])
        match = float(np.max(np.min(np.abs(s[:, None] - ref[None, :]),
                                    axis=1)))
        err = max(resid, match)
        if err > worst:
            worst, at = err, f"delta={delta:.4f}"
    return CheckResult("cubic-roots", worst < 1e-9, worst, 1e-9,
                       f"max residual/mismatch at {at}")


def check_norm_ratios():
    """Proportionality of the three generator-norm averages."""
    import math
    from .dynamics import QubitDensityMatrix
    psi0 = QubitDensityMatrix.excited()
    worst = -1.0
    at = ""
    for model, tau in ((reservoirs.PbgModel(-3.0), 4.0),
                       (reservoirs.JcModel(1.0, 5.0), 6.0)):
        res = qsl.qsl_time_general(psi0, model, tau)
        e1, e2, einf = res.E_p[1], res.E_p[2], res.E_p[math.inf]
        err = max(abs(e1 / (2.0 * einf) - 1.0),
                  abs(e2 / (math.sqrt(2.0) * einf) - 1.0))
        if err > worst:
            worst, at = err, f"{model!r}, tau={tau}"
    return CheckResult("norm-ratios", worst < 1e-12, worst, 1e-12,
                       f"max ratio deviation at {at}")


ALL_SUITES = (
    check_talbot_inversion,
    check_jc_ode,
    check_blp_closed_form,
    check_qsl_identity,
    check_erf_oracle,
    check_cubic_roots,
    check_norm_ratios,
)


def run_all_checks():
    return [suite() for suite in ALL_SUITES]


def format_report(results):
    lines = [f"{'suite':<18} {'status':<6} {'worst':>12} {'tol':>8}  detail"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.suite:<18} {status:<6} {r.worst:>12.3e} "
                     f"{r.tolerance:>8.0e}  {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results)} suites, {n_fail} failed")
    return "\n".join(lines)
