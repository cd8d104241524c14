"""Shared oracles for the test suite."""
import numpy as np
import pytest
from scipy.integrate import solve_ivp


def _jc_ode_b(gamma0, lam, t_grid):
    """Damped-cavity decoherence function by direct ODE integration.

    The exponential memory kernel makes the convolution local: with
    z(t) = int_0^t (gamma0 lam / 2) e^{-lam (t-s)} b(s) ds the amplitude
    obeys b' = -z, z' = (gamma0 lam / 2) b - lam z.  This route never sees
    the closed-form cosh/sinh expression, so it is an independent oracle.
    """
    def rhs(_, y):
        b = y[0] + 1j * y[1]
        z = y[2] + 1j * y[3]
        db = -z
        dz = 0.5 * gamma0 * lam * b - lam * z
        return [db.real, db.imag, dz.real, dz.imag]

    t_grid = np.asarray(t_grid, dtype=float)
    sol = solve_ivp(rhs, (0.0, float(t_grid[-1])), [1.0, 0.0, 0.0, 0.0],
                    t_eval=t_grid, method="DOP853", rtol=1e-12, atol=1e-14)
    assert sol.success, sol.message
    return sol.y[0] + 1j * sol.y[1]


@pytest.fixture(scope="session")
def jc_ode_oracle():
    return _jc_ode_b
