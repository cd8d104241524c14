"""State container, decoherence map, and time-local generator."""
import numpy as np
import pytest

from qslsim import (ContractivityError, DomainError, GeneratorRates, JcModel,
                    PbgModel, QubitDensityMatrix, SingularRateError,
                    apply_map, bt, bt_derivative, generator_action,
                    rates_from_b)
from qslsim.dynamics import EXCITED_PROJECTOR, SIGMA_MINUS, SIGMA_PLUS


def _random_state(rng):
    v = rng.normal(size=3)
    v *= rng.random() ** (1.0 / 3.0) / np.linalg.norm(v)
    return QubitDensityMatrix.from_bloch(*v)


# ------------------------------------------------------------------- state


def test_state_validation():
    QubitDensityMatrix(0.3, 0.2 + 0.1j)          # fine
    with pytest.raises(DomainError):
        QubitDensityMatrix(1.2, 0.0)
    with pytest.raises(DomainError):
        QubitDensityMatrix(-0.1, 0.0)
    with pytest.raises(DomainError):
        QubitDensityMatrix(0.5, 0.6)             # coherence above the bound
    with pytest.raises(DomainError):
        QubitDensityMatrix(0.5, np.nan)


def test_state_matrix_layout():
    rho = QubitDensityMatrix(0.3, 0.2 - 0.1j)
    m = rho.matrix
    assert m[0, 0] == 0.3 and m[1, 1] == 0.7
    assert m[0, 1] == 0.2 - 0.1j and m[1, 0] == 0.2 + 0.1j
    assert np.allclose(m, m.conj().T)
    assert np.trace(m) == 1.0


def test_state_constructors():
    assert QubitDensityMatrix.excited() == QubitDensityMatrix(1.0, 0.0)
    assert QubitDensityMatrix.ground() == QubitDensityMatrix(0.0, 0.0)
    north = QubitDensityMatrix.from_bloch(0.0, 0.0, 1.0)
    assert north == QubitDensityMatrix.excited()
    plus_y = QubitDensityMatrix.from_bloch(0.0, 1.0, 0.0)
    assert plus_y.rho10 == -0.5j
    with pytest.raises(DomainError):
        QubitDensityMatrix.from_bloch(1.0, 1.0, 0.0)


def test_purity_flag():
    assert QubitDensityMatrix.excited().is_pure
    assert QubitDensityMatrix.from_bloch(0.6, 0.0, 0.8).is_pure
    assert not QubitDensityMatrix(0.5, 0.0).is_pure


def test_pauli_module_constants():
    assert np.array_equal(SIGMA_PLUS @ SIGMA_MINUS, EXCITED_PROJECTOR)
    assert np.array_equal(EXCITED_PROJECTOR,
                          np.array([[1, 0], [0, 0]], dtype=complex))


# --------------------------------------------------------------------- map


def test_apply_map_examples():
    rho = QubitDensityMatrix(0.5, 0.3 + 0.2j)
    out = apply_map(rho, 0.5j)
    assert out.rho11 == 0.5 * 0.25
    assert out.rho10 == (0.3 + 0.2j) * 0.5j
    assert apply_map(rho, 1.0) == rho
    assert apply_map(rho, 0.0) == QubitDensityMatrix.ground()


def test_apply_map_contractivity_guard():
    with pytest.raises(ContractivityError):
        apply_map(QubitDensityMatrix.excited(), 1.0 + 1e-6)


def test_map_preserves_positivity_and_trace():
    rng = np.random.default_rng(31)
    for _ in range(2000):
        rho = _random_state(rng)
        b = rng.random() * np.exp(2j * np.pi * rng.random())
        out = apply_map(rho, b)
        m = out.matrix
        assert np.trace(m).real == 1.0
        assert np.linalg.eigvalsh(m).min() >= -1e-12


# ------------------------------------------------------------------- rates


def test_rates_from_exponential_family():
    # b = e^{(g + i w) t} has b'/b = g + i w identically
    g, w, t = -0.7, 1.3, 2.1
    b = np.exp((g + 1j * w) * t)
    rates = rates_from_b(b, (g + 1j * w) * b)
    assert rates.epsilon == pytest.approx(w, rel=1e-14)
    assert rates.gamma == pytest.approx(g, rel=1e-14)


def test_rates_singularities():
    with pytest.raises(SingularRateError):
        rates_from_b(0.0, 1.0)
    with pytest.raises(SingularRateError):
        rates_from_b(1e-308 + 0.0j, 1e308 + 0.0j)
    # SingularRateError doubles as a ZeroDivisionError for generic callers
    with pytest.raises(ZeroDivisionError):
        rates_from_b(0.0, 1.0)


def test_rates_validation():
    with pytest.raises(DomainError):
        GeneratorRates(np.nan, 0.0)


@pytest.mark.parametrize("model", [PbgModel(-3.0), JcModel(1.0, 5.0)])
def test_population_rate_identity(model):
    # dP/dt = 2 gamma P holds at every regular instant
    t = np.linspace(0.1, 8.0, 80)
    b = bt(model, t)
    bd = bt_derivative(model, t)
    dp = 2.0 * (bd * np.conj(b)).real
    for bk, bdk, dpk in zip(b, bd, dp):
        gam = rates_from_b(bk, bdk).gamma
        assert abs(dpk - 2.0 * gam * abs(bk) ** 2) < 1e-10


# --------------------------------------------------------------- generator


def test_generator_on_excited_state():
    rates = GeneratorRates(0.4, -0.3)
    out = generator_action(QubitDensityMatrix.excited(), rates)
    want = np.array([[2 * (-0.3), 0.0], [0.0, -2 * (-0.3)]], dtype=complex)
    assert np.allclose(out, want, atol=1e-15)


def test_generator_on_coherence():
    rates = GeneratorRates(0.4, -0.3)
    rho = QubitDensityMatrix(0.5, 0.5)
    out = generator_action(rho, rates)
    # off-diagonal picks up (gamma + i eps) rho10
    assert out[0, 1] == pytest.approx((-0.3 + 0.4j) * 0.5, abs=1e-15)
    assert out[1, 0] == pytest.approx((-0.3 - 0.4j) * 0.5, abs=1e-15)


def test_generator_is_traceless_and_hermitian():
    rng = np.random.default_rng(32)
    for _ in range(200):
        rho = _random_state(rng)
        rates = GeneratorRates(float(rng.normal()), float(rng.normal()))
        out = generator_action(rho, rates)
        assert abs(np.trace(out)) < 1e-14
        assert np.max(np.abs(out - out.conj().T)) < 1e-14


@pytest.mark.parametrize("model", [PbgModel(-3.0), JcModel(1.0, 5.0)])
def test_generator_matches_map_derivative(model):
    # L rho_t must be the actual time derivative of the mapped state;
    # central differences converge at second order onto it
    rho0 = QubitDensityMatrix.from_bloch(0.6, 0.2, 0.5)
    for t in (0.3, 0.9, 2.0, 4.0, 7.0):
        mapped = apply_map(rho0, bt(model, t))
        gen = generator_action(
            mapped, rates_from_b(bt(model, t), bt_derivative(model, t)))
        errs = []
        for h in (1e-4, 5e-5):
            fd = (apply_map(rho0, bt(model, t + h)).matrix
                  - apply_map(rho0, bt(model, t - h)).matrix) / (2 * h)
            errs.append(np.max(np.abs(fd - gen)))
        assert errs[0] < 1e-6
        assert 2.5 < errs[0] / errs[1] < 6.0
