"""qslsim: quantum-speed-limit and memory-effect analysis for a qubit
decohering in a photonic band-gap or damped-cavity reservoir.

The package computes the exact decoherence function b(t) of both reservoirs,
the induced quantum map and its time-local generator, the open-system QSL
time, and the BLP backflow measure, and verifies numerically that speedup,
information backflow, and population trapping are tied together by

    tau_qsl = tau / (2 N / (1 - P_tau) + 1).

All core quantities are in natural units (beta = 1 for the band-gap model);
physical units enter only through physical_beta.
"""
__version__ = "0.1.0"

from .dynamics import (GeneratorRates, QubitDensityMatrix, SIGMA_MINUS,
                       SIGMA_PLUS, apply_map, generator_action, rates_from_b)
from .errors import (ConfigError, ContractivityError, DegenerateEvolutionError,
                     DegenerateRootsError, DomainError, PrecisionNotMetError,
                     QslsimError, SingularityError, SingularRateError)
from .laplace import inverse_laplace_numeric
from .nonmarkov import (NonMarkovResult, SamplingReport, StatePair,
                        blp_integral, blp_measure_sampled, canonical_pair,
                        evolved_trace_distance, jc_nonmarkov_and_qsl,
                        nonmarkovianity_closed, qsl_from_nonmarkov,
                        trace_distance)
from .qsl import (QslResult, bures_angle, integrate_abs_dpdt, qsl_time_excited,
                  qsl_time_general, schatten_norm)
from .reservoirs import (CubicRoots, DecoherenceTrace, JcModel, PbgModel, bt,
                         bt_derivative, jc_bt, pbg_bt, pbg_bt_laplace,
                         physical_beta, sample_trace, solve_cubic)
from .specfun import erf_complex, faddeeva
from .validate import CheckResult, format_report, run_all_checks

__all__ = [
    "__version__",
    # errors
    "QslsimError", "DomainError", "ConfigError", "SingularityError",
    "DegenerateRootsError", "ContractivityError", "SingularRateError",
    "DegenerateEvolutionError", "PrecisionNotMetError",
    # special functions and inversion
    "erf_complex", "faddeeva", "inverse_laplace_numeric",
    # reservoirs
    "PbgModel", "JcModel", "CubicRoots", "DecoherenceTrace", "solve_cubic",
    "pbg_bt", "pbg_bt_laplace", "jc_bt", "bt", "bt_derivative",
    "sample_trace", "physical_beta",
    # dynamics
    "QubitDensityMatrix", "GeneratorRates", "SIGMA_PLUS", "SIGMA_MINUS",
    "apply_map", "rates_from_b", "generator_action",
    # qsl
    "QslResult", "bures_angle", "schatten_norm", "qsl_time_general",
    "qsl_time_excited", "integrate_abs_dpdt",
    # nonmarkov
    "StatePair", "NonMarkovResult", "SamplingReport", "trace_distance",
    "evolved_trace_distance", "blp_integral", "blp_measure_sampled",
    "canonical_pair", "nonmarkovianity_closed", "qsl_from_nonmarkov",
    "jc_nonmarkov_and_qsl",
    # validation
    "CheckResult", "run_all_checks", "format_report",
]
