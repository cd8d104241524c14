"""Exception types shared across the package.

Error kinds map onto distinct CLI exit codes (see cli.EXIT_*): configuration
problems, validation/physics failures, and I/O are kept distinguishable.
"""


class QslsimError(Exception):
    """Base class for package-specific errors."""


class DomainError(QslsimError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ConfigError(QslsimError, ValueError):
    """Invalid run configuration (CLI flags, config file, sweep setup)."""


class SingularityError(QslsimError, ValueError):
    """Evaluation requested at (or numerically on top of) a singular point."""


class DegenerateRootsError(QslsimError, ValueError):
    """Coincident cubic roots; the three-term closed form is invalid there."""

    def __init__(self, delta, separation):
        self.delta = delta
        self.separation = separation
        super().__init__(
            f"coincident decoherence roots at delta={delta!r} "
            f"(min separation {separation:.3e})")


class ContractivityError(QslsimError, ValueError):
    """|b| > 1 passed to the quantum map."""


class SingularRateError(QslsimError, ZeroDivisionError):
    """Generator rates requested at a zero of b (map node)."""


class DegenerateEvolutionError(QslsimError, ValueError):
    """Frozen dynamics: the QSL denominator integral vanishes."""


class PrecisionNotMetError(QslsimError, ArithmeticError):
    """Numerical inversion failed to meet the accuracy target.

    Carries the best available estimate so callers can still inspect it.
    """

    def __init__(self, message, best_estimate, error_estimate):
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
        super().__init__(
            f"{message} (best estimate {best_estimate}, "
            f"self-reported error {error_estimate:.3e})")
