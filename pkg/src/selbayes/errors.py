"""Exception hierarchy shared by every numerical layer."""


class SelbayesError(Exception):
    """Base class for all recoverable errors raised by this package."""


class DomainError(SelbayesError, ValueError):
    """An argument lies outside the domain of the function."""


class InvalidObservationError(SelbayesError, ValueError):
    """The observed data are incompatible with the selection event."""


class NumericError(SelbayesError, ArithmeticError):
    """A numerical routine failed (bracketing, quadrature, instability)."""


class DivergedPosteriorError(NumericError):
    """The posterior normaliser keeps growing as the grid expands."""


class ConsistencyError(NumericError):
    """An internal monotonicity or consistency check failed."""


class StuckChainError(NumericError):
    """A Markov chain rejected every proposal over a full window."""


class DegenerateEstimateError(NumericError):
    """A Monte Carlo estimate has no accepted draws."""


class LowAcceptanceError(SelbayesError, RuntimeError):
    """Rejection sampling hit its attempt cap.

    ``rate`` holds the empirical acceptance rate observed before aborting.
    """

    def __init__(self, message, rate=float("nan")):
        super().__init__(message)
        self.rate = rate


class ConfigError(SelbayesError, ValueError):
    """An experiment configuration failed to parse or validate."""
