"""Bayesian inference for parameters selected by the data.

Selective likelihoods, probability-matching and selective Jeffreys
priors, posterior tabulation, and repeated-sampling coverage studies.
"""
from .errors import (ConfigError, ConsistencyError, DegenerateEstimateError, DivergedPosteriorError,
                     DomainError, InvalidObservationError, LowAcceptanceError, NumericError,
                     SelbayesError, StuckChainError)
from .selective_normal import PriorKind, SplitNormalModel

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConsistencyError", "DegenerateEstimateError", "DivergedPosteriorError",
    "DomainError", "InvalidObservationError", "LowAcceptanceError", "NumericError",
    "PriorKind", "SelbayesError", "SplitNormalModel", "StuckChainError", "__version__",
]
