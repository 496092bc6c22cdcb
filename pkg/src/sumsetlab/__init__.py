"""Finite representability of integers as 2-sums: counting, predicates,
threshold theory and Monte Carlo verification."""

from ._jit import JIT_ENABLED
from .checkers import is_bhg, is_sidon, is_truncated_basis, max_sigma_delta
from .core import IntegerSet, ThresholdSpec, Window, sample_set, window_bounds
from .errors import ConfigurationError, DomainError, UnsupportedCombinationError
from .repcount import RepProfile, SigmaDeltaProfile, rep_counts, sigma_delta, underrepresented_count
from .theory import (
    LambdaMode,
    balls_boxes_formulas,
    bhg_threshold_size,
    indicator_prob,
    limit_probability,
    poisson_lambda,
    stein_chen_bound,
    threshold_p,
)

__all__ = [
    "JIT_ENABLED",
    "ConfigurationError",
    "DomainError",
    "IntegerSet",
    "LambdaMode",
    "RepProfile",
    "SigmaDeltaProfile",
    "ThresholdSpec",
    "UnsupportedCombinationError",
    "Window",
    "balls_boxes_formulas",
    "bhg_threshold_size",
    "indicator_prob",
    "is_bhg",
    "is_sidon",
    "is_truncated_basis",
    "limit_probability",
    "max_sigma_delta",
    "poisson_lambda",
    "rep_counts",
    "sample_set",
    "sigma_delta",
    "stein_chen_bound",
    "threshold_p",
    "underrepresented_count",
    "window_bounds",
]

__version__ = "0.1.0"
