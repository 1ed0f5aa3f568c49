"""Domain checks for scalar arguments.

This module keeps the admissible ranges of the exponent beta in one table
and provides the small validation helpers used by the pure functions of
the numerical core. Separated so every operation reports the same
diagnostic for the same violation.
"""

import math
from typing import TypedDict

from .errors import DomainError


class BetaDomain(TypedDict):
    """Admissible beta interval; min_value is always open."""

    min_value: float
    max_value: float
    include_max: bool


# Beta domains - single source of truth for valid ranges
BETA_DOMAINS: dict[str, BetaDomain] = {
    "c_beta": {"min_value": 1.0, "max_value": 2.0, "include_max": False},
    "theorem2": {"min_value": 1.0, "max_value": 2.0, "include_max": False},
    "lambda_star": {"min_value": 1.0, "max_value": 2.0, "include_max": True},
    "exponent_family": {"min_value": 1.0, "max_value": 2.0, "include_max": True},
    "numeric_infimum": {"min_value": 1.0, "max_value": 2.0, "include_max": True},
    "c_tilde": {"min_value": 1.0, "max_value": 2.0, "include_max": True},
    "selfnorm": {"min_value": 1.0, "max_value": 2.0, "include_max": True},
    "g_beta": {"min_value": 1.0, "max_value": 2.0, "include_max": False},
    "v_norm": {"min_value": 1.0, "max_value": 2.0, "include_max": True},
    "lemma": {"min_value": 1.0, "max_value": 2.0, "include_max": False},
}


def check_beta(operation: str, beta: float) -> float:
    """
    Validate beta against the domain registered for an operation.

    Args:
        operation: Key into BETA_DOMAINS
        beta: Exponent to validate

    Returns:
        beta, unchanged

    Raises:
        DomainError: If beta is not finite or lies outside the interval
    """
    domain = BETA_DOMAINS[operation]
    low, high = domain["min_value"], domain["max_value"]
    if not math.isfinite(beta) or beta <= low:
        raise DomainError(f"{operation}: beta must exceed {low}, got {beta}")
    if beta > high or (beta == high and not domain["include_max"]):
        closing = "]" if domain["include_max"] else ")"
        raise DomainError(
            f"{operation}: beta must lie in ({low}, {high}{closing}, got {beta}"
        )
    return beta


def check_nonnegative(name: str, value: float, allow_inf: bool = False) -> float:
    """Reject NaN and negative values (and +inf unless allow_inf)."""
    if math.isnan(value) or value < 0 or (math.isinf(value) and not allow_inf):
        raise DomainError(f"{name} must be a finite non-negative number, got {value}")
    return value


def check_positive(name: str, value: float) -> float:
    """Reject NaN, infinite and non-positive values."""
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a finite positive number, got {value}")
    return value
