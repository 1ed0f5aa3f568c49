"""k-indexed characteristics of a realized path.

Each characteristic is a running sum of a per-step conditional moment taken
from the model (a constant for i.i.d. models) plus a realized term. The
step terms work on arrays of any shape, with time along the last axis, so
the Monte Carlo layer can evaluate whole batches of paths at once.
"""

from enum import StrEnum
from typing import Self

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from .domains import check_beta, check_nonnegative
from .errors import DomainError, PreconditionError
from .paths import Path
from .processes import IncrementModel, MomentQuery


class CharKind(StrEnum):
    """Characteristic families; y-indexed or beta-indexed where noted."""

    QUAD_CHAR = "QUAD_CHAR"  # <S>_k
    SQ_VAR = "SQ_VAR"  # [S]_k
    G = "G"  # y
    H = "H"  # y
    M = "M"  # y
    G_BETA = "G_BETA"  # beta
    QUAD_PLUS_SQ = "QUAD_PLUS_SQ"  # <S>_k + [S]_k
    G_ABS_BETA = "G_ABS_BETA"  # beta
    G_BETA_SELFNORM = "G_BETA_SELFNORM"  # beta

    @property
    def uses_y(self) -> bool:
        return self in (CharKind.G, CharKind.H, CharKind.M)

    @property
    def uses_beta(self) -> bool:
        return self in (
            CharKind.G_BETA,
            CharKind.G_ABS_BETA,
            CharKind.G_BETA_SELFNORM,
        )


class CharSeries(BaseModel):
    """Nondecreasing, non-negative trajectory of one characteristic."""

    model_config = ConfigDict(frozen=True)

    kind: CharKind
    param: float | None = None
    values: tuple[float, ...]

    @model_validator(mode="after")
    def _check_monotone(self) -> Self:
        values = np.asarray(self.values)
        if values.size and (values[0] < 0 or np.any(np.diff(values) < 0)):
            raise ValueError(
                f"{self.kind} series must be non-negative and nondecreasing"
            )
        return self

    @property
    def array(self) -> NDArray[np.float64]:
        return np.asarray(self.values, dtype=np.float64)

    @property
    def final(self) -> float:
        return self.values[-1]


def validate_param(kind: CharKind, param: float | None) -> float | None:
    """
    Check that param is a valid y or beta for kind.

    Returns:
        param, or None for parameter-free kinds

    Raises:
        DomainError: If the parameter is missing or out of range
    """
    if kind.uses_y:
        if param is None:
            raise DomainError(f"{kind} requires a truncation level y")
        return check_nonnegative("y", param, allow_inf=True)
    if kind.uses_beta:
        if param is None:
            raise DomainError(f"{kind} requires an exponent beta")
        operation = "selfnorm" if kind is CharKind.G_BETA_SELFNORM else "g_beta"
        return check_beta(operation, param)
    return None


def step_terms(
    kind: CharKind,
    xi: NDArray[np.float64],
    model: IncrementModel,
    param: float | None = None,
) -> NDArray[np.float64]:
    """
    Per-step summands of a characteristic.

    Args:
        kind: Characteristic family
        xi: Increments, time along the last axis
        model: Source of the conditional moments
        param: y for G, H, M; beta for the beta kinds

    Returns:
        Array of the same shape as xi

    Raises:
        DomainError: If param is invalid for kind
        InfiniteMomentError: If the model lacks the required moment
        PreconditionError: G_BETA_SELFNORM on an asymmetric model
    """
    level = validate_param(kind, param)
    squares = xi * xi
    zero = np.zeros_like(xi)

    match kind:
        case CharKind.QUAD_CHAR:
            return model.exact_moment(MomentQuery.second()) + zero
        case CharKind.SQ_VAR:
            return squares
        case CharKind.QUAD_PLUS_SQ:
            return model.exact_moment(MomentQuery.second()) + squares

    # level is set for every remaining kind
    assert level is not None
    match kind:
        case CharKind.G:
            below = model.exact_moment(MomentQuery.second_below(level))
            return below + np.where(xi > level, squares, 0.0)
        case CharKind.H:
            second = model.exact_moment(MomentQuery.second())
            return second + np.where(np.abs(xi) > level, squares, 0.0)
        case CharKind.M:
            below = model.exact_moment(MomentQuery.second_abs_below(level))
            return below + np.where(np.abs(xi) > level, squares, 0.0)
        case CharKind.G_BETA:
            negative = model.exact_moment(MomentQuery.beta_neg(level))
            return negative + np.maximum(xi, 0.0) ** level
        case CharKind.G_ABS_BETA:
            absolute = model.exact_moment(MomentQuery.beta_abs(level))
            return absolute + np.abs(xi) ** level
        case CharKind.G_BETA_SELFNORM:
            # E((xi^-)^beta | |xi|) = |xi|^beta / 2 under symmetry
            if not model.is_symmetric():
                raise PreconditionError(f"{kind} requires a symmetric model")
            return 0.5 * np.abs(xi) ** level + np.maximum(xi, 0.0) ** level
    raise DomainError(f"unknown characteristic {kind}")


def char_values(
    kind: CharKind,
    xi: NDArray[np.float64],
    model: IncrementModel,
    param: float | None = None,
) -> NDArray[np.float64]:
    """Running characteristic along the last axis of xi."""
    return np.cumsum(step_terms(kind, xi, model, param), axis=-1)


def char_series(
    kind: CharKind, path: Path, model: IncrementModel, param: float | None = None
) -> CharSeries:
    """Characteristic of a single path, by kind."""
    values = char_values(kind, path.array, model, param)
    return CharSeries(kind=kind, param=param, values=tuple(values.tolist()))


def quad_char(path: Path, model: IncrementModel) -> CharSeries:
    """<S>_k = sum of E(xi_i^2)."""
    return char_series(CharKind.QUAD_CHAR, path, model)


def sq_var(path: Path) -> CharSeries:
    """[S]_k = sum of xi_i^2; model-free."""
    values = np.cumsum(path.array * path.array)
    return CharSeries(kind=CharKind.SQ_VAR, values=tuple(values.tolist()))


def g_char(path: Path, model: IncrementModel, y: float) -> CharSeries:
    """G_k^y = sum of E(xi_i^2 1{xi_i <= y}) + xi_i^2 1{xi_i > y}."""
    return char_series(CharKind.G, path, model, y)


def h_char(path: Path, model: IncrementModel, y: float) -> CharSeries:
    """H_k^y = sum of E(xi_i^2) + xi_i^2 1{|xi_i| > y}."""
    return char_series(CharKind.H, path, model, y)


def m_char(path: Path, model: IncrementModel, y: float) -> CharSeries:
    """M_k^y = sum of E(xi_i^2 1{|xi_i| <= y}) + xi_i^2 1{|xi_i| > y}."""
    return char_series(CharKind.M, path, model, y)


def g_beta_char(path: Path, model: IncrementModel, beta: float) -> CharSeries:
    """G_k^0(beta) = sum of E((xi_i^-)^beta) + (xi_i^+)^beta, beta in (1, 2)."""
    return char_series(CharKind.G_BETA, path, model, beta)


def v_norm_values(xi: NDArray[np.float64], beta: float) -> NDArray[np.float64]:
    """(sum |xi_i|^beta)^(1/beta) over the last axis."""
    check_beta("v_norm", beta)
    return np.sum(np.abs(xi) ** beta, axis=-1) ** (1.0 / beta)


def v_norm(path: Path, beta: float) -> float:
    """V_n(beta); 0 for the all-zero path, so callers guard the division."""
    return float(v_norm_values(path.array, beta))
