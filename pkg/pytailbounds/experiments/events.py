"""Joint tail events of partial sums and characteristics."""

import math
from enum import StrEnum
from typing import Self

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..martingale.characteristics import (
    CharKind,
    char_values,
    v_norm_values,
    validate_param,
)
from ..martingale.domains import check_beta
from ..martingale.errors import DomainError
from ..martingale.paths import Path
from ..martingale.processes import IncrementModel


class EventMode(StrEnum):
    SOME_K = "SOME_K"  # S_k >= x and char_k <= budget for some k
    MAX_TERMINAL = "MAX_TERMINAL"  # max_k S_k >= x and char_n <= budget
    TERMINAL = "TERMINAL"  # S_n >= x and char_n <= budget
    SELF_NORM = "SELF_NORM"  # max(0, max_k S_k) / V_n(beta) >= x


class EventSpec(BaseModel):
    """
    One event over a horizon of n steps.

    budget is v^2 for the quadratic kinds and v^beta for the beta kinds.
    SELF_NORM takes no characteristic; its char_param is beta.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: EventMode
    char_kind: CharKind | None = None
    char_param: float | None = None
    x: float
    budget: float = Field(default=math.inf, ge=0)
    n: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_consistency(self) -> Self:
        if math.isnan(self.x):
            raise ValueError("x must not be NaN")
        if self.mode is EventMode.SELF_NORM:
            if self.char_kind is not None:
                raise ValueError("SELF_NORM takes no char_kind")
            if self.char_param is None:
                raise ValueError("SELF_NORM requires beta as char_param")
            check_beta("v_norm", self.char_param)
        else:
            if self.char_kind is None:
                raise ValueError(f"{self.mode} requires a char_kind")
            validate_param(self.char_kind, self.char_param)
        return self

    @property
    def v(self) -> float:
        """Budget scale: budget^(1/2) or budget^(1/beta)."""
        if self.char_kind is not None and self.char_kind.uses_beta:
            assert self.char_param is not None
            return self.budget ** (1.0 / self.char_param)
        return math.sqrt(self.budget)


def _char(
    spec: EventSpec, xi: NDArray[np.float64], model: IncrementModel
) -> NDArray[np.float64]:
    assert spec.char_kind is not None
    return char_values(spec.char_kind, xi, model, spec.char_param)


def self_normalized_statistic(
    xi: NDArray[np.float64], beta: float
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """(max(0, max_k S_k), V_n(beta)) over the last axis."""
    peak = np.maximum(np.max(np.cumsum(xi, axis=-1), axis=-1), 0.0)
    return peak, v_norm_values(xi, beta)


def detect_event(path: Path, model: IncrementModel, spec: EventSpec) -> bool:
    """
    Whether the event of spec occurs on path.

    SOME_K only visits the prefix on which the characteristic stays within
    budget; it is nondecreasing, so that prefix ends at the first excess.
    Paths with V_n = 0 never realize SELF_NORM.

    Raises:
        DomainError: If the path length differs from the horizon
        InfiniteMomentError: If the model lacks a required moment
    """
    if path.n != spec.n:
        raise DomainError(f"path has {path.n} steps, event horizon is {spec.n}")
    sums = path.partial_sums

    match spec.mode:
        case EventMode.SELF_NORM:
            assert spec.char_param is not None
            peak, norm = self_normalized_statistic(path.array, spec.char_param)
            return bool(norm > 0 and peak / norm >= spec.x)
        case EventMode.SOME_K:
            char = _char(spec, path.array, model)
            visited = int(np.searchsorted(char, spec.budget, side="right"))
            return bool(np.any(sums[:visited] >= spec.x))
        case EventMode.MAX_TERMINAL:
            char = _char(spec, path.array, model)
            return bool(char[-1] <= spec.budget and np.max(sums) >= spec.x)
        case EventMode.TERMINAL:
            char = _char(spec, path.array, model)
            return bool(char[-1] <= spec.budget and sums[-1] >= spec.x)


def event_mask(
    xi: NDArray[np.float64], model: IncrementModel, spec: EventSpec
) -> NDArray[np.bool_]:
    """
    Vectorized detect_event over a (paths, n) batch.

    Returns:
        Boolean array with one entry per row of xi
    """
    if xi.ndim != 2 or xi.shape[1] != spec.n:
        raise DomainError(f"expected a (paths, {spec.n}) batch, got {xi.shape}")
    sums = np.cumsum(xi, axis=1)

    match spec.mode:
        case EventMode.SELF_NORM:
            assert spec.char_param is not None
            peak, norm = self_normalized_statistic(xi, spec.char_param)
            positive = norm > 0
            ratio = np.divide(peak, norm, out=np.zeros_like(peak), where=positive)
            return positive & (ratio >= spec.x)
        case EventMode.SOME_K:
            char = _char(spec, xi, model)
            return np.any((sums >= spec.x) & (char <= spec.budget), axis=1)
        case EventMode.MAX_TERMINAL:
            char = _char(spec, xi, model)
            return (char[:, -1] <= spec.budget) & (np.max(sums, axis=1) >= spec.x)
        case EventMode.TERMINAL:
            char = _char(spec, xi, model)
            return (char[:, -1] <= spec.budget) & (sums[:, -1] >= spec.x)
