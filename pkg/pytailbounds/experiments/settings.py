"""Validated experiment configuration.

A configuration is the JSON document {"command": ..., "parameters": {...}}.
Each command has its own parameter model; unknown keys are rejected.
"""

import json
from enum import StrEnum
from pathlib import Path as FilePath
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..martingale.bounds import ConstantChoice, ExponentVariant
from ..martingale.errors import ConfigError
from ..martingale.processes import IncrementModel
from .config import (
    DEFAULT_DELTA,
    DEFAULT_LAMBDA_GRID_RESOLUTION,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    LEMMA_MODEL_COUNT,
    SCALAR_GRID_POINTS,
)
from .events import EventSpec
from .montecarlo import DominationCell


class CommandName(StrEnum):
    BOUND = "bound"
    CURVE = "curve"
    SIMULATE = "simulate"
    VERIFY = "verify"
    TIGHTNESS = "tightness"
    SELFNORM = "selfnorm"
    LEMMAS = "lemmas"
    EXACT = "exact"


class BoundKind(StrEnum):
    B0 = "b0"
    B1 = "b1"
    B2 = "b2"
    B_SUBGAMMA = "b_subgamma"
    THEOREM2 = "theorem2"
    SELFNORM = "selfnorm"
    C_BETA = "c_beta"
    C_TILDE = "c_tilde"
    LARGE_DEVIATION = "large_deviation"


class _Parameters(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class BoundCommand(_Parameters):
    """A single bound or constant; which arguments are needed depends on kind."""

    kind: BoundKind
    x: float | None = None
    y: float = 0.0
    v: float | None = None
    beta: float | None = None
    b: float | None = None
    n: int | None = None
    which: ConstantChoice = ConstantChoice.DERIVED


class CurveCommand(_Parameters):
    """exponent_family on [0, lambda_max]; lambda_max defaults to 3 lambda_star."""

    variant: ExponentVariant
    x: float = Field(gt=0)
    y: float = Field(default=0.0, ge=0)
    v: float = Field(gt=0)
    beta: float | None = None
    lambda_max: float | None = Field(default=None, gt=0)
    points: int = Field(default=101, ge=2)
    output: str | None = None


class _RunParameters(_Parameters):
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    delta: float = Field(default=DEFAULT_DELTA, gt=0, lt=1)
    workers: int = Field(default=DEFAULT_WORKERS, ge=1)
    output: str | None = None


class SimulateCommand(_RunParameters):
    model: IncrementModel
    model_id: str | None = None
    events: list[EventSpec] = Field(min_length=1)


class VerifyCommand(_RunParameters):
    model: IncrementModel
    model_id: str | None = None
    cells: list[DominationCell] = Field(min_length=1)
    falsify: bool = False


class TightnessCommand(_Parameters):
    x: float = Field(gt=0)
    y: float = Field(gt=0)
    v: float = Field(gt=0)
    n_list: list[int] = Field(min_length=1)
    resolution: int = Field(default=DEFAULT_LAMBDA_GRID_RESOLUTION, ge=2)
    output: str | None = None


class SelfnormCommand(_RunParameters):
    model: IncrementModel
    model_id: str | None = None
    beta: float = Field(gt=1, le=2)
    x_grid: list[float] = Field(min_length=1)
    n: int = Field(ge=1)


class LemmasCommand(_Parameters):
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    models: int = Field(default=LEMMA_MODEL_COUNT, ge=1)
    scalar_points: int = Field(default=SCALAR_GRID_POINTS, ge=2)
    output: str | None = None


class ExactCommand(_Parameters):
    model: IncrementModel
    event: EventSpec


CommandParameters = (
    BoundCommand
    | CurveCommand
    | SimulateCommand
    | VerifyCommand
    | TightnessCommand
    | SelfnormCommand
    | LemmasCommand
    | ExactCommand
)

PARAMETER_MODELS: dict[CommandName, type[CommandParameters]] = {
    CommandName.BOUND: BoundCommand,
    CommandName.CURVE: CurveCommand,
    CommandName.SIMULATE: SimulateCommand,
    CommandName.VERIFY: VerifyCommand,
    CommandName.TIGHTNESS: TightnessCommand,
    CommandName.SELFNORM: SelfnormCommand,
    CommandName.LEMMAS: LemmasCommand,
    CommandName.EXACT: ExactCommand,
}


class ExperimentConfig(BaseModel):
    """Top-level configuration document."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: CommandName
    parameters: dict[str, Any] = Field(default_factory=dict)

    def with_overrides(self, overrides: dict[str, Any]) -> "ExperimentConfig":
        """
        Replace top-level scalar parameters, e.g. seed or trials from flags.

        Raises:
            ConfigError: If a parameter does not exist for the command
        """
        fields = PARAMETER_MODELS[self.command].model_fields
        unknown = sorted(set(overrides) - set(fields))
        if unknown:
            raise ConfigError(f"{self.command} does not accept {', '.join(unknown)}")
        return self.model_copy(update={"parameters": {**self.parameters, **overrides}})

    def resolve(self) -> CommandParameters:
        """
        Validate parameters against the command's model.

        Raises:
            ConfigError: Wrapping the pydantic validation error
        """
        try:
            return PARAMETER_MODELS[self.command].model_validate(self.parameters)
        except ValidationError as exc:
            raise ConfigError(f"invalid {self.command} parameters: {exc}") from exc


def load_config(path: FilePath) -> ExperimentConfig:
    """
    Read a UTF-8 JSON configuration file.

    Raises:
        ConfigError: If the file is unreadable, not JSON or not a valid config
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        return ExperimentConfig.model_validate(data)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration {path}: {exc}") from exc
