"""Catalog of i.i.d. increment models with exact moment oracles.

Every model is an immutable pydantic object tagged by ``kind``. Finite
support models answer moment queries by exact summation over their atoms;
the symmetric Pareto model uses closed-form integrals. The same atom order
is used for every query, so identities such as E(xi^2 1{xi <= MAX}) = E(xi^2)
hold exactly in floating point.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Callable, Mapping
from enum import StrEnum
from typing import Annotated, Any, Literal, Self

import numpy as np
from numpy.typing import NDArray
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    ValidationError,
    model_validator,
)

from .bounds import ExponentVariant
from .config import ATOM_TOLERANCE, MAX, PROBABILITY_TOLERANCE
from .domains import check_beta, check_nonnegative, check_positive
from .errors import ConfigError, InfiniteMomentError, PreconditionError
from .kernels import kernel_c, kernel_g
from .paths import Path
from .streams import RandomStream

_LOG = logging.getLogger(__name__)

Atom = tuple[float, float]


class MomentKind(StrEnum):
    SECOND_BELOW = "SECOND_BELOW"  # E(xi^2 1{xi <= y})
    SECOND_ABS_BELOW = "SECOND_ABS_BELOW"  # E(xi^2 1{|xi| <= y})
    SECOND = "SECOND"  # E(xi^2)
    BETA_NEG = "BETA_NEG"  # E((xi^-)^beta)
    BETA_ABS = "BETA_ABS"  # E(|xi|^beta)


class MomentQuery(BaseModel):
    """A truncated or fractional moment request; level is y or beta."""

    model_config = ConfigDict(frozen=True)

    kind: MomentKind
    level: float | None = None

    @model_validator(mode="after")
    def _check_level(self) -> Self:
        if self.kind is MomentKind.SECOND:
            if self.level is not None:
                raise ValueError("SECOND takes no level")
        elif self.level is None or math.isnan(self.level) or self.level < 0:
            raise ValueError(f"{self.kind} requires a non-negative level")
        return self

    @classmethod
    def second(cls) -> "MomentQuery":
        return cls(kind=MomentKind.SECOND)

    @classmethod
    def second_below(cls, y: float) -> "MomentQuery":
        return cls(kind=MomentKind.SECOND_BELOW, level=y)

    @classmethod
    def second_abs_below(cls, y: float) -> "MomentQuery":
        return cls(kind=MomentKind.SECOND_ABS_BELOW, level=y)

    @classmethod
    def beta_neg(cls, beta: float) -> "MomentQuery":
        return cls(kind=MomentKind.BETA_NEG, level=beta)

    @classmethod
    def beta_abs(cls, beta: float) -> "MomentQuery":
        return cls(kind=MomentKind.BETA_ABS, level=beta)


def _atom_moment(atoms: tuple[Atom, ...], term: Callable[[float], float]) -> float:
    # fsum makes the result independent of which atoms contribute exact zeros
    return math.fsum(p * term(v) if p > 0 else 0.0 for v, p in atoms)


def _beta_power(value: float, beta: float) -> float:
    return value**beta if value > 0 else 0.0


def _exp(t: float) -> float:
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


class _AtomicModel(BaseModel):
    """Shared behaviour of models with finite support."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    def support(self) -> tuple[Atom, ...]:
        raise NotImplementedError

    def mean(self) -> float:
        return math.fsum(p * v for v, p in self.support())

    def max_abs(self) -> float:
        return max(abs(v) for v, p in self.support() if p > 0)

    def max_value(self) -> float:
        return max(v for v, p in self.support() if p > 0)

    def is_symmetric(self) -> bool:
        """P(xi = v) = P(xi = -v) for every atom, up to ATOM_TOLERANCE."""
        masses: dict[float, float] = defaultdict(float)
        for v, p in self.support():
            masses[v] += p
        return all(
            abs(mass - masses.get(-v, 0.0)) <= ATOM_TOLERANCE
            for v, mass in masses.items()
        )

    def exact_moment(self, q: MomentQuery) -> float:
        """Exact finite sum over the support."""
        atoms = self.support()
        level = q.level if q.level is not None else MAX
        match q.kind:
            case MomentKind.SECOND:
                return _atom_moment(atoms, lambda v: v * v)
            case MomentKind.SECOND_BELOW:
                return _atom_moment(atoms, lambda v: v * v if v <= level else 0.0)
            case MomentKind.SECOND_ABS_BELOW:
                return _atom_moment(
                    atoms, lambda v: v * v if abs(v) <= level else 0.0
                )
            case MomentKind.BETA_NEG:
                return _atom_moment(atoms, lambda v: _beta_power(-v, level))
            case MomentKind.BETA_ABS:
                return _atom_moment(atoms, lambda v: _beta_power(abs(v), level))

    def sample(self, n: int, stream: RandomStream) -> NDArray[np.float64]:
        """
        Inverse-CDF sampling over cumulative atom weights.

        An atom i is drawn when u lies in (c_{i-1}, c_i], so ties go to the
        lower-indexed atom. Zero-mass atoms are never drawn.
        """
        atoms = [(v, p) for v, p in self.support() if p > 0]
        values = np.array([v for v, _ in atoms], dtype=np.float64)
        cumulative = np.cumsum([p for _, p in atoms])
        cumulative[-1] = 1.0
        index = np.searchsorted(cumulative, stream.uniform(n), side="left")
        return values[np.minimum(index, len(values) - 1)]


def _validate_atoms(atoms: tuple[Atom, ...]) -> tuple[Atom, ...]:
    if not atoms:
        raise ValueError("a finite-support model needs at least one atom")
    if any(p < 0 for _, p in atoms):
        raise ValueError("atom probabilities must be non-negative")
    total = math.fsum(p for _, p in atoms)
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise ValueError(f"atom probabilities sum to {total!r}, expected 1")
    return atoms


class FiniteSupportModel(_AtomicModel):
    """Arbitrary finite law given by (value, probability) atoms."""

    kind: Literal["FINITE_SUPPORT"] = "FINITE_SUPPORT"
    atoms: tuple[Atom, ...]

    @model_validator(mode="after")
    def _check_atoms(self) -> Self:
        _validate_atoms(self.atoms)
        return self

    @classmethod
    def uniform(cls, values: list[float]) -> "FiniteSupportModel":
        """Equal mass on each listed value."""
        p = 1.0 / len(values)
        return cls(atoms=tuple((float(v), p) for v in values))

    def support(self) -> tuple[Atom, ...]:
        return self.atoms

    def describe(self) -> str:
        body = ";".join(f"{v:g}:{p:g}" for v, p in self.atoms)
        return f"FINITE_SUPPORT[{body}]"


class TwoPointModel(_AtomicModel):
    """
    Symmetric three-atom law: +-y with mass p/2 each, 0 otherwise.

    Either p is given, or the tightness parametrization (v, n) with
    p = v^2 / (n y^2), which requires v^2 <= n y^2.
    """

    kind: Literal["TWO_POINT_SYM"] = "TWO_POINT_SYM"
    y: float = Field(gt=0)
    p: float = Field(ge=0, le=1)
    v: float | None = Field(default=None, gt=0)
    n: int | None = Field(default=None, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _derive_mass(cls, data: Any) -> Any:
        if not isinstance(data, dict) or data.get("p") is not None:
            return data
        y, v, n = data.get("y"), data.get("v"), data.get("n")
        if y is None or v is None or n is None:
            raise ValueError("TWO_POINT_SYM needs either p or both v and n")
        p = v * v / (n * y * y)
        if p > 1.0:
            raise ValueError(f"v^2 <= n y^2 violated: p = {p} > 1")
        return {**data, "p": p}

    @classmethod
    def from_budget(cls, y: float, v: float, n: int) -> "TwoPointModel":
        return cls.model_validate({"y": y, "v": v, "n": n})

    def support(self) -> tuple[Atom, ...]:
        half = self.p / 2.0
        return ((-self.y, half), (0.0, 1.0 - self.p), (self.y, half))

    def describe(self) -> str:
        return f"TWO_POINT_SYM[y={self.y:g};p={self.p:g}]"


class RademacherModel(_AtomicModel):
    """Fair +-1 signs."""

    kind: Literal["RADEMACHER"] = "RADEMACHER"

    def support(self) -> tuple[Atom, ...]:
        return ((-1.0, 0.5), (1.0, 0.5))

    def sample(self, n: int, stream: RandomStream) -> NDArray[np.float64]:
        return stream.signs(n)

    def describe(self) -> str:
        return "RADEMACHER"


class BoundedSupermartingaleModel(_AtomicModel):
    """Finite support with mean <= 0 and every atom <= a."""

    kind: Literal["BOUNDED_SUPERMG"] = "BOUNDED_SUPERMG"
    atoms: tuple[Atom, ...]
    a: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_supermartingale(self) -> Self:
        _validate_atoms(self.atoms)
        if self.mean() > ATOM_TOLERANCE:
            raise ValueError(f"mean must be <= 0, got {self.mean()}")
        if self.max_value() > self.a:
            raise ValueError(f"atoms must not exceed a = {self.a}")
        return self

    def support(self) -> tuple[Atom, ...]:
        return self.atoms

    def describe(self) -> str:
        body = ";".join(f"{v:g}:{p:g}" for v, p in self.atoms)
        return f"BOUNDED_SUPERMG[a={self.a:g};{body}]"


class SymmetricParetoModel(BaseModel):
    """
    |xi| Pareto with tail index alpha and scale s, independent fair sign.

    P(|xi| > r) = (s / r)^alpha for r >= s.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kind: Literal["SYM_PARETO"] = "SYM_PARETO"
    alpha: float = Field(gt=0)
    scale: float = Field(default=1.0, gt=0)

    def mean(self) -> float:
        if self.alpha <= 1:
            raise InfiniteMomentError(f"SYM_PARETO(alpha={self.alpha}) has no mean")
        return 0.0

    def is_symmetric(self) -> bool:
        return True

    def _abs_power(self, r: float) -> float:
        # E|xi|^r = alpha s^r / (alpha - r)
        if self.alpha <= r:
            raise InfiniteMomentError(
                f"E|xi|^{r} is infinite for SYM_PARETO(alpha={self.alpha})"
            )
        return self.alpha * self.scale**r / (self.alpha - r)

    def _second_abs_below(self, y: float) -> float:
        s, alpha = self.scale, self.alpha
        if math.isinf(y):
            return self._abs_power(2.0)
        if y <= s:
            return 0.0
        if alpha == 2.0:
            return alpha * s * s * math.log(y / s)
        return alpha * s**alpha * (y ** (2.0 - alpha) - s ** (2.0 - alpha)) / (
            2.0 - alpha
        )

    def exact_moment(self, q: MomentQuery) -> float:
        """Closed-form Pareto integrals."""
        level = q.level if q.level is not None else MAX
        match q.kind:
            case MomentKind.SECOND:
                return self._abs_power(2.0)
            case MomentKind.SECOND_BELOW:
                # the whole negative half-line contributes
                if math.isinf(level):
                    return self._abs_power(2.0)
                return 0.5 * self._abs_power(2.0) + 0.5 * self._second_abs_below(
                    level
                )
            case MomentKind.SECOND_ABS_BELOW:
                return self._second_abs_below(level)
            case MomentKind.BETA_NEG:
                return 0.5 * self._abs_power(level)
            case MomentKind.BETA_ABS:
                return self._abs_power(level)

    def sample(self, n: int, stream: RandomStream) -> NDArray[np.float64]:
        """All n magnitudes scale * U^(-1/alpha) first, then all n signs."""
        magnitudes = self.scale * stream.open_uniform(n) ** (-1.0 / self.alpha)
        return stream.signs(n) * magnitudes

    def describe(self) -> str:
        return f"SYM_PARETO[alpha={self.alpha:g};scale={self.scale:g}]"


FiniteModel = (
    FiniteSupportModel | TwoPointModel | RademacherModel | BoundedSupermartingaleModel
)
IncrementModel = Annotated[
    FiniteModel | SymmetricParetoModel, Field(discriminator="kind")
]

MODEL_ADAPTER: TypeAdapter[IncrementModel] = TypeAdapter(IncrementModel)


def parse_model(data: Mapping[str, Any]) -> IncrementModel:
    """
    Build a model from its JSON object {kind, parameters...}.

    Raises:
        ConfigError: If the object does not describe a valid model
    """
    try:
        return MODEL_ADAPTER.validate_python(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid model definition: {exc}") from exc


def model_to_json(model: IncrementModel) -> str:
    """Serialize a model back to its JSON object."""
    return MODEL_ADAPTER.dump_json(model, exclude_none=True).decode()


def exact_moment(model: IncrementModel, q: MomentQuery) -> float:
    """
    Exact moment of the increment law.

    Raises:
        InfiniteMomentError: If the moment is infinite for the model
    """
    return model.exact_moment(q)


def sample_increments(
    model: IncrementModel, n: int, stream: RandomStream
) -> NDArray[np.float64]:
    """n i.i.d. draws from the model as a float64 array."""
    check_positive("n", n)
    return model.sample(n, stream)


def sample_path(model: IncrementModel, n: int, stream: RandomStream) -> Path:
    """n i.i.d. draws from the model, reproducible for a fixed stream."""
    return Path.from_array(sample_increments(model, n, stream))


def _require_finite(model: IncrementModel) -> FiniteModel:
    if isinstance(model, SymmetricParetoModel):
        raise PreconditionError("exact expectations need a finite-support model")
    return model


def lemma_gap(
    model: IncrementModel,
    lam: float,
    y: float,
    variant: ExponentVariant,
    beta: float | None = None,
) -> tuple[float, float]:
    """
    Exact sides of the one-step conditional-expectation lemmas.

    BENNETT: E exp(l xi - (l xi)^2/2 1{xi > y})
             <= exp(l^2 g(l y) E(xi^2 1{xi <= y}))
    COSH:    E exp(l xi - (l xi)^2/2 1{|xi| > y})
             <= exp(l^2 c(l y) E(xi^2 1{|xi| <= y}))

    Args:
        model: Finite-support model
        lam: lambda > 0
        y: Finite truncation level, ignored by BETA
        variant: BENNETT, COSH or BETA
        beta: Exponent in (1, 2), required by BETA

    Returns:
        (lhs, rhs)

    Raises:
        PreconditionError: On a continuous model, a positive mean (BENNETT,
            BETA) or an asymmetric model (COSH)
        DomainError: On lambda <= 0, y < 0 or beta outside (1, 2)
    """
    finite = _require_finite(model)
    check_positive("lambda", lam)
    check_nonnegative("y", y)
    atoms = finite.support()

    if variant is ExponentVariant.COSH:
        if not finite.is_symmetric():
            raise PreconditionError("COSH lemma requires a symmetric model")
    elif finite.mean() > ATOM_TOLERANCE:
        raise PreconditionError(f"{variant} lemma requires mean <= 0")

    match variant:
        case ExponentVariant.BENNETT:
            lhs = _atom_moment(
                atoms,
                lambda v: _exp(lam * v - (0.5 * (lam * v) ** 2 if v > y else 0.0)),
            )
            moment = finite.exact_moment(MomentQuery.second_below(y))
            rhs = _exp(lam * lam * kernel_g(lam * y) * moment)
        case ExponentVariant.COSH:
            lhs = _atom_moment(
                atoms,
                lambda v: _exp(
                    lam * v - (0.5 * (lam * v) ** 2 if abs(v) > y else 0.0)
                ),
            )
            moment = finite.exact_moment(MomentQuery.second_abs_below(y))
            rhs = _exp(lam * lam * kernel_c(lam * y) * moment)
        case ExponentVariant.BETA:
            if beta is None:
                raise PreconditionError("BETA lemma requires beta")
            b = check_beta("lemma", beta)
            lhs = _atom_moment(
                atoms, lambda v: _exp(lam * v - _beta_power(lam * v, b))
            )
            rhs = _exp(lam**b * finite.exact_moment(MomentQuery.beta_neg(b)))
        case _:
            raise PreconditionError(f"no conditional lemma for {variant}")

    _LOG.debug("lemma %s lambda=%g y=%g: lhs=%r rhs=%r", variant, lam, y, lhs, rhs)
    return lhs, rhs
