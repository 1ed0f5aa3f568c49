"""Randomized check of the one-step lemmas and the scalar inequalities."""

import logging
import math
from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel

from ..martingale.bounds import ExponentVariant
from ..martingale.processes import FiniteSupportModel, lemma_gap
from ..martingale.streams import derive_key
from .config import (
    DEFAULT_SEED,
    LEMMA_BETAS,
    LEMMA_LAMBDAS,
    LEMMA_MAX_SUPPORT,
    LEMMA_MODEL_COUNT,
    LEMMA_SLACK,
    LEMMA_VALUE_RANGE,
    LEMMA_YS,
    SCALAR_GRID_POINTS,
)
from .report import CellStatus, ReportTable

_LOG = logging.getLogger(__name__)


class LemmaRow(BaseModel):
    """Outcome of one family of inequality checks."""

    check: str
    evaluations: int
    violations: int
    worst_ratio: float  # max of lhs / rhs
    status: CellStatus


def within(lhs: float, rhs: float, slack: float = LEMMA_SLACK) -> bool:
    """lhs <= rhs up to relative and absolute slack."""
    return lhs <= rhs * (1.0 + slack) + slack


def random_model(index: int, seed: int = DEFAULT_SEED) -> FiniteSupportModel:
    """
    Model number index of the suite.

    Support size in 1..LEMMA_MAX_SUPPORT, values uniform on
    [-LEMMA_VALUE_RANGE, LEMMA_VALUE_RANGE], Dirichlet(1, ..., 1) masses.
    """
    generator = np.random.Generator(np.random.Philox(key=derive_key(seed, index)))
    size = int(generator.integers(1, LEMMA_MAX_SUPPORT + 1))
    values = generator.uniform(-LEMMA_VALUE_RANGE, LEMMA_VALUE_RANGE, size)
    masses = generator.dirichlet(np.ones(size)).tolist()
    # the last mass absorbs rounding so the total is 1 to within one ulp
    masses[-1] = max(0.0, 1.0 - math.fsum(masses[:-1]))
    return FiniteSupportModel(
        atoms=tuple((float(v), float(p)) for v, p in zip(values, masses))
    )


def nonpositive_mean(model: FiniteSupportModel) -> FiniteSupportModel:
    """The model itself, or its mirror image when its mean is positive."""
    if model.mean() <= 0:
        return model
    return FiniteSupportModel(atoms=tuple((-v, p) for v, p in model.atoms))


def symmetrized(model: FiniteSupportModel) -> FiniteSupportModel:
    """Split every atom's mass evenly between v and -v."""
    atoms: list[tuple[float, float]] = []
    for v, p in model.atoms:
        atoms.extend(((v, 0.5 * p), (-v, 0.5 * p)))
    return FiniteSupportModel(atoms=tuple(atoms))


def _row(check: str, pairs: list[tuple[float, float]]) -> LemmaRow:
    violations = sum(1 for lhs, rhs in pairs if not within(lhs, rhs))
    worst = max((lhs / rhs for lhs, rhs in pairs if rhs > 0), default=0.0)
    status = CellStatus.PASS if violations == 0 else CellStatus.FAIL
    if violations:
        _LOG.warning("%s: %d violations", check, violations)
    return LemmaRow(
        check=check,
        evaluations=len(pairs),
        violations=violations,
        worst_ratio=worst,
        status=status,
    )


def run_lemma_suite(
    seed: int = DEFAULT_SEED, models: int = LEMMA_MODEL_COUNT
) -> ReportTable[LemmaRow]:
    """lemma_gap over random finite models and the lambda, y and beta grids."""
    pairs: dict[str, list[tuple[float, float]]] = {
        "lemma_bennett": [],
        "lemma_cosh": [],
        "lemma_beta": [],
    }
    for index in range(models):
        base = random_model(index, seed)
        supermartingale = nonpositive_mean(base)
        symmetric = symmetrized(base)
        for lam in LEMMA_LAMBDAS:
            for y in LEMMA_YS:
                pairs["lemma_bennett"].append(
                    lemma_gap(supermartingale, lam, y, ExponentVariant.BENNETT)
                )
                pairs["lemma_cosh"].append(
                    lemma_gap(symmetric, lam, y, ExponentVariant.COSH)
                )
            for beta in LEMMA_BETAS:
                pairs["lemma_beta"].append(
                    lemma_gap(supermartingale, lam, 0.0, ExponentVariant.BETA, beta)
                )

    table: ReportTable[LemmaRow] = ReportTable(LemmaRow)
    for check, checked in pairs.items():
        table.record(_row(check, checked))
    return table


def _scalar_pairs(
    grid: NDArray[np.float64], sides: Callable[[float], tuple[float, float]]
) -> list[tuple[float, float]]:
    return [sides(float(t)) for t in grid]


def run_scalar_suite(points: int = SCALAR_GRID_POINTS) -> ReportTable[LemmaRow]:
    """The four elementary inequalities behind the lemmas, on dense grids."""
    table: ReportTable[LemmaRow] = ReportTable(LemmaRow)

    nonnegative = np.linspace(0.0, 50.0, points)
    table.record(
        _row(
            "exp(x - x^2/2) <= 1 + x",
            _scalar_pairs(nonnegative, lambda x: (math.exp(x - 0.5 * x * x), 1.0 + x)),
        )
    )

    real = np.linspace(-20.0, 20.0, points)
    table.record(
        _row(
            "cosh(x) <= exp(x^2/2)",
            _scalar_pairs(real, lambda x: (math.cosh(x), math.exp(0.5 * x * x))),
        )
    )

    for beta in LEMMA_BETAS:

        def beta_sides(x: float, beta: float = beta) -> tuple[float, float]:
            positive, negative = max(x, 0.0), max(-x, 0.0)
            return math.exp(x - positive**beta), 1.0 + x + negative**beta

        table.record(
            _row(
                f"exp(x - (x+)^b) <= 1 + x + (x-)^b, b={beta:g}",
                _scalar_pairs(real, beta_sides),
            )
        )

    below_three = np.linspace(0.0, 3.0, points, endpoint=False)
    table.record(
        _row(
            "e^t - 1 - t <= t^2 / (2(1 - t/3))",
            _scalar_pairs(
                below_three,
                lambda t: (math.expm1(t) - t, t * t / (2.0 * (1.0 - t / 3.0))),
            ),
        )
    )
    return table
