"""Chernoff exponent tabulated over a lambda grid."""

import numpy as np
from pydantic import BaseModel, Field

from ..martingale.bounds import (
    ExponentVariant,
    VariantParams,
    exponent_family,
    lambda_star,
)
from ..martingale.errors import DomainError
from .report import ReportTable


class CurveRow(BaseModel):
    lam: float = Field(alias="lambda")
    exponent: float
    is_lambda_star: bool


def _row(
    variant: ExponentVariant, lam: float, params: VariantParams, star: bool
) -> CurveRow:
    return CurveRow.model_validate(
        {
            "lambda": lam,
            "exponent": exponent_family(variant, lam, params),
            "is_lambda_star": star,
        }
    )


def exponent_curve(
    variant: ExponentVariant,
    params: VariantParams,
    points: int = 101,
    lambda_max: float | None = None,
) -> ReportTable[CurveRow]:
    """
    exponent_family on a uniform grid of [0, lambda_max], sorted by lambda.

    The closed-form minimizer is inserted as its own row with
    is_lambda_star set. lambda_max defaults to three times the minimizer.

    Raises:
        DomainError: If points < 2 or lambda_max is not positive
    """
    if points < 2:
        raise DomainError(f"points must be at least 2, got {points}")
    star = lambda_star(variant, params)
    upper = 3.0 * star if lambda_max is None else lambda_max
    if not upper > 0:
        raise DomainError(f"lambda_max must be positive, got {upper}")

    grid = [float(lam) for lam in np.linspace(0.0, upper, points)]
    rows = [(lam, False) for lam in grid if lam != star]
    rows.append((star, True))
    rows.sort()

    table: ReportTable[CurveRow] = ReportTable(CurveRow)
    for lam, is_star in rows:
        table.record(_row(variant, lam, params, is_star))
    return table
