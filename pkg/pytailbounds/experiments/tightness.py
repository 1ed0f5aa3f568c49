"""Optimized Chernoff bound of the symmetric two-point law.

For i.i.d. increments with P(xi = +-y) = p/2 and P(xi = 0) = 1 - p,
p = v^2/(n y^2),

    log E exp(l (S_n - x)) = n log(1 + p (cosh(l y) - 1)) - l x.

Its infimum over l >= 0 increases with n towards log b0(x, y, v).
"""

import logging
import math

import numpy as np
from mpmath import mp, mpf
from pydantic import BaseModel, Field

from ..martingale.bounds import BoundParams, ExponentVariant, b0, lambda_star
from ..martingale.config import GOLDEN_RELATIVE_WIDTH, INFIMUM_WORKING_DPS
from ..martingale.domains import check_positive
from ..martingale.errors import DomainError
from ..martingale.infimum import golden_section
from .config import DEFAULT_LAMBDA_GRID_RESOLUTION, TIGHTNESS_LAMBDA_SPAN
from .report import ReportTable

_LOG = logging.getLogger(__name__)


class TightnessRow(BaseModel):
    """One horizon of the two-point table; CSV columns n,p,lambda,inf,B0,gap."""

    n: int
    p: float
    lam: float = Field(alias="lambda")
    inf: float
    b0: float = Field(alias="B0")
    gap: float


def twopoint_log_mgf(lam: float, x: float, y: float, p: float, n: int) -> float:
    """n log(1 + p (cosh(l y) - 1)) - l x, with cosh - 1 = 2 sinh^2(l y / 2)."""
    half = math.sinh(0.5 * lam * y)
    return n * math.log1p(2.0 * p * half * half) - lam * x


def _mp_log_mgf(lam: mpf, x: float, y: float, p: float, n: int) -> mpf:
    half = mp.sinh(lam * mpf(y) / 2)
    return n * mp.log1p(2 * mpf(p) * half * half) - lam * mpf(x)


def optimize_twopoint(
    x: float, y: float, v: float, n: int, resolution: int
) -> tuple[float, float]:
    """
    Minimize the two-point log-mgf over l >= 0.

    A uniform grid on [0, span * lambda_star(COSH)] locates the minimum;
    golden-section search refines it between the neighbouring grid points.

    Returns:
        (lambda, log of the infimum)
    """
    p = v * v / (n * y * y)
    span = TIGHTNESS_LAMBDA_SPAN * lambda_star(
        ExponentVariant.COSH, BoundParams(x=x, y=y, v=v)
    )
    grid = np.linspace(0.0, span, resolution + 1)
    values = [twopoint_log_mgf(float(lam), x, y, p, n) for lam in grid]
    best = int(np.argmin(values))
    if best == resolution:
        _LOG.warning("two-point minimum at the grid edge for n=%d", n)
    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, resolution)]

    with mp.workdps(INFIMUM_WORKING_DPS):

        def f(lam: mpf) -> mpf:
            return _mp_log_mgf(lam, x, y, p, n)

        a, b = golden_section(f, mpf(low), mpf(high), GOLDEN_RELATIVE_WIDTH)
        lam = (a + b) / 2
        refined = float(f(lam))

    # the grid point wins when refinement does not improve on it
    if values[best] <= refined:
        return float(grid[best]), values[best]
    return float(lam), refined


def tightness_twopoint(
    x: float,
    y: float,
    v: float,
    n_list: list[int],
    resolution: int = DEFAULT_LAMBDA_GRID_RESOLUTION,
) -> ReportTable[TightnessRow]:
    """
    inf over l >= 0 of E exp(l (S_n - x)) for each n, against b0(x, y, v).

    Raises:
        DomainError: If x, y or v is not positive, or v^2 > n y^2 for some n
    """
    check_positive("x", x)
    check_positive("y", y)
    check_positive("v", v)
    if resolution < 2:
        raise DomainError(f"resolution must be at least 2, got {resolution}")
    bound = b0(BoundParams(x=x, y=y, v=v))
    table: ReportTable[TightnessRow] = ReportTable(TightnessRow)

    for n in n_list:
        if n < 1 or v * v > n * y * y:
            raise DomainError(f"n={n} violates v^2 <= n y^2")
        lam, log_inf = optimize_twopoint(x, y, v, n, resolution)
        value = math.exp(log_inf)
        _LOG.info("n=%d: inf=%.10g b0=%.10g", n, value, bound)
        table.record(
            TightnessRow.model_validate(
                {
                    "n": n,
                    "p": v * v / (n * y * y),
                    "lambda": lam,
                    "inf": value,
                    "B0": bound,
                    "gap": bound - value,
                }
            )
        )
    return table
