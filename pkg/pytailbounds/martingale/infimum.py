"""Numeric minimization of the Chernoff exponent families.

Cross-checks the closed-form minimizers: the exponent is bracketed by
doubling and then refined by golden-section search. The exponent is
evaluated in extended precision so that comparisons near the flat minimum
are not decided by rounding noise.
"""

import logging
import math
from collections.abc import Callable

from mpmath import mp, mpf

from .bounds import (
    BetaParams,
    BoundParams,
    ExponentVariant,
    VariantParams,
    require_variant_params,
)
from .config import (
    GOLDEN_RELATIVE_WIDTH,
    INFIMUM_WORKING_DPS,
    MAX_DOUBLINGS,
    MAX_GOLDEN_ITERATIONS,
)
from .domains import check_beta, check_positive
from .errors import BracketError
from .kernels import mp_kernel_c, mp_kernel_g

_LOG = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def mp_exponent(variant: ExponentVariant, lam: mpf, params: VariantParams) -> mpf:
    """exponent_family evaluated at the current mpmath precision."""
    x, v = mpf(params.x), mpf(params.v)
    if isinstance(params, BetaParams):
        return -lam * x + (lam * v) ** mpf(params.beta)

    y = mpf(params.y)
    if variant is ExponentVariant.BERNSTEIN:
        denominator = 1 - lam * y / 3
        if denominator <= 0:
            return mp.inf
        return -lam * x + lam * lam * v * v / (2 * denominator)
    kernel = mp_kernel_g if variant is ExponentVariant.BENNETT else mp_kernel_c
    return -lam * x + v * v * lam * lam * kernel(lam * y)


def golden_section(
    f: Callable[[mpf], mpf], a: mpf, b: mpf, relative_width: float
) -> tuple[mpf, mpf]:
    """
    Golden-section search.

    Given a function f with a single local minimum in [a, b], returns a
    sub-interval [c, d] containing the minimum with d - c <= relative_width * d.
    """
    inv_phi, inv_phi_square = mpf(INV_PHI), mpf(INV_PHI_SQUARE)
    h = b - a
    c = a + inv_phi_square * h
    d = a + inv_phi * h
    yc, yd = f(c), f(d)

    for _ in range(MAX_GOLDEN_ITERATIONS):
        if b - a <= relative_width * b:
            break
        if yc < yd:
            b, d, yd = d, c, yc
            h = inv_phi * h
            c = a + inv_phi_square * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = inv_phi * h
            d = a + inv_phi * h
            yd = f(d)

    return (a, d) if yc < yd else (c, b)


def numeric_infimum(
    variant: ExponentVariant, params: VariantParams
) -> tuple[float, float]:
    """
    Minimize exponent_family over lambda in (0, lambda_hi].

    lambda_hi starts at 1/v, capped at 1.5/y for BERNSTEIN, and doubles while
    the exponent keeps decreasing; golden-section search then narrows
    [0, 2 lambda_hi] to relative width GOLDEN_RELATIVE_WIDTH.

    Args:
        variant: Exponent family
        params: Parameters matching the variant

    Returns:
        (lambda, value) at the located minimum

    Raises:
        DomainError: If x <= 0
        BracketError: If no bracket is found within MAX_DOUBLINGS doublings
    """
    require_variant_params(variant, params)
    check_positive("x", params.x)
    if isinstance(params, BetaParams):
        check_beta("numeric_infimum", params.beta)

    with mp.workdps(INFIMUM_WORKING_DPS):

        def f(lam: mpf) -> mpf:
            return mp_exponent(variant, lam, params)

        hi = 1 / mpf(params.v)
        bernstein = variant is ExponentVariant.BERNSTEIN
        if bernstein and isinstance(params, BoundParams) and params.y > 0:
            # start below the pole at 3/y, where the exponent is finite
            hi = min(hi, mpf(1.5) / mpf(params.y))
        for doublings in range(MAX_DOUBLINGS + 1):
            if f(2 * hi) >= f(hi):
                break
            hi *= 2
        else:
            raise BracketError(
                f"{variant}: exponent still decreasing after {MAX_DOUBLINGS} doublings"
            )
        _LOG.debug("%s bracket [0, %s] after %d doublings", variant, 2 * hi, doublings)

        low, high = golden_section(f, mpf(0), 2 * hi, GOLDEN_RELATIVE_WIDTH)
        lam = (low + high) / 2
        return float(lam), float(f(lam))
