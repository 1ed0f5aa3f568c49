"""Closed-form tail bounds, Chernoff exponent families and their minimizers.

All functions are pure. Bounds are evaluated through their logarithms,
written in terms of u = xy/v^2 so that the y -> 0 limit is reached without
cancellation; y = 0 itself is an explicit branch.
"""

import math
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from .config import BOUND_SLACK
from .domains import check_beta, check_nonnegative, check_positive
from .errors import DomainError
from .kernels import bennett_rate_ratio, hyperbolic_rate_ratio, kernel_c, kernel_g


class BoundParams(BaseModel):
    """Threshold x, truncation level y (a in the bounded case) and budget scale v."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    x: float = Field(ge=0, description="Tail threshold")
    y: float = Field(ge=0, description="Truncation level")
    v: float = Field(gt=0, description="Variance budget scale (budget is v^2)")


class BetaParams(BaseModel):
    """Threshold x, budget scale v (budget is v^beta) and exponent beta."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    x: float = Field(gt=0, description="Tail threshold")
    v: float = Field(gt=0, description="Budget scale")
    beta: float = Field(gt=1, le=2, description="Moment exponent")


class ExponentVariant(StrEnum):
    """Chernoff exponent families, one per inequality."""

    BENNETT = "BENNETT"  # -lx + ((e^{ly}-1-ly)/y^2) v^2
    COSH = "COSH"  # -lx + ((cosh(ly)-1)/y^2) v^2
    BETA = "BETA"  # -lx + l^b v^b
    BERNSTEIN = "BERNSTEIN"  # -lx + l^2 v^2 / (2(1 - ly/3))


class ConstantChoice(StrEnum):
    """Which self-normalized constant to use."""

    PAPER = "PAPER"
    DERIVED = "DERIVED"


VariantParams = BoundParams | BetaParams


def _checked(value: float) -> float:
    assert 0.0 <= value <= 1.0 + BOUND_SLACK, f"bound value {value} outside [0, 1]"
    return value


def _gaussian_exponent(x: float, v: float) -> float:
    return -(x * x) / (2.0 * v * v)


def b1(p: BoundParams) -> float:
    """
    Bennett bound (v^2/(xy+v^2))^(x/y + v^2/y^2) e^(x/y).

    By convention b1(x, 0, v) = exp(-x^2/(2v^2)).
    """
    if p.y == 0:
        return _checked(math.exp(_gaussian_exponent(p.x, p.v)))
    u = p.x * p.y / (p.v * p.v)
    ratio = p.x / p.v
    return _checked(math.exp(-ratio * ratio * bennett_rate_ratio(u)))


def b2(p: BoundParams) -> float:
    """Bernstein bound exp(-x^2 / (2(v^2 + xy/3)))."""
    return _checked(math.exp(-(p.x * p.x) / (2.0 * (p.v * p.v + p.x * p.y / 3.0))))


def b0(p: BoundParams) -> float:
    """
    Hyperbolic bound exp(-l x + ((cosh(l y) - 1)/y^2) v^2) at l = lambda_star(COSH).

    With u = xy/v^2 the minimizer is asinh(u)/y and cosh(asinh u) = sqrt(1+u^2),
    which gives the closed form used here. b0(x, 0, v) = exp(-x^2/(2v^2)).
    """
    if p.y == 0:
        return _checked(math.exp(_gaussian_exponent(p.x, p.v)))
    u = p.x * p.y / (p.v * p.v)
    ratio = p.x / p.v
    return _checked(math.exp(-ratio * ratio * hyperbolic_rate_ratio(u)))


def b_subgamma(p: BoundParams) -> float:
    """
    Minimized Bernstein-type Chernoff bound, lying between b1 and b2.

    inf over l of exp(-l x + l^2 v^2 / (2(1 - l y/3))) equals
    exp(-2x^2 / (v^2 (s+1)^2)) with s = sqrt(1 + 2xy/(3v^2)).
    """
    s = math.sqrt(1.0 + 2.0 * p.x * p.y / (3.0 * p.v * p.v))
    return _checked(math.exp(-2.0 * p.x * p.x / (p.v * p.v * (s + 1.0) ** 2)))


def require_variant_params(variant: ExponentVariant, params: VariantParams) -> None:
    """Raise DomainError unless params carry what the variant needs."""
    expected = BetaParams if variant is ExponentVariant.BETA else BoundParams
    if not isinstance(params, expected):
        raise DomainError(
            f"{variant} requires {expected.__name__}, got {type(params).__name__}"
        )


def lambda_star(variant: ExponentVariant, params: VariantParams) -> float:
    """
    Closed-form minimizer of exponent_family over lambda > 0.

    Args:
        variant: Exponent family
        params: BoundParams (BENNETT, COSH, BERNSTEIN) or BetaParams (BETA)

    Returns:
        The unique minimizing lambda

    Raises:
        DomainError: If x <= 0 or params do not match the variant
    """
    require_variant_params(variant, params)
    check_positive("x", params.x)

    if isinstance(params, BetaParams):
        beta = check_beta("lambda_star", params.beta)
        return (params.x / (beta * params.v**beta)) ** (1.0 / (beta - 1.0))

    x, y, v2 = params.x, params.y, params.v * params.v
    if variant is ExponentVariant.BERNSTEIN:
        s = math.sqrt(1.0 + 2.0 * x * y / (3.0 * v2))
        return 2.0 * x / (v2 * s * (s + 1.0))
    if y == 0:
        # lim_{y -> 0} lambda = x / v^2
        return x / v2
    u = x * y / v2
    if variant is ExponentVariant.BENNETT:
        return math.log1p(u) / y
    # log(sqrt(1 + u^2) + u) = asinh(u)
    return math.asinh(u) / y


def exponent_family(
    variant: ExponentVariant, lam: float, params: VariantParams
) -> float:
    """
    Logarithm of the pre-optimization Chernoff bound at a given lambda.

    The result is convex in lambda and vanishes at lambda = 0. At y = 0 the
    kernels take their limit 1/2, i.e. the exponent becomes -lx + l^2 v^2/2.
    BERNSTEIN is +inf for lambda >= 3/y.

    Raises:
        DomainError: If lambda is negative or params do not match the variant
    """
    require_variant_params(variant, params)
    check_nonnegative("lambda", lam, allow_inf=False)

    if isinstance(params, BetaParams):
        check_beta("exponent_family", params.beta)
        return -lam * params.x + (lam * params.v) ** params.beta

    x, y, v2 = params.x, params.y, params.v * params.v
    if variant is ExponentVariant.BERNSTEIN:
        denominator = 1.0 - lam * y / 3.0
        if denominator <= 0:
            return math.inf
        return -lam * x + lam * lam * v2 / (2.0 * denominator)

    kernel = kernel_g if variant is ExponentVariant.BENNETT else kernel_c
    scale = kernel(lam * y)
    if lam == 0:
        return 0.0
    return -lam * x + v2 * lam * lam * scale


def c_beta(beta: float) -> float:
    """Maximal-inequality constant beta^(1/(1-beta)) (1 - 1/beta), beta in (1, 2)."""
    check_beta("c_beta", beta)
    return beta ** (1.0 / (1.0 - beta)) * (1.0 - 1.0 / beta)


def c_tilde(beta: float, which: ConstantChoice = ConstantChoice.DERIVED) -> float:
    """
    Self-normalized constant, beta in (1, 2].

    PAPER is the printed (beta/2)^(1/(1-beta)) (1 - 1/beta). DERIVED is
    (2 beta)^(1/(1-beta)) (1 - 1/beta), obtained from c_beta
    with the budget v^beta = 2.
    """
    check_beta("c_tilde", beta)
    base = beta / 2.0 if which is ConstantChoice.PAPER else 2.0 * beta
    return base ** (1.0 / (1.0 - beta)) * (1.0 - 1.0 / beta)


def theorem2_bound(p: BetaParams) -> float:
    """exp(-C(beta) (x/v)^(beta/(beta-1))), homogeneous in (x, v)."""
    check_beta("theorem2", p.beta)
    power = p.beta / (p.beta - 1.0)
    return _checked(math.exp(-c_beta(p.beta) * (p.x / p.v) ** power))


def selfnorm_bound(
    x: float, beta: float, which: ConstantChoice = ConstantChoice.DERIVED
) -> float:
    """exp(-C~(beta) x^(beta/(beta-1))) for the self-normalized maximum."""
    check_positive("x", x)
    check_beta("selfnorm", beta)
    power = beta / (beta - 1.0)
    return _checked(math.exp(-c_tilde(beta, which) * x**power))


def large_deviation_rate(x: float, b: float, beta: float) -> float:
    """
    Exponential rate C_x(beta) of P(max_k S_k >= n x) when G_n(beta) <= n b.

    theorem2_bound with v^beta = n b gives
    exp(-n C(beta) x^(beta/(beta-1)) b^(-1/(beta-1))).
    """
    check_positive("x", x)
    check_positive("b", b)
    check_beta("theorem2", beta)
    return c_beta(beta) * x ** (beta / (beta - 1.0)) * b ** (-1.0 / (beta - 1.0))


def large_deviation_bound(x: float, b: float, beta: float, n: int) -> float:
    """exp(-n C_x(beta)); equals theorem2_bound(n x, (n b)^(1/beta), beta)."""
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return _checked(math.exp(-n * large_deviation_rate(x, b, beta)))
