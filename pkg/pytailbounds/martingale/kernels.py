"""Numerically stable kernels of the Chernoff exponents.

g(t) = (e^t - 1 - t) / t^2 and c(t) = (cosh t - 1) / t^2 both tend to 1/2 at
t = 0, where the direct formulas cancel catastrophically. Below
SERIES_THRESHOLD they are evaluated from their Taylor series.
"""

import math

from mpmath import mp, mpf

from .config import BENNETT_SERIES_TERMS, BENNETT_SERIES_THRESHOLD, SERIES_THRESHOLD
from .domains import check_nonnegative


def kernel_g(t: float) -> float:
    """Bennett kernel (e^t - 1 - t) / t^2, nondecreasing, g(0) = 1/2."""
    if t < SERIES_THRESHOLD:
        return 0.5 + t * (1 / 6 + t * (1 / 24 + t * (1 / 120 + t / 720)))
    try:
        return (math.expm1(t) - t) / (t * t)
    except OverflowError:
        return math.inf


def kernel_c(t: float) -> float:
    """Hyperbolic kernel (cosh t - 1) / t^2, nondecreasing, c(0) = 1/2."""
    if t < SERIES_THRESHOLD:
        t2 = t * t
        return 0.5 + t2 * (1 / 24 + t2 / 720)
    try:
        # cosh t - 1 = 2 sinh^2(t/2)
        return 2.0 * (math.sinh(0.5 * t) / t) ** 2
    except OverflowError:
        return math.inf


def stable_kernels(t: float) -> tuple[float, float]:
    """
    Evaluate both exponent kernels at a non-negative argument.

    Args:
        t: Kernel argument, usually lambda * y

    Returns:
        (g, c) with g = (e^t-1-t)/t^2 and c = (cosh t-1)/t^2

    Raises:
        DomainError: If t is negative or NaN
    """
    check_nonnegative("t", t, allow_inf=True)
    return kernel_g(t), kernel_c(t)


def bennett_rate_ratio(u: float) -> float:
    """
    Bennett rate over u^2: ((1 + u) log(1 + u) - u) / u^2 for u >= 0, 1/2 at u = 0.

    log b1(x, y, v) = -(x/v)^2 * bennett_rate_ratio(xy/v^2), which stays
    accurate as y -> 0.
    """
    if u < BENNETT_SERIES_THRESHOLD:
        # sum_{k>=2} (-1)^k u^(k-2) / (k (k - 1))
        total = 0.0
        power = 1.0
        for k in range(2, BENNETT_SERIES_TERMS + 2):
            term = power / (k * (k - 1))
            total += term if k % 2 == 0 else -term
            power *= u
        return total
    return ((1.0 + u) * math.log1p(u) - u) / (u * u)


def hyperbolic_rate_ratio(u: float) -> float:
    """
    Rate of the hyperbolic bound over u^2, 1/2 at u = 0:
    (u asinh(u) - (sqrt(1 + u^2) - 1)) / u^2.

    log b0(x, y, v) = -(x/v)^2 * hyperbolic_rate_ratio(xy/v^2).
    """
    if u == 0:
        return 0.5
    return math.asinh(u) / u - 1.0 / (1.0 + math.sqrt(1.0 + u * u))


def mp_kernel_g(t: mpf) -> mpf:
    """Extended-precision Bennett kernel for the current mpmath precision."""
    if t < mp.mpf("1e-8"):
        return mp.mpf(1) / 2 + t / 6 + t * t / 24
    return (mp.expm1(t) - t) / (t * t)


def mp_kernel_c(t: mpf) -> mpf:
    """Extended-precision hyperbolic kernel for the current mpmath precision."""
    if t < mp.mpf("1e-8"):
        return mp.mpf(1) / 2 + t * t / 24
    half = mp.sinh(t / 2)
    return 2 * half * half / (t * t)
