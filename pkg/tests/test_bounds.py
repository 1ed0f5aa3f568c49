"""Unit tests for the closed-form bounds and exponent families."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from pytailbounds.martingale.bounds import (
    BetaParams,
    BoundParams,
    ConstantChoice,
    ExponentVariant,
    b0,
    b1,
    b2,
    b_subgamma,
    c_beta,
    c_tilde,
    exponent_family,
    lambda_star,
    large_deviation_bound,
    large_deviation_rate,
    selfnorm_bound,
    theorem2_bound,
)
from pytailbounds.martingale.errors import DomainError

GAUSSIAN = math.exp(-0.5)

X_GRID = [0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0, 12.0]
Y_GRID = [0.0, 1e-6, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0]
V_GRID = [0.5, 1.0, 3.0]

positive = st.floats(min_value=1e-3, max_value=1e3)
betas = st.floats(min_value=1.05, max_value=1.95)


def params(x: float, y: float, v: float) -> BoundParams:
    return BoundParams(x=x, y=y, v=v)


class TestClassicalBounds:
    """Test b1, b2, b0 and b_subgamma at hand-computed points."""

    @pytest.mark.parametrize("bound", [b0, b1, b2, b_subgamma])
    def test_zero_threshold(self, bound):
        """Every bound is trivial at x = 0."""
        assert bound(params(0, 1, 1)) == 1.0

    def test_bennett(self):
        """(1/2)^2 e = e/4."""
        assert b1(params(1, 1, 1)) == pytest.approx(math.e / 4, rel=1e-13)

    def test_bernstein(self):
        """b2(1, 1, 1) = e^(-3/8)."""
        assert b2(params(1, 1, 1)) == pytest.approx(math.exp(-3 / 8), rel=1e-14)

    def test_hyperbolic(self):
        """b0(1, 1, 1) = e^(sqrt 2 - 1) / (1 + sqrt 2)."""
        expected = math.exp(math.sqrt(2) - 1 - math.log(1 + math.sqrt(2)))
        assert b0(params(1, 1, 1)) == pytest.approx(expected, rel=1e-13)
        assert b0(params(1, 1, 1)) == pytest.approx(0.6267687252, abs=1e-10)

    @pytest.mark.parametrize("bound", [b0, b1, b2, b_subgamma])
    def test_gaussian_limit(self, bound):
        """y = 0 gives exp(-x^2/(2v^2)) for every bound."""
        assert bound(params(1, 0, 1)) == pytest.approx(GAUSSIAN, rel=1e-15)

    def test_bennett_continuous_in_y(self):
        """b1 approaches the Gaussian bound as y -> 0."""
        for x in X_GRID:
            for v in V_GRID:
                limit = math.exp(-x * x / (2 * v * v))
                assert abs(b1(params(x, 1e-6, v)) - limit) <= 1e-4

    def test_ordering_on_grid(self):
        """b0 <= b1 <= b_subgamma <= b2 everywhere on the grid."""
        for x in X_GRID:
            for y in Y_GRID:
                for v in V_GRID:
                    p = params(x, y, v)
                    assert b0(p) <= b1(p) + 1e-12
                    assert b1(p) <= b_subgamma(p) + 1e-12
                    assert b_subgamma(p) <= b2(p) + 1e-12

    def test_negative_threshold_rejected(self):
        """BoundParams refuses x < 0."""
        with pytest.raises(ValidationError):
            params(-1, 1, 1)

    def test_zero_scale_rejected(self):
        """BoundParams refuses v = 0."""
        with pytest.raises(ValidationError):
            params(1, 1, 0)

    @given(positive, st.floats(min_value=0, max_value=1e3), positive)
    def test_values_are_probabilities(self, x, y, v):
        """All bounds lie in [0, 1]."""
        p = params(x, y, v)
        for bound in (b0, b1, b2, b_subgamma):
            assert 0.0 <= bound(p) <= 1.0

    @given(positive, positive, st.floats(min_value=0, max_value=100), positive)
    def test_decreasing_in_threshold(self, x1, x2, y, v):
        """b1 and b0 shrink as x grows."""
        low, high = min(x1, x2), max(x1, x2)
        assert b1(params(high, y, v)) <= b1(params(low, y, v)) * (1 + 1e-12)
        assert b0(params(high, y, v)) <= b0(params(low, y, v)) * (1 + 1e-12)


class TestExponentFamily:
    """Test lambda_star and the pre-optimization exponents."""

    def test_bennett_minimizer(self):
        """lambda_star(BENNETT) at (1, 1, 1) is log 2."""
        value = lambda_star(ExponentVariant.BENNETT, params(1, 1, 1))
        assert value == pytest.approx(math.log(2), rel=1e-15)

    def test_hyperbolic_minimizer(self):
        """lambda_star(COSH) at (1, 1, 1) is asinh 1."""
        value = lambda_star(ExponentVariant.COSH, params(1, 1, 1))
        assert value == pytest.approx(math.log(1 + math.sqrt(2)), rel=1e-15)

    def test_beta_minimizer(self):
        """lambda_star(BETA) at x = v = 1, beta = 3/2 is 4/9."""
        p = BetaParams(x=1, v=1, beta=1.5)
        assert lambda_star(ExponentVariant.BETA, p) == pytest.approx(4 / 9, rel=1e-14)

    def test_gaussian_minimizer_at_zero_truncation(self):
        """At y = 0 both minimizers are x / v^2."""
        for variant in (ExponentVariant.BENNETT, ExponentVariant.COSH):
            assert lambda_star(variant, params(2, 0, 2)) == 0.5

    def test_zero_lambda(self):
        """The exponent vanishes at lambda = 0."""
        for variant in (ExponentVariant.BENNETT, ExponentVariant.COSH):
            assert exponent_family(variant, 0.0, params(3, 2, 1)) == 0.0

    def test_beta_minimum_value(self):
        """The beta exponent at its minimizer is -C(3/2) = -4/27."""
        p = BetaParams(x=1, v=1, beta=1.5)
        lam = lambda_star(ExponentVariant.BETA, p)
        value = exponent_family(ExponentVariant.BETA, lam, p)
        assert value == pytest.approx(-4 / 27, rel=1e-13)

    def test_hyperbolic_minimum_matches_b0(self):
        """The hyperbolic exponent at its minimizer is log b0."""
        p = params(1, 1, 1)
        lam = lambda_star(ExponentVariant.COSH, p)
        value = exponent_family(ExponentVariant.COSH, lam, p)
        assert value == pytest.approx(-0.4671603248, abs=1e-10)
        assert value == pytest.approx(math.log(b0(p)), rel=1e-12)

    def test_bennett_minimum_matches_b1(self):
        """The Bennett exponent at its minimizer is log b1."""
        p = params(2, 0.5, 1.5)
        lam = lambda_star(ExponentVariant.BENNETT, p)
        value = exponent_family(ExponentVariant.BENNETT, lam, p)
        assert value == pytest.approx(math.log(b1(p)), rel=1e-12)

    def test_bernstein_minimum_matches_subgamma(self):
        """The Bernstein exponent at its minimizer is log b_subgamma."""
        p = params(2, 0.5, 1.5)
        lam = lambda_star(ExponentVariant.BERNSTEIN, p)
        value = exponent_family(ExponentVariant.BERNSTEIN, lam, p)
        assert value == pytest.approx(math.log(b_subgamma(p)), rel=1e-12)

    def test_bernstein_infinite_past_pole(self):
        """The Bernstein exponent is +inf at lambda = 3/y."""
        value = exponent_family(ExponentVariant.BERNSTEIN, 3.0, params(1, 1, 1))
        assert value == math.inf

    def test_minimizer_beats_neighbours(self):
        """No lambda on a fine grid beats the closed-form minimizer."""
        p = params(1.5, 0.7, 1.2)
        for variant in (ExponentVariant.BENNETT, ExponentVariant.COSH):
            lam = lambda_star(variant, p)
            best = exponent_family(variant, lam, p)
            for other in np.linspace(0.0, 3 * lam, 61):
                assert best <= exponent_family(variant, float(other), p) + 1e-14

    def test_mismatched_params_rejected(self):
        """Each variant insists on its own parameter type."""
        with pytest.raises(DomainError):
            lambda_star(ExponentVariant.BETA, params(1, 1, 1))
        with pytest.raises(DomainError):
            lambda_star(ExponentVariant.COSH, BetaParams(x=1, v=1, beta=1.5))

    def test_zero_threshold_has_no_minimizer(self):
        """x = 0 has no positive minimizer."""
        with pytest.raises(DomainError):
            lambda_star(ExponentVariant.BENNETT, params(0, 1, 1))

    def test_negative_lambda_rejected(self):
        """lambda must be non-negative."""
        with pytest.raises(DomainError):
            exponent_family(ExponentVariant.COSH, -0.1, params(1, 1, 1))

    def test_beta_error_names_the_operation(self):
        """A beta outside (1, 2] is reported by exponent_family itself."""
        p = BetaParams.model_construct(x=1.0, v=1.0, beta=2.5)
        with pytest.raises(DomainError, match="^exponent_family: "):
            exponent_family(ExponentVariant.BETA, 0.5, p)


class TestBetaConstants:
    """Test c_beta, c_tilde and the bounds built on them."""

    def test_c_beta_three_halves(self):
        """C(3/2) = 4/27."""
        assert c_beta(1.5) == pytest.approx(4 / 27, rel=1e-14)

    def test_c_beta_near_two(self):
        """C(beta) tends to 1/4 as beta -> 2."""
        assert c_beta(2 - 1e-9) == pytest.approx(0.25, abs=1e-6)

    def test_c_beta_small_beta(self):
        """C(1.1) = 1.1^-10 / 11."""
        assert c_beta(1.1) == pytest.approx(1.1**-10 / 11, rel=1e-12)
        assert c_beta(1.1) == pytest.approx(0.0350493899, abs=1e-10)

    @pytest.mark.parametrize("beta", [1.0, 2.0, 0.5, math.nan, math.inf])
    def test_c_beta_domain(self, beta):
        """C(beta) is defined on the open interval (1, 2) only."""
        with pytest.raises(DomainError):
            c_beta(beta)

    def test_c_tilde_printed(self):
        """The printed constant is 16/27 at 3/2 and 1/2 at 2."""
        assert c_tilde(1.5, ConstantChoice.PAPER) == pytest.approx(16 / 27, rel=1e-14)
        assert c_tilde(2.0, ConstantChoice.PAPER) == pytest.approx(0.5, rel=1e-15)

    def test_c_tilde_derived(self):
        """The derived constant is 1/27 at 3/2 and is the default."""
        assert c_tilde(1.5) == pytest.approx(1 / 27, rel=1e-14)
        assert c_tilde(1.5, ConstantChoice.DERIVED) == c_tilde(1.5)

    @given(betas)
    def test_derived_constant_is_c_beta_at_budget_two(self, beta):
        """C~(beta) x^q = C(beta) (x / 2^(1/beta))^q with q = beta/(beta-1)."""
        q = beta / (beta - 1)
        rescaled = c_beta(beta) * 2.0 ** (-q / beta)
        assert c_tilde(beta) == pytest.approx(rescaled, rel=1e-12)

    def test_theorem2_bound(self):
        """exp(-C(3/2)) at x = v = 1."""
        p = BetaParams(x=1, v=1, beta=1.5)
        assert theorem2_bound(p) == pytest.approx(math.exp(-4 / 27), rel=1e-14)
        assert theorem2_bound(p) == pytest.approx(0.8623605586, abs=1e-10)

    def test_theorem2_tiny_threshold(self):
        """The beta bound tends to 1 as x -> 0."""
        assert theorem2_bound(BetaParams(x=1e-12, v=1, beta=1.5)) == pytest.approx(1.0)

    @given(positive, positive, betas, st.floats(min_value=0.01, max_value=100))
    def test_theorem2_homogeneous(self, x, v, beta, scale):
        """The beta bound depends on x / v only."""
        original = theorem2_bound(BetaParams(x=x, v=v, beta=beta))
        scaled = theorem2_bound(BetaParams(x=scale * x, v=scale * v, beta=beta))
        assert scaled == pytest.approx(original, rel=1e-9, abs=1e-300)

    def test_theorem2_excludes_two(self):
        """beta = 2 is outside the beta bound's domain."""
        with pytest.raises(ValidationError):
            BetaParams(x=1, v=1, beta=2.5)
        with pytest.raises(DomainError):
            theorem2_bound(BetaParams(x=1, v=1, beta=2.0))

    def test_selfnorm_printed_at_two(self):
        """At beta = 2 the printed constant gives exp(-x^2/2)."""
        value = selfnorm_bound(1.0, 2.0, ConstantChoice.PAPER)
        assert value == pytest.approx(GAUSSIAN, rel=1e-15)

    def test_selfnorm_derived(self):
        """exp(-x^3/27) at beta = 3/2."""
        value = selfnorm_bound(1.0, 1.5, ConstantChoice.DERIVED)
        assert value == pytest.approx(math.exp(-1 / 27), rel=1e-14)
        assert value == pytest.approx(0.9636220315, abs=1e-10)

    def test_selfnorm_tiny_threshold(self):
        """The self-normalized bound tends to 1 as x -> 0."""
        assert selfnorm_bound(1e-12, 1.5) == pytest.approx(1.0)

    def test_selfnorm_rejects_nonpositive_threshold(self):
        """x must be positive."""
        with pytest.raises(DomainError):
            selfnorm_bound(0.0, 1.5)


class TestLargeDeviation:
    """Test the exponential rate of P(max S_k >= n x)."""

    def test_rate_at_unit_arguments(self):
        """C_1(3/2) with b = 1 is C(3/2)."""
        assert large_deviation_rate(1.0, 1.0, 1.5) == pytest.approx(4 / 27)

    @pytest.mark.parametrize("n", [1, 5, 40])
    def test_matches_theorem2_with_scaled_budget(self, n):
        """exp(-n C_x) equals the beta bound at (n x, (n b)^(1/beta))."""
        x, b, beta = 0.3, 0.8, 1.4
        scaled = BetaParams(x=n * x, v=(n * b) ** (1 / beta), beta=beta)
        expected = theorem2_bound(scaled)
        assert large_deviation_bound(x, b, beta, n) == pytest.approx(
            expected, rel=1e-10
        )

    def test_rejects_empty_horizon(self):
        """n must be at least 1."""
        with pytest.raises(DomainError):
            large_deviation_bound(1.0, 1.0, 1.5, 0)
