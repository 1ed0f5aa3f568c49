"""Unit tests for path characteristics.

Hand-computed values use the uniform law on {-2, 0.5, 3} and the path
(0.5, -2, 3), for which E(xi^2) = 13.25 / 3.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from pytailbounds.martingale.characteristics import (
    CharKind,
    CharSeries,
    char_series,
    char_values,
    g_beta_char,
    g_char,
    h_char,
    m_char,
    quad_char,
    sq_var,
    step_terms,
    v_norm,
    v_norm_values,
    validate_param,
)
from pytailbounds.martingale.config import MAX
from pytailbounds.martingale.errors import DomainError, PreconditionError
from pytailbounds.martingale.paths import Path
from pytailbounds.martingale.processes import (
    BoundedSupermartingaleModel,
    FiniteSupportModel,
    IncrementModel,
    RademacherModel,
    SymmetricParetoModel,
    TwoPointModel,
    sample_increments,
)
from pytailbounds.martingale.streams import RandomStream

THREE_POINT = FiniteSupportModel.uniform([-2.0, 0.5, 3.0])
SAMPLE_PATH = Path(increments=(0.5, -2.0, 3.0))

support_paths = st.lists(st.sampled_from([-2.0, 0.5, 3.0]), min_size=1, max_size=12)
SAMPLED_PATHS = 1000
FINITE_MODELS = [
    THREE_POINT,
    RademacherModel(),
    TwoPointModel(y=2.0, p=0.3),
    BoundedSupermartingaleModel(atoms=((-1.0, 0.5), (0.0, 0.1), (1.0, 0.4)), a=1.0),
]
SYMMETRIC_MODELS = [
    RademacherModel(),
    TwoPointModel(y=2.0, p=0.3),
    FiniteSupportModel.uniform([-1.0, -0.25, 0.25, 1.0]),
    SymmetricParetoModel(alpha=1.2),
]


def sampled_batch(model: IncrementModel, n: int, seed: int = 29) -> np.ndarray:
    """SAMPLED_PATHS independent paths of n steps, one per row."""
    return np.stack(
        [
            sample_increments(model, n, RandomStream(seed, trial))
            for trial in range(SAMPLED_PATHS)
        ]
    )


class TestPath:
    """Test the realized path container."""

    def test_partial_sums(self):
        """partial_sums is the running total of the increments."""
        assert SAMPLE_PATH.partial_sums.tolist() == [0.5, -1.5, 1.5]

    def test_arrays_are_read_only(self):
        """The cached arrays cannot be mutated."""
        with pytest.raises(ValueError):
            SAMPLE_PATH.array[0] = 1.0

    def test_empty_path_rejected(self):
        """A path has at least one step."""
        with pytest.raises(ValidationError):
            Path(increments=())

    def test_scaled(self):
        """scaled multiplies every increment."""
        assert SAMPLE_PATH.scaled(2.0).increments == (1.0, -4.0, 6.0)


class TestQuadraticCharacteristics:
    """Test <S>, [S], G, H and M on hand-computed examples."""

    def test_quad_char(self):
        """<S>_3 on the sample path is 3 E(xi^2) = 13.25."""
        assert quad_char(SAMPLE_PATH, THREE_POINT).final == pytest.approx(13.25)

    def test_quad_char_degenerate(self):
        """A law concentrated at 0 has <S> = 0."""
        model = FiniteSupportModel(atoms=((0.0, 1.0),))
        assert quad_char(Path(increments=(0.0,) * 4), model).values == (0.0,) * 4

    def test_quad_char_rademacher(self):
        """<S>_k = k for fair signs."""
        path = Path(increments=(1.0, -1.0, 1.0, 1.0, -1.0))
        assert quad_char(path, RademacherModel()).values == (1.0, 2.0, 3.0, 4.0, 5.0)

    def test_sq_var(self):
        """[S] sums the squared increments."""
        assert sq_var(SAMPLE_PATH).values == (0.25, 4.25, 13.25)
        assert sq_var(Path(increments=(1.0, -1.0))).values == (1.0, 2.0)
        assert sq_var(Path(increments=(0.0, 0.0))).values == (0.0, 0.0)

    def test_g_char(self):
        """G^1 on the sample path."""
        assert g_char(SAMPLE_PATH, THREE_POINT, 1.0).final == pytest.approx(13.25)

    def test_h_char(self):
        """H^1 on the sample path."""
        assert h_char(SAMPLE_PATH, THREE_POINT, 1.0).final == pytest.approx(26.25)

    def test_m_char(self):
        """M^1 on the sample path."""
        assert m_char(SAMPLE_PATH, THREE_POINT, 1.0).final == pytest.approx(13.25)

    def test_infinite_truncation_reduces_to_quad_char(self):
        """G, H and M at y = inf equal <S>."""
        quad = quad_char(SAMPLE_PATH, THREE_POINT).values
        assert g_char(SAMPLE_PATH, THREE_POINT, MAX).values == quad
        assert h_char(SAMPLE_PATH, THREE_POINT, MAX).values == quad
        assert m_char(SAMPLE_PATH, THREE_POINT, MAX).values == quad

    def test_upper_bound_truncation_reduces_to_quad_char(self):
        """G at y = max atom, and M at y = max |atom|, equal <S>."""
        quad = quad_char(SAMPLE_PATH, THREE_POINT).values
        assert g_char(SAMPLE_PATH, THREE_POINT, 3.0).values == quad
        assert m_char(SAMPLE_PATH, THREE_POINT, 3.0).values == quad

    def test_zero_truncation_m_is_sq_var(self):
        """M at y = 0 is [S]."""
        values = m_char(SAMPLE_PATH, THREE_POINT, 0.0).values
        assert values == sq_var(SAMPLE_PATH).values

    @given(support_paths, st.floats(min_value=0.0, max_value=4.0))
    def test_g_below_h(self, increments, y):
        """G^y never exceeds H^y."""
        path = Path(increments=tuple(increments))
        g = g_char(path, THREE_POINT, y).array
        h = h_char(path, THREE_POINT, y).array
        assert np.all(g <= h + 1e-12)

    @given(support_paths, st.floats(min_value=0.0, max_value=4.0))
    def test_series_are_nondecreasing(self, increments, y):
        """Every characteristic is nondecreasing in k."""
        path = Path(increments=tuple(increments))
        for series in (
            g_char(path, THREE_POINT, y),
            h_char(path, THREE_POINT, y),
            m_char(path, THREE_POINT, y),
        ):
            assert np.all(np.diff(series.array) >= 0)

    def test_pareto_quad_char_needs_variance(self):
        """<S> is undefined when E(xi^2) is infinite."""
        path = Path(increments=(1.0, -2.0))
        with pytest.raises(ArithmeticError):
            quad_char(path, SymmetricParetoModel(alpha=1.5))


class TestBetaCharacteristics:
    """Test G(beta) and the self-normalization norm."""

    def test_g_beta_rademacher(self):
        """G^0(3/2) adds 1/2 per step plus 1 for each up-step."""
        path = Path(increments=(1.0, -1.0, 1.0))
        series = g_beta_char(path, RademacherModel(), 1.5)
        assert series.values == (1.5, 2.0, 3.5)

    def test_g_beta_negative_path(self):
        """Down-steps only contribute the conditional term."""
        path = Path(increments=(-1.0, -1.0))
        assert g_beta_char(path, RademacherModel(), 1.5).values == (0.5, 1.0)

    def test_g_beta_three_point(self):
        """G^0(3/2) after a single step of 3."""
        series = g_beta_char(Path(increments=(3.0,)), THREE_POINT, 1.5)
        assert series.final == pytest.approx(2**1.5 / 3 + 3**1.5, rel=1e-14)
        assert series.final == pytest.approx(6.1389194045, abs=1e-9)

    def test_g_beta_excludes_two(self):
        """G^0(beta) needs beta < 2."""
        with pytest.raises(DomainError):
            g_beta_char(SAMPLE_PATH, THREE_POINT, 2.0)

    def test_selfnorm_kind_requires_symmetry(self):
        """The self-normalized characteristic refuses an asymmetric law."""
        with pytest.raises(PreconditionError):
            char_series(CharKind.G_BETA_SELFNORM, SAMPLE_PATH, THREE_POINT, 1.5)

    def test_selfnorm_kind_on_symmetric_model(self):
        """|xi|^beta / 2 + (xi^+)^beta per step for fair signs."""
        path = Path(increments=(1.0, -1.0))
        series = char_series(CharKind.G_BETA_SELFNORM, path, RademacherModel(), 2.0)
        assert series.values == (1.5, 2.0)

    def test_v_norm_euclidean(self):
        """V_n(2) is the Euclidean norm."""
        assert v_norm(Path(increments=(3.0, -4.0)), 2.0) == pytest.approx(5.0)

    def test_v_norm_three_halves(self):
        """V_n(3/2) of (3, -4)."""
        expected = (3**1.5 + 4**1.5) ** (2 / 3)
        value = v_norm(Path(increments=(3.0, -4.0)), 1.5)
        assert value == pytest.approx(expected, rel=1e-14)
        assert value == pytest.approx(5.5847, abs=1e-4)

    def test_v_norm_zero_path(self):
        """V_n is 0 on the zero path."""
        assert v_norm(Path(increments=(0.0, 0.0)), 1.5) == 0.0

    @given(
        st.lists(
            st.floats(min_value=-10, max_value=10).map(lambda v: round(v, 6)),
            min_size=1,
            max_size=10,
        ),
        st.floats(min_value=0.01, max_value=100),
        st.floats(min_value=1.05, max_value=2.0),
    )
    def test_v_norm_homogeneous(self, increments, scale, beta):
        """V_n(beta) is positively homogeneous."""
        path = Path(increments=tuple(increments))
        expected = scale * v_norm(path, beta)
        assert v_norm(path.scaled(scale), beta) == pytest.approx(
            expected, rel=1e-9, abs=1e-300
        )


class TestDispatch:
    """Test parameter validation and vectorized evaluation."""

    def test_y_kind_needs_level(self):
        """G, H and M need a truncation level."""
        with pytest.raises(DomainError):
            validate_param(CharKind.G, None)

    def test_negative_level_rejected(self):
        """A negative truncation level is rejected."""
        with pytest.raises(DomainError):
            validate_param(CharKind.M, -0.5)

    def test_infinite_level_allowed(self):
        """y = inf is a valid truncation level."""
        assert validate_param(CharKind.H, math.inf) == math.inf

    def test_parameter_free_kinds(self):
        """<S>, [S] and <S>+[S] take no parameter."""
        assert validate_param(CharKind.SQ_VAR, None) is None
        assert not CharKind.QUAD_CHAR.uses_y
        assert CharKind.G_ABS_BETA.uses_beta

    def test_step_terms_shape(self):
        """Step terms keep the shape of the batch."""
        xi = np.array([[0.5, -2.0, 3.0], [3.0, 3.0, 3.0]])
        terms = step_terms(CharKind.H, xi, THREE_POINT, 1.0)
        assert terms.shape == xi.shape

    def test_batch_matches_single_paths(self):
        """Batched evaluation matches one path at a time."""
        rows = [(0.5, -2.0, 3.0), (3.0, 3.0, -2.0), (0.5, 0.5, 0.5)]
        batch = char_values(CharKind.G, np.array(rows), THREE_POINT, 1.0)
        for row, values in zip(rows, batch):
            single = g_char(Path(increments=row), THREE_POINT, 1.0)
            assert values.tolist() == list(single.values)

    def test_series_must_be_monotone(self):
        """CharSeries rejects a decreasing trajectory."""
        with pytest.raises(ValidationError):
            CharSeries(kind=CharKind.SQ_VAR, values=(1.0, 0.5))


class TestSampledReductions:
    """Reduction identities hold on sampled paths of every finite model."""

    @pytest.mark.parametrize("model", FINITE_MODELS, ids=lambda m: m.describe())
    def test_infinite_truncation_is_quad_char(self, model):
        """G, H and M at y = inf equal <S> on every path."""
        xi = sampled_batch(model, 15)
        quad = char_values(CharKind.QUAD_CHAR, xi, model)
        for kind in (CharKind.G, CharKind.H, CharKind.M):
            np.testing.assert_allclose(
                char_values(kind, xi, model, MAX), quad, rtol=1e-14
            )

    @pytest.mark.parametrize("model", FINITE_MODELS, ids=lambda m: m.describe())
    def test_truncation_at_support_bound_is_quad_char(self, model):
        """G at the largest atom and M at the largest |atom| equal <S>."""
        xi = sampled_batch(model, 15)
        quad = char_values(CharKind.QUAD_CHAR, xi, model)
        g = char_values(CharKind.G, xi, model, model.max_value())
        m = char_values(CharKind.M, xi, model, model.max_abs())
        np.testing.assert_allclose(g, quad, rtol=1e-14)
        np.testing.assert_allclose(m, quad, rtol=1e-14)

    @pytest.mark.parametrize("model", FINITE_MODELS, ids=lambda m: m.describe())
    def test_zero_truncation_m_is_sq_var(self, model):
        """M at y = 0 is the realized quadratic variation."""
        xi = sampled_batch(model, 15)
        np.testing.assert_allclose(
            char_values(CharKind.M, xi, model, 0.0),
            char_values(CharKind.SQ_VAR, xi, model),
            rtol=1e-14,
        )

    @pytest.mark.parametrize("model", FINITE_MODELS, ids=lambda m: m.describe())
    def test_quad_plus_sq_is_the_sum(self, model):
        """<S> + [S] is the sum of its two parts."""
        xi = sampled_batch(model, 15)
        total = char_values(CharKind.QUAD_CHAR, xi, model) + char_values(
            CharKind.SQ_VAR, xi, model
        )
        np.testing.assert_allclose(
            char_values(CharKind.QUAD_PLUS_SQ, xi, model), total, rtol=1e-13
        )

    @pytest.mark.parametrize("model", FINITE_MODELS, ids=lambda m: m.describe())
    @pytest.mark.parametrize("y", [0.0, 0.5, 1.0, 2.5])
    def test_g_below_h(self, model, y):
        """G^y never exceeds H^y."""
        xi = sampled_batch(model, 15)
        g = char_values(CharKind.G, xi, model, y)
        h = char_values(CharKind.H, xi, model, y)
        assert np.all(g <= h * (1 + 1e-14))


class TestSelfNormalizedCharacteristic:
    """G^0(beta) under symmetry is sandwiched by multiples of V_n(beta)^beta."""

    @pytest.mark.parametrize("model", SYMMETRIC_MODELS, ids=lambda m: m.describe())
    @pytest.mark.parametrize("beta", [1.2, 1.5, 2.0])
    def test_at_most_twice_v_norm_power(self, model, beta):
        """|xi|^beta / 2 + (xi^+)^beta lies between |xi|^beta / 2 and 2 |xi|^beta."""
        xi = sampled_batch(model, 20)
        final = char_values(CharKind.G_BETA_SELFNORM, xi, model, beta)[:, -1]
        power = v_norm_values(xi, beta) ** beta
        assert np.all(final <= 2.0 * power * (1 + 1e-12))
        assert np.all(final >= 0.5 * power * (1 - 1e-12))
