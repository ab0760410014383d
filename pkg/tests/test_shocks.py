import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from warbench.dynamics import ShockRealization
from warbench.errors import ParameterError
from warbench.shocks import (
    COPULA_KINDS,
    Copula,
    Marginals,
    StepShockModel,
    build_joint,
    cross_moment,
    sample_outcome_indices,
    sample_shock,
    sample_shock_array,
)

ALL_COPULAS = [
    Copula("independence"),
    Copula("frechet_upper"),
    Copula("frechet_lower"),
    Copula("gaussian", 0.65),
    Copula("gaussian", -0.8),
    Copula("clayton", 2.0),
    Copula("clayton", 0.4),
]


class TestBuildJoint:
    def test_independence_half_half(self):
        m = build_joint(Marginals(0.5, 0.5), Copula("independence"))
        assert (m.q00, m.q10, m.q01, m.q11) == (0.25, 0.25, 0.25, 0.25)

    def test_comonotone(self):
        m = build_joint(Marginals(0.3, 0.6), Copula("frechet_upper"))
        assert m.q11 == pytest.approx(0.3, abs=1e-12)
        assert m.q10 == pytest.approx(0.0, abs=1e-12)
        assert m.q01 == pytest.approx(0.3, abs=1e-12)
        assert m.q00 == pytest.approx(0.4, abs=1e-12)

    def test_countermonotone(self):
        m = build_joint(Marginals(0.3, 0.6), Copula("frechet_lower"))
        assert m.q11 == pytest.approx(0.0, abs=1e-12)

    def test_marginals_and_normalization_grid(self):
        rng = np.random.default_rng(101)
        for _ in range(100):
            pb, pr = rng.random(2)
            for cop in ALL_COPULAS:
                m = build_joint(Marginals(pb, pr), cop)
                pmf = np.array([m.q00, m.q10, m.q01, m.q11])
                assert abs(pmf.sum() - 1.0) <= 1e-12
                assert (pmf >= -1e-12).all()
                assert m.p_B == pytest.approx(pb, abs=1e-12)
                assert m.p_R == pytest.approx(pr, abs=1e-12)

    def test_frechet_ordering_of_q11(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            pb, pr = rng.random(2)
            lo = build_joint(Marginals(pb, pr), Copula("frechet_lower")).q11
            hi = build_joint(Marginals(pb, pr), Copula("frechet_upper")).q11
            for cop in ALL_COPULAS:
                q11 = build_joint(Marginals(pb, pr), cop).q11
                assert lo - 1e-12 <= q11 <= hi + 1e-12

    def test_gaussian_zero_rho_is_independence(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            pb, pr = rng.random(2)
            g = build_joint(Marginals(pb, pr), Copula("gaussian", 0.0))
            i = build_joint(Marginals(pb, pr), Copula("independence"))
            assert g.q00 == pytest.approx(i.q00, abs=1e-10)
            assert g.q11 == pytest.approx(i.q11, abs=1e-10)

    def test_degenerate_marginals(self):
        for cop in ALL_COPULAS:
            m = build_joint(Marginals(0.0, 0.37), cop)
            assert m.q10 == pytest.approx(0.0, abs=1e-12)
            assert m.q11 == pytest.approx(0.0, abs=1e-12)
            m = build_joint(Marginals(1.0, 0.37), cop)
            assert m.q00 == pytest.approx(0.0, abs=1e-12)
            assert m.q01 == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(pb=st.floats(0, 1), pr=st.floats(0, 1), idx=st.integers(0, len(ALL_COPULAS) - 1))
    def test_joint_is_valid_pmf_property(self, pb, pr, idx):
        m = build_joint(Marginals(pb, pr), ALL_COPULAS[idx])
        pmf = m.pmf()
        assert abs(pmf.sum() - 1.0) <= 1e-12
        assert (pmf >= 0).all()


class TestCopulaDomain:
    def test_gaussian_rho_open_interval(self):
        with pytest.raises(ParameterError):
            Copula("gaussian", 1.0)
        with pytest.raises(ParameterError):
            Copula("gaussian", None)

    def test_clayton_alpha_positive(self):
        with pytest.raises(ParameterError):
            Copula("clayton", 0.0)

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            Copula("student_t", 0.5)

    def test_kinds_registry(self):
        assert set(c.kind for c in ALL_COPULAS) == set(COPULA_KINDS)


class TestCrossMoment:
    def test_independence_is_product(self):
        m = build_joint(Marginals(0.5, 0.5), Copula("independence"))
        assert cross_moment(m) == 0.25
        rng = np.random.default_rng(31)
        for _ in range(200):
            pb, pr = rng.random(2)
            m = build_joint(Marginals(pb, pr), Copula("independence"))
            assert cross_moment(m) == pytest.approx(pb * pr, abs=5e-16)

    def test_comonotone_example(self):
        m = build_joint(Marginals(0.3, 0.6), Copula("frechet_upper"))
        assert cross_moment(m) == pytest.approx(0.3, abs=1e-12)

    def test_degenerate_marginal_kills_moment(self):
        for cop in ALL_COPULAS:
            m = build_joint(Marginals(0.0, 0.8), cop)
            assert cross_moment(m) == pytest.approx(0.0, abs=1e-12)


class TestModelValidation:
    def test_negative_atom_rejected(self):
        with pytest.raises(ParameterError):
            StepShockModel(-0.01, 0.5, 0.31, 0.2)

    def test_sum_must_be_one(self):
        with pytest.raises(ParameterError):
            StepShockModel(0.3, 0.3, 0.3, 0.3)

    def test_marginals_out_of_range(self):
        with pytest.raises(ParameterError):
            Marginals(1.2, 0.5)


class TestSampling:
    def test_point_mass(self):
        m = StepShockModel(1.0, 0.0, 0.0, 0.0)
        rng = np.random.default_rng(0)
        for _ in range(100):
            assert sample_shock(m, rng) == ShockRealization(0, 0)

    def test_same_seed_same_sequence(self):
        m = build_joint(Marginals(0.4, 0.7), Copula("clayton", 1.5))
        a = sample_shock_array(m, 50, 20, np.random.default_rng(99))
        b = sample_shock_array(m, 50, 20, np.random.default_rng(99))
        assert np.array_equal(a, b)

    def test_empirical_frequencies(self):
        m = build_joint(Marginals(0.5, 0.5), Copula("independence"))
        idx = sample_outcome_indices(m, 10**6, np.random.default_rng(2024))
        freq = np.bincount(idx, minlength=4) / 10**6
        np.testing.assert_allclose(freq, m.pmf(), atol=3e-3)

    def test_shock_array_shape_and_alphabet(self):
        m = build_joint(Marginals(0.3, 0.9), Copula("gaussian", 0.2))
        arr = sample_shock_array(m, 40, 7, np.random.default_rng(1))
        assert arr.shape == (40, 7, 2)
        assert set(np.unique(arr)) <= {0, 1}
