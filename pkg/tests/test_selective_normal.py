import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from selbayes import selective_normal as sn
from selbayes import special_fns as sf
from selbayes.errors import DomainError, InvalidObservationError
from selbayes.selective_normal import PriorKind, SplitNormalModel
from selbayes.simulate import sample_conditional

mp.mp.dps = 30


def h_oracle(n, gamma, t, theta, y):
    """P(Y >= y | Y1 > t) by mpmath quadrature over Y."""
    sd = 1 / mp.sqrt(n)
    if gamma == 1:
        return float(mp.ncdf((theta - y) / sd) / mp.ncdf((theta - t) / sd))
    n1 = gamma * n
    csd = mp.sqrt(1 / mp.mpf(n1) - 1 / mp.mpf(n))
    num = mp.quad(lambda s: mp.npdf(s, theta, sd) * mp.ncdf((s - t) / csd), [y, theta, mp.inf])
    return float(num / mp.ncdf(mp.sqrt(n1) * (theta - t)))


class TestModel:
    @pytest.mark.parametrize("kw", [dict(n=0), dict(n=5, gamma=0), dict(n=5, gamma=1.2), dict(n=5, t=math.nan)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            SplitNormalModel(**kw)

    def test_split_counts(self):
        m = SplitNormalModel(20, 0.75, 0)
        assert (m.n1, m.n2) == (15, 5)

    def test_prior_kind_parse(self):
        assert PriorKind.parse("Selective_Jeffreys") is PriorKind.SELECTIVE_JEFFREYS
        assert PriorKind.parse("U") is PriorKind.UNIFORM
        assert PriorKind.EXACT_MATCHING.data_dependent
        with pytest.raises(DomainError):
            PriorKind.parse("beta")


class TestSelection:
    def test_indicator(self):
        m = SplitNormalModel(20, 1, 0.3)
        assert sn.selection_function(m, 0.31) == 1.0
        assert sn.selection_function(m, 0.29) == 0.0

    def test_probit_midpoint(self):
        assert sn.selection_function(SplitNormalModel(20, 0.4, 1.0), 1.0) == pytest.approx(0.5)

    def test_probit_vs_simulation(self):
        m = SplitNormalModel(20, 0.5, 0)
        rng = np.random.default_rng(1)
        w = rng.normal(0, math.sqrt((1 / 0.5 - 1) / 20), 10 ** 6)
        hits = np.mean(0.3 + w > 0)
        se = math.sqrt(hits * (1 - hits) / 10 ** 6)
        val = sn.selection_function(m, 0.3)
        assert val == pytest.approx(sf.norm_cdf(math.sqrt(20) * 0.3))
        assert abs(val - hits) < 3 * se

    def test_probability(self):
        m = SplitNormalModel(20, 1, 0)
        assert sn.selection_probability(m, 0.0) == 0.5
        assert sn.selection_probability(m, -0.5) == pytest.approx(float(mp.ncdf(-mp.sqrt(20) * 0.5)), rel=1e-13)

    @pytest.mark.parametrize("gamma,theta", [(1.0, -0.4), (0.5, 0.2), (0.75, -1.0)])
    def test_probability_by_quadrature(self, gamma, theta):
        m = SplitNormalModel(20, gamma, 0.1)
        sd = 1 / math.sqrt(m.n1)
        val = mp.quad(lambda s: mp.npdf(s, theta, sd), [0.1, mp.inf])
        assert sn.selection_probability(m, theta) == pytest.approx(float(val), abs=1e-8)

    def test_probability_increasing(self):
        m = SplitNormalModel(20, 0.75, 0)
        assert np.all(np.diff(sn.selection_probability(m, np.linspace(-2, 2, 101))) > 0)


class TestConfidenceCdf:
    @pytest.mark.parametrize("gamma", [1.0, 0.75, 0.5])
    @pytest.mark.parametrize("theta,y", [(-0.5, 0.1), (0.0, 0.3), (0.4, 0.05), (-1.0, 0.6)])
    def test_against_quadrature_oracle(self, gamma, theta, y):
        m = SplitNormalModel(20, gamma, 0)
        assert sn.confidence_cdf(m, theta, y) == pytest.approx(h_oracle(20, gamma, 0, theta, y), rel=1e-7, abs=1e-12)

    def test_against_rejection_sampler(self):
        m = SplitNormalModel(20, 0.75, 0)
        draws = sample_conditional(m, 0.2, 10 ** 6, seed=3).samples
        est = np.mean(draws >= 0.1)
        se = math.sqrt(est * (1 - est) / draws.size)
        assert abs(sn.confidence_cdf(m, 0.2, 0.1) - est) < 3 * se

    def test_limits(self):
        m = SplitNormalModel(20, 1, 0)
        assert sn.confidence_cdf(m, 0.0, 1e-12) == pytest.approx(1.0)
        assert sn.confidence_cdf(m, 30.0, 0.2) == pytest.approx(1.0)
        assert sn.confidence_cdf(m, -30.0, 0.2) < 1e-6
        m = SplitNormalModel(20, 0.75, 0)
        assert sn.confidence_cdf(m, 30.0, 0.2) == pytest.approx(1.0)
        assert sn.confidence_cdf(m, -30.0, 0.2) < 1e-6

    @pytest.mark.parametrize("gamma", [1.0, 0.75])
    def test_monotone(self, gamma):
        m = SplitNormalModel(20, gamma, 0)
        th = np.linspace(-2, 1, 61)
        h = 1e-5
        fd = (sn.confidence_cdf(m, th + h, 0.2) - sn.confidence_cdf(m, th - h, 0.2)) / (2 * h)
        assert np.all(fd > 0)
        ys = np.linspace(0.01, 1.0, 40)
        vals = [sn.confidence_cdf(m, 0.1, y) for y in ys]
        assert np.all(np.diff(vals) < 0)

    def test_invalid_observation(self):
        with pytest.raises(InvalidObservationError):
            sn.confidence_cdf(SplitNormalModel(20, 1, 0), 0.0, -0.1)
        with pytest.raises(InvalidObservationError):
            sn.confidence_cdf(SplitNormalModel(20, 1, 0), 0.0, 0.0)

    @pytest.mark.parametrize("gamma", [1.0, 0.75])
    def test_uniform_under_selection(self, gamma):
        m = SplitNormalModel(20, gamma, 0)
        ys = sample_conditional(m, -0.3, 10 ** 4, seed=11).samples
        u = sn.confidence_cdf(m, -0.3, ys)
        assert stats.kstest(u, "uniform").pvalue > 0.01

    def test_data_split_equivalence(self):
        # two-batch sufficient reduction versus the randomised one-observation form
        n, gamma, theta = 20, 0.6, 0.1
        m = SplitNormalModel(n, gamma, 0)
        rng = np.random.default_rng(5)
        y1 = rng.normal(theta, 1 / math.sqrt(gamma * n), 2 * 10 ** 6)
        y2 = rng.normal(theta, 1 / math.sqrt((1 - gamma) * n), y1.size)
        y = (gamma * y1 + (1 - gamma) * y2)[y1 > 0]
        for y0 in (-0.1, 0.2, 0.5):
            est = np.mean(y >= y0)
            se = math.sqrt(est * (1 - est) / y.size)
            assert abs(sn.confidence_cdf(m, theta, y0) - est) < 3 * se


class TestConfidenceQuantile:
    @pytest.mark.parametrize("gamma", [1.0, 0.75])
    @given(alpha=st.floats(1e-4, 1 - 1e-4), y=st.floats(0.01, 1.5))
    def test_round_trip(self, gamma, alpha, y):
        m = SplitNormalModel(20, gamma, 0)
        q = sn.confidence_quantile(m, alpha, y)
        assert sn.confidence_cdf(m, q, y) == pytest.approx(alpha, abs=1e-6)

    def test_extreme_alpha_monotone(self):
        m = SplitNormalModel(20, 1, 0)
        alphas = [1e-4, 1e-3, 0.5, 1 - 1e-3, 1 - 1e-4]
        qs = [sn.confidence_quantile(m, a, 0.05) for a in alphas]
        assert all(map(math.isfinite, qs))
        assert np.all(np.diff(qs) > 0)

    def test_median_unbiased(self):
        m = SplitNormalModel(20, 1, 0)
        theta = -0.2
        ys = sample_conditional(m, theta, 10 ** 4, seed=2).samples
        # H(theta; y) is increasing in theta, so the median is <= theta iff H(theta; y) >= 1/2
        frac = np.mean(sn.confidence_cdf(m, theta, ys) >= 0.5)
        assert abs(frac - 0.5) < 3 * math.sqrt(0.25 / ys.size)

    def test_bad_alpha(self):
        with pytest.raises(DomainError):
            sn.confidence_quantile(SplitNormalModel(20, 1, 0), 0.0, 0.2)


class TestPmpPrior:
    def test_gamma1_closed_form(self):
        m = SplitNormalModel(20, 1, 0)
        th = np.linspace(-2, 2, 9)
        r20 = math.sqrt(20)
        ref = 1 - sf.h1(r20 * th) / sf.h1(r20 * (th - 0.2))
        np.testing.assert_allclose(sn.pmp_prior_density(m, th, 0.2), ref, rtol=1e-10)

    def test_gamma1_monotone_with_limits(self):
        m = SplitNormalModel(20, 1, 0)
        th = np.linspace(-4, 4, 401)
        vals = sn.pmp_prior_density(m, th, 0.2)
        assert np.all(np.diff(vals) > 0)
        assert vals[-1] > 1 - 1e-6
        # the left limit is approached like 1/|theta|
        assert sn.pmp_prior_density(m, -1e3, 0.2) < 1e-3

    def test_eq15_matches_finite_difference_form(self):
        m = SplitNormalModel(20, 0.75, 0)
        th = np.linspace(-1.5, 1.5, 61)
        closed = sn.pmp_prior_density(m, th, 0.0, method="closed")
        numeric = sn.pmp_prior_density(m, th, 0.0, method="numeric")
        np.testing.assert_allclose(closed, numeric, rtol=1e-4)

    def test_no_selection_constant(self):
        m = SplitNormalModel(20, 0.75, -math.inf)
        vals = sn.pmp_prior_density(m, np.linspace(-3, 3, 7), 0.0)
        np.testing.assert_allclose(vals, vals[0])

    def test_far_threshold_nearly_constant(self):
        m = SplitNormalModel(20, 0.75, -30.0)
        vals = sn.pmp_prior_density(m, np.linspace(-1, 1, 5), 0.0)
        np.testing.assert_allclose(vals / vals[0], 1.0, atol=1e-8)

    def test_fallback_deep_left_tail(self):
        m = SplitNormalModel(20, 0.75, 0)
        val = sn.log_pmp_prior_density(m, -3.0, 0.0)
        assert math.isfinite(val)

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            sn.pmp_prior_density(SplitNormalModel(20, 1, 0), 0.0, 0.2, method="magic")


class TestJeffreysPrior:
    def test_at_threshold(self):
        assert sn.jeffreys_prior_density(SplitNormalModel(20, 1, 0.4), 0.4) == pytest.approx(math.sqrt(1 - 2 / math.pi))

    def test_tail_limits(self):
        m = SplitNormalModel(20, 0.75, 0)
        assert sn.jeffreys_prior_density(m, 10.0) == pytest.approx(1.0, abs=1e-12)
        assert sn.jeffreys_prior_density(m, -10.0) == pytest.approx(math.sqrt(0.25), abs=1e-3)
        m = SplitNormalModel(20, 1, 0)
        assert sn.jeffreys_prior_density(m, -10.0) < 0.05

    @pytest.mark.parametrize("gamma", [1.0, 0.75, 0.3])
    def test_finite_difference_fisher_information(self, gamma):
        m = SplitNormalModel(20, gamma, 0.1)
        h = 1e-4
        for th in np.linspace(-1.5, 1.5, 13):
            lp = lambda x: float(sn.log_selection_probability(m, x))
            d2 = (lp(th + h) - 2 * lp(th) + lp(th - h)) / h ** 2
            assert sn.jeffreys_prior_density(m, th) == pytest.approx(math.sqrt((20 + d2) / 20), rel=1e-5)

    def test_positive(self):
        m = SplitNormalModel(20, 0.75, 0)
        assert np.all(sn.jeffreys_prior_density(m, np.linspace(-20, 20, 401)) > 0)


class TestPosterior:
    @pytest.mark.parametrize("gamma,y", [(1.0, 0.2), (0.75, 0.0), (0.5, -0.3)])
    def test_pmp_posterior_equals_confidence_cdf(self, gamma, y):
        m = SplitNormalModel(20, gamma, 0)
        curve = sn.posterior_curve(m, y, "pmp")
        th = np.linspace(-1.2, 1.0, 23)
        np.testing.assert_allclose(curve.cdf_at(th), sn.confidence_cdf(m, th, y), atol=1e-4)

    def test_uniform_no_selection_is_normal(self):
        m = SplitNormalModel(20, 1, -math.inf)
        curve = sn.posterior_curve(m, 0.3, "uniform")
        th = np.linspace(-0.5, 1.0, 16)
        np.testing.assert_allclose(curve.cdf_at(th), stats.norm.cdf(th, 0.3, 1 / math.sqrt(20)), atol=1e-9)

    def test_unadjusted_ignores_selection(self):
        m = SplitNormalModel(20, 1, 0)
        curve = sn.posterior_curve(m, 0.3, "uniform", mode=sn.UNADJUSTED)
        assert curve.cdf_at(0.3) == pytest.approx(0.5, abs=1e-9)

    def test_figure2_ordering(self):
        m = SplitNormalModel(20, 1, 0)
        th = np.linspace(-1.5, 1.0, 251)
        cu, cp, cj = (sn.posterior_curve(m, 0.2, k).cdf_at(th) for k in ("uniform", "pmp", "jeffreys"))
        assert np.max(np.abs(cp - cj)) <= 0.02
        # uniform posterior puts more mass on small theta than the adjusted ones
        assert sn.posterior_curve(m, 0.2, "uniform").quantile(0.5) < sn.posterior_curve(m, 0.2, "pmp").quantile(0.5)
        assert np.all(cu >= cp - 1e-9)

    @pytest.mark.parametrize("prior", ["uniform", "pmp", "jeffreys"])
    def test_quantile_round_trip(self, prior):
        curve = sn.posterior_curve(SplitNormalModel(20, 0.75, 0), 0.1, prior)
        for a in np.linspace(0.01, 0.99, 9):
            assert curve.cdf_at(curve.quantile(a)) == pytest.approx(a, abs=1e-6)

    def test_posterior_cdf_point(self):
        m = SplitNormalModel(20, 0.75, 0)
        curve = sn.posterior_curve(m, 0.1, "jeffreys")
        assert sn.posterior_cdf(m, 0.1, "jeffreys", -0.2) == pytest.approx(curve.cdf_at(-0.2), abs=1e-9)

    def test_invalid_observation(self):
        with pytest.raises(InvalidObservationError):
            sn.posterior_curve(SplitNormalModel(20, 1, 0), -0.1, "uniform")
