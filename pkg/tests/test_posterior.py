import math

import numpy as np
import pytest
from scipy import stats

from selbayes.errors import DivergedPosteriorError, DomainError
from selbayes.posterior import cdf_at_point, find_support, tabulate


def normal_logpdf(mu, sd):
    return lambda u: -0.5 * ((np.asarray(u) - mu) / sd) ** 2


class TestTabulate:
    def test_normal_cdf(self):
        curve = tabulate(normal_logpdf(1.0, 0.3), 1.0, 0.3)
        xs = np.linspace(-0.5, 2.5, 13)
        np.testing.assert_allclose(curve.cdf_at(xs), stats.norm.cdf(xs, 1.0, 0.3), atol=1e-10)

    def test_grid_invariants(self):
        curve = tabulate(normal_logpdf(0.0, 1.0), 0.0, 1.0)
        assert np.all(np.diff(curve.grid) > 0)
        assert np.all(np.diff(curve.cdf) >= 0)
        assert curve.cdf[0] <= 1e-6 and curve.cdf[-1] >= 1 - 1e-6
        med = curve.quantile(0.5)
        assert curve.grid[0] <= med - 10 and curve.grid[-1] >= med + 10

    @pytest.mark.parametrize("alpha", [0.01, 0.1, 0.37, 0.5, 0.9, 0.99])
    def test_quantile_round_trip(self, alpha):
        curve = tabulate(lambda u: stats.gamma.logpdf(u, 3.0), 3.0, 2.0, lower=0.0)
        q = curve.quantile(alpha)
        assert curve.cdf_at(q) == pytest.approx(alpha, abs=1e-9)
        assert q == pytest.approx(stats.gamma.ppf(alpha, 3.0), rel=1e-7)

    def test_skewed_far_from_centre(self):
        # a pilot centre ten scales off the mode must still be found
        curve = tabulate(normal_logpdf(12.0, 1.0), 0.0, 1.0)
        assert curve.quantile(0.5) == pytest.approx(12.0, abs=1e-8)

    def test_pdf_normalised(self):
        curve = tabulate(normal_logpdf(0.0, 2.0), 0.0, 2.0)
        assert curve.pdf(0.0) == pytest.approx(stats.norm.pdf(0.0, 0.0, 2.0), rel=1e-9)

    def test_transformed_variable(self):
        # density in u = log(x) for x ~ lognormal(0, 0.5)
        curve = tabulate(normal_logpdf(0.0, 0.5), 0.0, 0.5, to_u=np.log, from_u=np.exp)
        assert curve.cdf_at(1.0) == pytest.approx(0.5, abs=1e-10)
        assert curve.quantile(0.9) == pytest.approx(math.exp(0.5 * stats.norm.ppf(0.9)), rel=1e-8)

    def test_interpolant_monotone(self):
        curve = tabulate(normal_logpdf(0.0, 1.0), 0.0, 1.0)
        xs = np.linspace(curve.grid[0], curve.grid[-1], 500)
        assert np.all(np.diff(curve.interpolant()(xs)) >= -1e-15)

    def test_bad_alpha(self):
        curve = tabulate(normal_logpdf(0.0, 1.0), 0.0, 1.0)
        with pytest.raises(DomainError):
            curve.quantile(1.0)


def test_diverged_posterior():
    with pytest.raises(DivergedPosteriorError):
        tabulate(lambda u: np.zeros_like(np.asarray(u, float)), 0.0, 1.0)


def test_support_respects_bounds():
    sup = find_support(lambda u: stats.expon.logpdf(u), 1.0, 1.0, lower=0.0)
    assert sup.lo >= 0.0


@pytest.mark.parametrize("x0", [-2.0, -0.3, 0.0, 1.7])
def test_cdf_at_point(x0):
    assert cdf_at_point(normal_logpdf(0.0, 1.0), x0, 0.0, 1.0) == pytest.approx(stats.norm.cdf(x0), abs=1e-10)
