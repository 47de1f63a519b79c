"""One-parameter exponential families with data-split selection.

Each family describes a random sample split into a selection batch of
size ``n1`` and an inference-only batch of size ``n2``; inference is
reported when the first-batch MLE passes a threshold ``c``.  Priors for
the selected parameter are induced from the selective normal model on the
variance-stabilised scale ``nu = g(theta)`` with ``g' = i^(1/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.optimize import brentq

from . import posterior as _post
from . import selective_normal as sn
from . import special_fns as sf
from .errors import DegenerateEstimateError, DomainError, InvalidObservationError
from .quadrature import integrate
from .selective_normal import PriorKind, SplitNormalModel


@dataclass(frozen=True)
class ExpFamModel1D:
    """Base descriptor; subclasses supply the family-specific pieces.

    Data are 1-D samples whose first ``n1`` entries form the selection batch.
    """

    n1: int
    n2: int = 0
    c: float = 1.0

    name = "base"
    theta_domain = (-math.inf, math.inf)

    def __post_init__(self):
        if int(self.n1) != self.n1 or self.n1 < 1:
            raise DomainError("n1 must be a positive integer")
        if int(self.n2) != self.n2 or self.n2 < 0:
            raise DomainError("n2 must be a nonnegative integer")

    # --- family pieces -------------------------------------------------
    def log_density(self, y, theta):
        raise NotImplementedError

    def loglik(self, theta, data):
        """Full-sample log likelihood, vectorised over ``theta``."""
        raise NotImplementedError

    def fisher_info(self, theta):
        raise NotImplementedError

    def vst(self, theta):
        raise NotImplementedError

    def vst_inv(self, nu):
        raise NotImplementedError

    def mle(self, sample):
        raise NotImplementedError

    def draw(self, theta, size, rng):
        """``size`` independent samples of length ``n``; shape ``(size, n)``."""
        raise NotImplementedError

    def log_selection_probability(self, theta):
        raise NotImplementedError

    def selected_mle(self, mle1):
        """The selection rule applied to first-batch MLEs."""
        return np.asarray(mle1) > self.c

    # --- shared machinery ----------------------------------------------
    @property
    def n(self):
        return self.n1 + self.n2

    @property
    def gamma(self):
        return self.n1 / self.n

    @property
    def nu_domain(self):
        lo, hi = self.theta_domain
        return (float(self.vst(lo)) if math.isfinite(lo) else -math.inf,
                float(self.vst(hi)) if math.isfinite(hi) else math.inf)

    def vst_deriv(self, theta):
        return np.sqrt(self.fisher_info(theta))

    def selection_probability(self, theta):
        return np.exp(self.log_selection_probability(theta))

    def check_theta(self, theta):
        theta = np.asarray(theta, float)
        lo, hi = self.theta_domain
        if not np.all((theta > lo) & (theta < hi)):
            raise DomainError(f"theta outside the {self.name} parameter domain ({lo}, {hi})")
        return theta

    def normal_proxy(self):
        """Selective normal model acting on ``nu = g(theta)``."""
        return SplitNormalModel(n=float(self.n), gamma=self.gamma, t=self.proxy_threshold())

    def proxy_threshold(self):
        lo, hi = self.theta_domain
        if self.c <= lo:
            return -math.inf
        return float(self.vst(self.c))

    def split(self, data):
        data = np.asarray(data, float)
        if data.shape[-1] != self.n:
            raise DomainError(f"expected samples of length {self.n}, got {data.shape[-1]}")
        return data[..., : self.n1], data[..., self.n1:]

    def is_selected(self, data):
        first, _ = self.split(data)
        return bool(self.selected_mle(self.mle(first)))

    def proxy_observation(self, data):
        """Sufficient normal-proxy statistic ``gamma g(mle1) + (1-gamma) g(mle2)``."""
        first, second = self.split(data)
        y = self.gamma * float(self.vst(self._clip(self.mle(first))))
        if self.n2:
            y += (1.0 - self.gamma) * float(self.vst(self._clip(self.mle(second))))
        return y

    def _clip(self, theta):
        lo, hi = self.theta_domain
        return min(max(float(theta), lo), hi)

    def solve_theta(self, prob, xtol=1e-10):
        """Parameter value with selection probability ``prob`` (bisection)."""
        if not 0.0 < prob < 1.0:
            raise DomainError("target probability must lie in (0, 1)")
        target = math.log(prob)

        def f(nu):
            return float(self.log_selection_probability(self.vst_inv(nu))) - target

        lo_nu, hi_nu = self.nu_domain
        centre = float(self.vst(self.c))
        step = 1.0
        a = max(centre - step, lo_nu + 1e-12) if math.isfinite(lo_nu) else centre - step
        b = min(centre + step, hi_nu - 1e-12) if math.isfinite(hi_nu) else centre + step
        while f(a) > 0:
            step *= 2
            a = max(centre - step, lo_nu + 1e-12) if math.isfinite(lo_nu) else centre - step
        while f(b) < 0:
            step *= 2
            b = min(centre + step, hi_nu - 1e-12) if math.isfinite(hi_nu) else centre + step
        nu = brentq(f, a, b, xtol=xtol * 1e-2, rtol=1e-14)
        return float(self.vst_inv(nu))


@dataclass(frozen=True)
class ExponentialRate(ExpFamModel1D):
    """Exponential sample with rate ``theta``; selection ``mle1 > c``."""

    name = "exponential"
    theta_domain = (0.0, math.inf)

    def log_density(self, y, theta):
        return np.log(theta) - theta * np.asarray(y)

    def loglik(self, theta, data):
        data = np.asarray(data, float)
        return data.size * np.log(theta) - np.asarray(theta) * data.sum()

    def fisher_info(self, theta):
        return 1.0 / np.asarray(theta, float) ** 2

    @property
    def nu_domain(self):
        return (-math.inf, math.inf)

    def vst(self, theta):
        return np.log(theta)

    def vst_inv(self, nu):
        return np.exp(nu)

    def mle(self, sample):
        return 1.0 / np.mean(sample, axis=-1)

    def draw(self, theta, size, rng):
        return rng.exponential(1.0 / theta, size=(size, self.n))

    def log_selection_probability(self, theta):
        # mle1 > c  <=>  sum of the first batch < n1 / c
        theta = np.asarray(theta, float)
        if self.c <= 0:
            return _ret(np.zeros_like(theta))
        return sf.log_regularized_gamma_cdf(self.n1, theta, self.n1 / self.c)


@dataclass(frozen=True)
class InverseGaussianMean(ExpFamModel1D):
    """Inverse Gaussian sample with mean ``theta`` and known shape ``lam``."""

    lam: float = 1.0
    name = "inverse-gaussian"
    theta_domain = (0.0, math.inf)

    def log_density(self, y, theta):
        y = np.asarray(y, float)
        return (0.5 * np.log(self.lam / (2 * math.pi * y ** 3))
                - self.lam * (y - theta) ** 2 / (2 * np.asarray(theta) ** 2 * y))

    def loglik(self, theta, data):
        data = np.asarray(data, float)
        theta = np.asarray(theta, float)
        return self.lam * (-data.sum() / (2 * theta ** 2) + data.size / theta)

    def fisher_info(self, theta):
        return self.lam / np.asarray(theta, float) ** 3

    def vst(self, theta):
        theta = np.asarray(theta, float)
        with np.errstate(divide="ignore"):
            return -2.0 * math.sqrt(self.lam) / np.sqrt(theta) if np.ndim(theta) else (
                -2.0 * math.sqrt(self.lam) / math.sqrt(float(theta)) if float(theta) > 0 else -math.inf)

    def vst_inv(self, nu):
        return 4.0 * self.lam / np.asarray(nu, float) ** 2

    @property
    def nu_domain(self):
        return (-math.inf, 0.0)

    def mle(self, sample):
        return np.mean(sample, axis=-1)

    def draw(self, theta, size, rng):
        return rng.wald(theta, self.lam, size=(size, self.n))

    def log_selection_probability(self, theta):
        # the first-batch mean is IG(theta, n1 * lam)
        theta = np.asarray(theta, float)
        if self.c <= 0:
            return _ret(np.zeros_like(theta))
        return sf.inverse_gaussian_logsf(theta, self.n1 * self.lam, self.c)


@dataclass(frozen=True)
class Bernoulli(ExpFamModel1D):
    """Bernoulli trials (a binomial count per batch); selection ``mle1 >= c``."""

    c: float = 0.5
    name = "binomial"
    theta_domain = (0.0, 1.0)

    def log_density(self, y, theta):
        y = np.asarray(y, float)
        return y * np.log(theta) + (1 - y) * np.log1p(-np.asarray(theta))

    def loglik(self, theta, data):
        data = np.asarray(data, float)
        k = data.sum()
        theta = np.asarray(theta, float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (np.where(k > 0, k * np.log(theta), 0.0)
                    + np.where(data.size - k > 0, (data.size - k) * np.log1p(-theta), 0.0))

    def fisher_info(self, theta):
        theta = np.asarray(theta, float)
        return 1.0 / (theta * (1.0 - theta))

    def vst(self, theta):
        return 2.0 * np.arcsin(np.sqrt(theta))

    def vst_inv(self, nu):
        return np.sin(0.5 * np.asarray(nu, float)) ** 2

    def mle(self, sample):
        return np.mean(sample, axis=-1)

    def draw(self, theta, size, rng):
        return (rng.random((size, self.n)) < theta).astype(float)

    def selected_mle(self, mle1):
        # tolerance absorbs k/n1 rounding
        return np.asarray(mle1) >= self.c - 1e-12

    @property
    def min_successes(self):
        return math.ceil(self.c * self.n1 - 1e-9)

    def log_selection_probability(self, theta):
        theta = np.asarray(theta, float)
        return stats.binom.logsf(self.min_successes - 1, self.n1, theta)

    @staticmethod
    def from_counts(n1, y1, n2=0, y2=0):
        """A 0/1 sample reproducing batch counts ``y1`` of ``n1`` and ``y2`` of ``n2``."""
        first = np.r_[np.ones(y1), np.zeros(n1 - y1)]
        second = np.r_[np.ones(y2), np.zeros(n2 - y2)]
        return np.r_[first, second]


class SelectionProbabilityFn:
    """Selection probability ``theta -> P_theta(selected)``.

    ``method`` is ``"analytic"`` (the family's closed form),
    ``"quadrature"`` (numerical integral of the first-batch statistic's
    density, exponential and inverse-Gaussian only) or ``"monte_carlo"``.
    The Monte Carlo route reuses one block of uniforms for every ``theta``
    (common random numbers), so the estimate is monotone in ``theta``.
    """

    def __init__(self, model, method="analytic", reps=100_000, seed=0):
        if method not in ("analytic", "quadrature", "monte_carlo"):
            raise DomainError(f"unknown method {method!r}")
        self.model = model
        self.method = method
        self.reps = int(reps)
        self.seed = seed
        self._uniforms = None
        if method == "monte_carlo":
            rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5E1]))
            self._uniforms = rng.random((self.reps, model.n1))

    def __call__(self, theta):
        return self.evaluate(theta)

    def evaluate(self, theta):
        model = self.model
        theta = model.check_theta(theta)
        if self.method == "analytic":
            return model.selection_probability(theta)
        if self.method == "quadrature":
            return _vector(self._quadrature, theta)
        return _vector(self._monte_carlo, theta)

    def _quadrature(self, theta):
        m = self.model
        if isinstance(m, ExponentialRate):
            dist = stats.gamma(a=m.n1, scale=1.0 / theta)
            return integrate(dist.pdf, 0.0, m.n1 / m.c, rtol=1e-12, atol=1e-14)
        if isinstance(m, InverseGaussianMean):
            mu, shape = theta, m.n1 * m.lam

            def pdf(x):
                return np.sqrt(shape / (2 * math.pi * x ** 3)) * np.exp(
                    -shape * (x - mu) ** 2 / (2 * mu ** 2 * x))

            return integrate(pdf, m.c, math.inf, scale=max(mu, m.c), rtol=1e-12, atol=1e-14)
        raise DomainError(f"no quadrature route for the {m.name} family")

    def _monte_carlo(self, theta):
        m = self.model
        u = self._uniforms
        if isinstance(m, ExponentialRate):
            first = -np.log1p(-u) / theta
        elif isinstance(m, InverseGaussianMean):
            first = stats.invgauss.ppf(u, theta / m.lam, scale=m.lam)
        elif isinstance(m, Bernoulli):
            first = (u < theta).astype(float)
        else:
            raise DomainError(f"no Monte Carlo sampler for the {m.name} family")
        hits = int(np.count_nonzero(m.selected_mle(m.mle(first))))
        if hits == 0:
            raise DegenerateEstimateError(
                f"no selected draws out of {self.reps} at theta={theta}")
        return hits / self.reps


def _vector(fn, theta):
    if np.ndim(theta) == 0:
        return float(fn(float(theta)))
    return np.array([fn(float(v)) for v in np.ravel(theta)]).reshape(np.shape(theta))


def selection_probability_expfam(model: ExpFamModel1D, theta):
    """Probability that the first-batch MLE passes the threshold."""
    return SelectionProbabilityFn(model).evaluate(theta)


def log_induced_prior_density(model: ExpFamModel1D, kind, theta, observed=None):
    """``log[ i(theta)^(1/2) pi_nu(g(theta)) ]`` for the chosen normal-model prior."""
    kind = PriorKind.parse(kind)
    theta = model.check_theta(theta)
    half_log_i = 0.5 * np.log(model.fisher_info(theta))
    if kind is PriorKind.UNIFORM:
        return _ret(np.zeros_like(theta))
    if kind is PriorKind.NONSELECTIVE_JEFFREYS:
        return _ret(half_log_i)
    proxy = model.normal_proxy()
    nu = model.vst(theta)
    if kind is PriorKind.SELECTIVE_JEFFREYS:
        return _ret(half_log_i + sn.log_jeffreys_prior_density(proxy, nu))
    if observed is None:
        raise DomainError("the exact matching prior needs the observed data")
    y = model.proxy_observation(observed)
    return _ret(half_log_i + sn.log_pmp_prior_density(proxy, nu, y))


def induced_prior_density(model: ExpFamModel1D, kind, theta, observed=None):
    """Prior on ``theta`` induced through the variance-stabilising transform."""
    return _ret(np.exp(log_induced_prior_density(model, kind, theta, observed)))


def _ret(x):
    return float(x) if np.ndim(x) == 0 else x


def posterior_log_density_nu(model: ExpFamModel1D, data, kind, selective=True):
    """Unnormalised log posterior density of ``nu = g(theta)``."""
    kind = PriorKind.parse(kind)
    data = np.asarray(data, float)
    proxy = model.normal_proxy()
    y_proxy = model.proxy_observation(data) if kind is PriorKind.EXACT_MATCHING else None

    def logpdf(nu):
        nu = np.asarray(nu, float)
        theta = model.vst_inv(nu)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.asarray(model.loglik(theta, data), float)
            if selective:
                out = out - np.asarray(model.log_selection_probability(theta), float)
            # density in nu = density in theta / g'(theta)
            if kind is PriorKind.UNIFORM:
                out = out - 0.5 * np.log(model.fisher_info(theta))
            elif kind is PriorKind.SELECTIVE_JEFFREYS:
                out = out + sn.log_jeffreys_prior_density(proxy, nu)
            elif kind is PriorKind.EXACT_MATCHING:
                out = out + sn.log_pmp_prior_density(proxy, nu, y_proxy)
        return out

    return logpdf


def _centre(model, data):
    lo, hi = model.nu_domain
    mle = model._clip(model.mle(data))
    nu = float(model.vst(mle)) if math.isfinite(float(model.vst(mle))) else 0.0
    span = 1.0 / math.sqrt(model.n)
    if math.isfinite(lo):
        nu = max(nu, lo + 0.5 * span)
    if math.isfinite(hi):
        nu = min(nu, hi - 0.5 * span)
    return nu, span


def _check_selected(model, data):
    if not model.is_selected(data):
        raise InvalidObservationError(
            f"first-batch MLE {float(model.mle(model.split(data)[0])):.6g} fails the "
            f"selection rule (threshold {model.c})")


def selective_posterior_expfam(model: ExpFamModel1D, data, kind):
    """Selective posterior of ``theta`` tabulated as a :class:`PosteriorCurve`."""
    data = np.asarray(data, float)
    _check_selected(model, data)
    logpdf = posterior_log_density_nu(model, data, kind)
    centre, span = _centre(model, data)
    lo, hi = model.nu_domain
    meta = {"model": model, "prior": PriorKind.parse(kind).value}
    return _post.tabulate(logpdf, centre, span, lower=lo, upper=hi, meta=meta,
                          to_u=model.vst, from_u=model.vst_inv)


def posterior_cdf_expfam(model: ExpFamModel1D, data, kind, theta0):
    """``Pi(theta0 | data)`` for the selective posterior."""
    data = np.asarray(data, float)
    _check_selected(model, data)
    logpdf = posterior_log_density_nu(model, data, kind)
    centre, span = _centre(model, data)
    lo, hi = model.nu_domain
    return _post.cdf_at_point(logpdf, float(model.vst(theta0)), centre, span,
                              lower=lo, upper=hi)


def orthogonal_conditional_prior(ipsi, vst, kind, proxy, c=None, observed=None):
    """Joint prior ``c(lam) i_psipsi(psi, lam)^(1/2) pi_nu{g(psi; lam)}``.

    ``ipsi(psi, lam)`` is the interest-parameter Fisher information,
    ``vst(psi, lam)`` the variance-stabilising map in ``psi`` for fixed
    ``lam``, ``proxy(lam)`` the normal-location model acting on
    ``nu = vst(psi, lam)``, ``c(lam)`` the nuisance prior (default 1) and,
    for the exact matching choice, ``observed(lam)`` the proxy observation.
    Returns a function of ``(psi, lam)`` giving the log prior density.
    """
    kind = PriorKind.parse(kind)

    def log_prior(psi, lam):
        psi = np.asarray(psi, float)
        out = 0.5 * np.log(ipsi(psi, lam))
        if c is not None:
            out = out + np.log(c(lam))
        model = proxy(lam)
        nu = vst(psi, lam)
        if kind is PriorKind.SELECTIVE_JEFFREYS:
            out = out + sn.log_jeffreys_prior_density(model, nu)
        elif kind is PriorKind.EXACT_MATCHING:
            if observed is None:
                raise DomainError("the exact matching prior needs observed(lam)")
            out = out + sn.log_pmp_prior_density(model, nu, observed(lam))
        elif kind is PriorKind.UNIFORM:
            out = out - 0.5 * np.log(ipsi(psi, lam))
        return out

    return log_prior
