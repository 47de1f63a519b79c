"""Selective normal-location model with data-split selection.

The model observes ``Y ~ N(theta, 1/n)``, the precision-weighted mean of
two batches of sizes ``n1 = gamma n`` and ``n2 = n - n1``, and reports
inference only when the first-batch mean exceeds ``t``.  Reduced by
sufficiency this is a one-observation model with probit selection
function ``p(y) = Phi(sqrt(n / (1/gamma - 1)) (y - t))``; with
``gamma = 1`` it is plain truncation to ``y > t``.

``t = -inf`` is accepted and means "no selection".
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import posterior as _post
from . import special_fns as sf
from .errors import DomainError, InvalidObservationError, NumericError
from .quadrature import log_integrate_many

# Half-width of the integration window around the conditional mode; the
# conditional density is log-concave with curvature at least 1.
_WINDOW = 14.0


class PriorKind(enum.Enum):
    UNIFORM = "uniform"
    EXACT_MATCHING = "pmp"
    SELECTIVE_JEFFREYS = "jeffreys"
    NONSELECTIVE_JEFFREYS = "nonselective-jeffreys"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {
            "u": "uniform", "flat": "uniform",
            "exact-matching": "pmp", "exactmatching": "pmp", "matching": "pmp",
            "j": "jeffreys", "selective-jeffreys": "jeffreys", "selectivejeffreys": "jeffreys",
            "nsj": "nonselective-jeffreys", "nonselectivejeffreys": "nonselective-jeffreys",
            "non-selective-jeffreys": "nonselective-jeffreys",
        }
        key = aliases.get(key, key)
        for kind in cls:
            if kind.value == key:
                return kind
        raise DomainError(f"unknown prior kind {value!r}")

    @property
    def data_dependent(self):
        return self is PriorKind.EXACT_MATCHING


@dataclass(frozen=True)
class SplitNormalModel:
    """``Y ~ N(theta, 1/n)`` selected when the first ``gamma`` fraction exceeds ``t``."""

    n: float
    gamma: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.n) and self.n > 0):
            raise DomainError(f"n must be positive, got {self.n}")
        if not (0.0 < self.gamma <= 1.0):
            raise DomainError(f"gamma must lie in (0, 1], got {self.gamma}")
        if math.isnan(self.t) or self.t == math.inf:
            raise DomainError(f"threshold t must be finite or -inf, got {self.t}")

    @property
    def n1(self):
        return self.gamma * self.n

    @property
    def n2(self):
        return self.n - self.n1

    @property
    def selects(self):
        return math.isfinite(self.t)

    @property
    def noise_slope(self):
        """Slope ``sqrt(n / (1/gamma - 1))`` of the probit selection function."""
        return math.sqrt(self.n1 / (1.0 - self.gamma))

    def check_observation(self, y):
        y = np.asarray(y, float)
        if not np.all(np.isfinite(y)):
            raise DomainError("observation must be finite")
        if self.selects and self.gamma == 1.0 and not np.all(y > self.t):
            raise InvalidObservationError(
                f"y={y} is not above the truncation point t={self.t}; "
                "such data cannot arise under selection")


def _theta(theta):
    return np.asarray(theta, dtype=float)


def _ret(x):
    return float(x) if np.ndim(x) == 0 else x


def selection_function(model: SplitNormalModel, y):
    """Probability that inference proceeds given the sufficient statistic ``y``."""
    y = np.asarray(y, float)
    if not model.selects:
        return _ret(np.ones_like(y))
    if model.gamma == 1.0:
        return _ret((y > model.t).astype(float))
    return sf.norm_cdf(model.noise_slope * (y - model.t))


def log_selection_function(model: SplitNormalModel, y):
    y = np.asarray(y, float)
    if not model.selects:
        return _ret(np.zeros_like(y))
    if model.gamma == 1.0:
        return _ret(np.where(y > model.t, 0.0, -np.inf))
    return sf.norm_logcdf(model.noise_slope * (y - model.t))


def selection_probability(model: SplitNormalModel, theta):
    """``Phi(sqrt(n1) (theta - t))``."""
    theta = _theta(theta)
    if not model.selects:
        return _ret(np.ones_like(theta))
    return sf.norm_cdf(math.sqrt(model.n1) * (theta - model.t))


def log_selection_probability(model: SplitNormalModel, theta):
    theta = _theta(theta)
    if not model.selects:
        return _ret(np.zeros_like(theta))
    return sf.norm_logcdf(math.sqrt(model.n1) * (theta - model.t))


def log_selective_likelihood(model: SplitNormalModel, theta, y):
    """``log phi(sqrt(n)(y - theta)) - log Phi(sqrt(n1)(theta - t))``.

    Written through the Mills ratio so that the two quadratics cancel
    exactly when ``gamma = 1`` (the left tail is then only exponential).
    """
    theta = _theta(theta)
    sn = math.sqrt(model.n)
    if not model.selects:
        return _ret(sf.norm_logpdf(sn * (theta - y)))
    v = math.sqrt(model.n1) * (theta - model.t)
    if model.gamma == 1.0:
        quad = model.n * (model.t - y) * (2.0 * theta - y - model.t)
    else:
        u = sn * (theta - y)
        quad = u * u - v * v
    return _ret(-0.5 * quad - sf.LOG_SQRT_2PI - np.asarray(sf.log_mills_ratio(-v)))


# -- confidence distribution -------------------------------------------------

def _split_log_tails(model, theta, y):
    """``(log H, log(1 - H))`` for ``gamma < 1`` by quadrature.

    With ``z = sqrt(n)(Y - theta)`` the selected law of ``z`` has density
    ``phi(z) Phi(A + B z) / Phi(a)``; whichever tail of ``z0`` is lighter
    is integrated and the other obtained by complement.
    """
    theta, y = np.broadcast_arrays(_theta(theta), np.asarray(y, float))
    shape = theta.shape
    theta, y = theta.ravel(), y.ravel()
    sn = math.sqrt(model.n)
    c = model.noise_slope
    big_b = math.sqrt(model.gamma / (1.0 - model.gamma))
    big_a = c * (theta - model.t)
    a = math.sqrt(model.n1) * (theta - model.t)
    log_sel = sf.norm_logcdf(a)
    z0 = sn * (y - theta)
    mean = math.sqrt(model.gamma) * sf.h1(a)

    upper = z0 >= mean
    lo = np.where(upper, z0, z0 - _WINDOW)
    hi = np.where(upper, z0 + _WINDOW, z0)
    lo = np.where(upper, lo, np.minimum(lo, mean - _WINDOW))
    hi = np.where(upper, np.maximum(hi, mean + _WINDOW), hi)

    def logf(z, owner):
        return (sf.norm_logpdf(z) + sf.norm_logcdf(big_a[owner][:, None] + big_b * z)
                - log_sel[owner][:, None])

    side = np.minimum(log_integrate_many(logf, lo, hi), 0.0)
    other = np.log1p(-np.exp(side))
    log_h = np.where(upper, side, other)
    log_hc = np.where(upper, other, side)
    return log_h.reshape(shape), log_hc.reshape(shape)


def _log_tails(model, theta, y):
    theta = _theta(theta)
    if not model.selects:
        u = math.sqrt(model.n) * (theta - np.asarray(y, float))
        return sf.norm_logcdf(u), sf.norm_logsf(u)
    if model.gamma == 1.0:
        u = math.sqrt(model.n) * (theta - np.asarray(y, float))
        v = math.sqrt(model.n) * (theta - model.t)
        log_h = np.asarray(sf.norm_logcdf(u) - sf.norm_logcdf(v))
        log_h = np.minimum(log_h, 0.0)
        with np.errstate(divide="ignore"):
            log_hc = np.log(-np.expm1(log_h))
        return log_h, log_hc
    return _split_log_tails(model, theta, y)


def confidence_cdf(model: SplitNormalModel, theta, y):
    """``H(theta; y) = P_theta(Y >= y | selected)``, increasing in ``theta``."""
    model.check_observation(y)
    log_h, _ = _log_tails(model, theta, y)
    return _ret(np.exp(log_h))


def log_confidence_cdf(model: SplitNormalModel, theta, y):
    model.check_observation(y)
    log_h, _ = _log_tails(model, theta, y)
    return _ret(log_h)


def confidence_quantile(model: SplitNormalModel, alpha, y, max_expansions=60):
    """Solve ``H(theta; y) = alpha`` for ``theta``."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    model.check_observation(float(y))
    la, lac = math.log(alpha), math.log1p(-alpha)

    def g(th):
        lh, lhc = _log_tails(model, th, y)
        lh, lhc = float(lh), float(lhc)
        # compare on whichever scale is better conditioned
        return lh - la if alpha < 0.5 else lac - lhc

    step = 5.0 / math.sqrt(model.n)
    lo, hi = y - step, y + step
    for _ in range(max_expansions):
        glo, ghi = g(lo), g(hi)
        if glo < 0 < ghi:
            return brentq(g, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps)
        if glo >= 0:
            lo -= step
        if ghi <= 0:
            hi += step
        step *= 2.0
    raise NumericError(
        f"could not bracket H(theta; y={y}) = {alpha}: last bracket [{lo}, {hi}] "
        f"gave values ({g(lo)}, {g(hi)})")


# -- priors ------------------------------------------------------------------

def _log_pmp_closed(model, theta, y):
    """Closed-form log of the exact matching prior; NaN marks instability."""
    theta = _theta(theta)
    sn = math.sqrt(model.n)
    if model.gamma == 1.0:
        u = sn * (theta - y)
        v = sn * (theta - model.t)
        log_ratio = np.asarray(sf.log_h1(v) - sf.log_h1(u))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.log(-np.expm1(np.minimum(log_ratio, 0.0)))
        return np.where(log_ratio > 1e-12, np.nan, out)

    g = model.gamma
    a = math.sqrt(model.n1) * (theta - model.t)
    z0 = sn * (y - theta)
    b = sn * (y - theta + g * (theta - model.t)) / math.sqrt(1.0 - g)
    log_p = float(log_selection_function(model, y))
    log_h, log_hc = _log_tails(model, theta, y)
    log_phi_mb = sf.norm_logcdf(-b)
    log_phi_b = sf.norm_logcdf(b)
    with np.errstate(divide="ignore", invalid="ignore"):
        # D = H - Phi(-b) >= 0, formed on the side where it is not a
        # difference of numbers close to one.
        d_small = log_h + np.log(-np.expm1(log_phi_mb - log_h))
        d_large = log_phi_b + np.log(-np.expm1(log_hc - log_phi_b))
        log_d = np.where(np.exp(log_h) <= 0.5, d_small, d_large)
        log_t = 0.5 * math.log(g) + sf.norm_logpdf(a) - sf.norm_logpdf(z0) + log_d
        rel = log_t - log_p
        out = log_p + np.log(-np.expm1(np.minimum(rel, 0.0)))
    return np.where(np.isnan(log_d) | (rel > 1e-9), np.nan, out)


def _log_pmp_numeric(model, theta, y, step=None):
    """``p(y) (-dH/dtheta) / (dH/dy)`` from central differences of ``log H``."""
    theta = np.atleast_1d(_theta(theta))
    h = step if step is not None else 2e-4 / math.sqrt(model.n)

    def lh(th, yy):
        return np.asarray(_log_tails(model, th, yy)[0], float)

    d_theta = (lh(theta + h, y) - lh(theta - h, y)) / (2 * h)
    d_y = (lh(theta, y + h) - lh(theta, y - h)) / (2 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = float(log_selection_function(model, y)) + np.log(-d_theta / d_y)
    return out


def log_pmp_prior_density(model: SplitNormalModel, theta, y, method="auto"):
    """Log of the data-dependent exact probability-matching prior (unnormalised).

    ``method`` is ``"closed"``, ``"numeric"`` or ``"auto"`` (closed form,
    with the finite-difference route wherever the closed form is unstable).
    """
    model.check_observation(float(y))
    theta = _theta(theta)
    if not model.selects:
        return _ret(np.zeros_like(theta))
    if method == "numeric":
        out = _log_pmp_numeric(model, theta, y).reshape(theta.shape)
    elif method in ("closed", "auto"):
        out = np.asarray(_log_pmp_closed(model, theta, y), float)
        bad = np.isnan(out)
        if method == "auto" and np.any(bad):
            flat = out.reshape(-1)
            flat[bad.reshape(-1)] = _log_pmp_numeric(model, theta.reshape(-1)[bad.reshape(-1)], y)
            out = flat.reshape(theta.shape)
    else:
        raise DomainError(f"unknown method {method!r}")
    if np.any(np.isnan(out)):
        raise NumericError(
            f"exact matching prior is numerically unstable at theta={theta[np.isnan(out)][:3]} "
            f"(y={y}, model={model})")
    return _ret(out)


def pmp_prior_density(model: SplitNormalModel, theta, y, method="auto"):
    """Exact probability-matching prior, ``p(y) * (-dH/dtheta) / (dH/dy)``."""
    return _ret(np.exp(log_pmp_prior_density(model, theta, y, method)))


def log_jeffreys_prior_density(model: SplitNormalModel, theta):
    theta = _theta(theta)
    if not model.selects:
        return _ret(np.zeros_like(theta))
    a = math.sqrt(model.n1) * (theta - model.t)
    return _ret(0.5 * np.log1p(model.gamma * np.asarray(sf.h2(a))))


def jeffreys_prior_density(model: SplitNormalModel, theta):
    """Selective Jeffreys prior ``[1 + gamma h2(sqrt(n1)(theta - t))]^(1/2)``."""
    return _ret(np.exp(log_jeffreys_prior_density(model, theta)))


def log_prior_density(model: SplitNormalModel, prior, theta, y=None):
    """Log prior density for any :class:`PriorKind` (unnormalised)."""
    kind = PriorKind.parse(prior)
    theta = _theta(theta)
    if kind in (PriorKind.UNIFORM, PriorKind.NONSELECTIVE_JEFFREYS):
        return _ret(np.zeros_like(theta))
    if kind is PriorKind.SELECTIVE_JEFFREYS:
        return log_jeffreys_prior_density(model, theta)
    if y is None:
        raise DomainError("the exact matching prior needs the observed y")
    return log_pmp_prior_density(model, theta, y)


# -- posteriors --------------------------------------------------------------

SELECTIVE = "selective"
UNADJUSTED = "unadjusted"


def posterior_log_density(model: SplitNormalModel, y, prior, mode=SELECTIVE):
    """Return ``theta -> log posterior density`` (unnormalised).

    ``prior`` is a :class:`PriorKind` (or its name) or a callable giving the
    log prior density.  ``mode="selective"`` divides by the selection
    probability; ``"unadjusted"`` does not.
    """
    if mode not in (SELECTIVE, UNADJUSTED):
        raise DomainError(f"unknown posterior mode {mode!r}")
    if callable(prior):
        log_prior = prior
        kind = None
    else:
        kind = PriorKind.parse(prior)
        log_prior = None
    if mode == SELECTIVE or kind is PriorKind.EXACT_MATCHING:
        model.check_observation(float(y))
    sn = math.sqrt(model.n)

    def logpdf(theta):
        theta = np.asarray(theta, float)
        if log_prior is not None:
            lp = np.asarray(log_prior(theta), float)
        else:
            lp = np.asarray(log_prior_density(model, kind, theta, y), float)
        if mode == SELECTIVE:
            return lp + np.asarray(log_selective_likelihood(model, theta, y))
        return lp + sf.norm_logpdf(sn * (theta - y))

    return logpdf


def posterior_curve(model: SplitNormalModel, y, prior, mode=SELECTIVE):
    """Tabulated posterior distribution function of ``theta`` given ``y``."""
    logpdf = posterior_log_density(model, y, prior, mode)
    label = prior.value if isinstance(prior, PriorKind) else (
        PriorKind.parse(prior).value if not callable(prior) else "custom")
    meta = {"model": model, "prior": label, "y": float(y), "mode": mode}
    return _post.tabulate(logpdf, float(y), 1.0 / math.sqrt(model.n), meta=meta)


def posterior_cdf(model: SplitNormalModel, y, prior, theta0, mode=SELECTIVE):
    """``Pi(theta0 | y)`` without tabulating the whole curve."""
    logpdf = posterior_log_density(model, y, prior, mode)
    return _post.cdf_at_point(logpdf, float(theta0), float(y), 1.0 / math.sqrt(model.n))
