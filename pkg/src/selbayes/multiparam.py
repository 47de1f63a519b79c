"""Selection problems with nuisance parameters.

Two models are covered: a normal sample with unknown variance selected by
a one-sided t-test on the first batch, and "inference for the winner",
where the arm with the largest first-stage mean receives a follow-up
sample.  Posteriors are explored with a random-walk Metropolis-Hastings
sampler that can advance many independent chains in one vectorised pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special as sc
from scipy import stats
from scipy.interpolate import CubicSpline

from . import special_fns as sf
from .errors import DomainError, InvalidObservationError, NumericError, StuckChainError
from .quadrature import log_integrate_many
from .selective_normal import SplitNormalModel

JEFFREYS_BASED = "jeffreys"
PMP_GAMMA1 = "pmp-gamma1"
SIGMA_INV = "sigma-inv"


# ---------------------------------------------------------------------------
# Unknown variance, t-test selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnknownVarModel:
    """Normal sample split in two batches; ``mean1 / v1^(1/2) > t / n1^(1/2)`` selects.

    ``v1`` and ``v2`` are maximum likelihood variances (divisor ``n_i``).
    """

    n1: int
    n2: int
    t: float
    ybar1: float
    v1: float
    ybar2: float = 0.0
    v2: float = 0.0

    def __post_init__(self):
        if self.n1 < 2:
            raise DomainError("n1 must be at least 2 so that v1 exists")
        if self.n2 < 0:
            raise DomainError("n2 must be nonnegative")
        if not self.v1 > 0:
            raise DomainError("v1 must be positive")
        if self.n2 >= 2 and not self.v2 > 0:
            raise DomainError("v2 must be positive when n2 >= 2")
        if not self.ybar1 / math.sqrt(self.v1) > self.t / math.sqrt(self.n1):
            raise InvalidObservationError("stored first-batch statistics fail the t-test selection")

    @property
    def n(self):
        return self.n1 + self.n2

    @property
    def gamma(self):
        return self.n1 / self.n

    @property
    def ybar(self):
        return (self.n1 * self.ybar1 + self.n2 * self.ybar2) / self.n

    @property
    def v(self):
        """Full-sample maximum likelihood variance."""
        ss = self.n1 * self.v1 + self.n2 * (self.v2 if self.n2 >= 2 else 0.0)
        ss += self.n1 * (self.ybar1 - self.ybar) ** 2 + self.n2 * (self.ybar2 - self.ybar) ** 2
        return ss / self.n

    @classmethod
    def from_sample(cls, sample, n1, t):
        sample = np.asarray(sample, float)
        first, second = sample[:n1], sample[n1:]
        return cls(n1=n1, n2=second.size, t=t, ybar1=float(first.mean()), v1=float(first.var()),
                   ybar2=float(second.mean()) if second.size else 0.0,
                   v2=float(second.var()) if second.size >= 2 else 0.0)


def _chi2_window(k):
    return float(stats.chi2.isf(1e-18, k))


def log_tstat_selection_probability(mu, sigma2, n1, t, rtol=1e-10):
    """Vectorised ``log P(mean1 / v1^(1/2) > t / n1^(1/2))``.

    Writes ``v1 = sigma2 q / n1`` with ``q ~ chi2(n1 - 1)`` and integrates
    ``Phi(n1^(1/2) mu / sigma - t (q / n1)^(1/2))`` against the chi-square
    density.  Only ``r = mu / sigma`` matters.
    """
    mu = np.asarray(mu, float)
    sigma2 = np.asarray(sigma2, float)
    if np.any(~np.isfinite(mu)) or np.any(~np.isfinite(sigma2)):
        raise DomainError("mu and sigma2 must be finite")
    if np.any(sigma2 <= 0):
        raise DomainError("sigma2 must be positive")
    if n1 < 2:
        raise DomainError("n1 must be at least 2")
    r = mu / np.sqrt(sigma2)
    if t == -math.inf:
        return _shape_out(np.zeros_like(r))
    flat = np.ravel(r)
    uniq, inv = np.unique(flat, return_inverse=True)
    k = n1 - 1
    root_n1 = math.sqrt(n1)

    def logf(q, owner):
        rr = uniq[owner][:, None] if q.ndim == 2 else uniq[owner]
        with np.errstate(divide="ignore"):
            return stats.chi2.logpdf(q, k) + sc.log_ndtr(root_n1 * rr - t * np.sqrt(q / n1))

    hi = _chi2_window(k)
    vals = log_integrate_many(logf, np.zeros(uniq.size), np.full(uniq.size, hi), rtol=rtol)
    vals = np.minimum(vals, 0.0)
    if not np.all(np.isfinite(vals)):
        raise NumericError("t-statistic selection probability quadrature failed")
    return _shape_out(vals[inv].reshape(r.shape))


def tstat_selection_probability(mu, sigma2, n1, t):
    """Probability that the first-batch t-test selects, for parameter ``(mu, sigma2)``."""
    return _shape_out(np.exp(log_tstat_selection_probability(mu, sigma2, n1, t)))


def _shape_out(x):
    return float(x) if np.ndim(x) == 0 else x


class TstatSelectionTable:
    """Cached spline of ``log P(select)`` in ``r = mu / sigma``.

    Values of ``r`` outside the tabulated range fall back to the exact
    quadrature, so the table only trades accuracy (about 1e-10) for speed.
    """

    def __init__(self, n1, t, r_range=(-3.0, 3.0), step=0.002):
        self.n1, self.t = n1, t
        self.lo, self.hi = r_range
        grid = np.linspace(self.lo, self.hi, int(round((self.hi - self.lo) / step)) + 1)
        vals = log_tstat_selection_probability(grid, np.ones_like(grid), n1, t)
        self._spline = CubicSpline(grid, vals)

    def log_prob_r(self, r):
        r = np.asarray(r, float)
        out = np.empty_like(r)
        inside = (r >= self.lo) & (r <= self.hi)
        out[inside] = self._spline(r[inside])
        if np.any(~inside):
            out[~inside] = log_tstat_selection_probability(r[~inside], np.ones(np.count_nonzero(~inside)),
                                                           self.n1, self.t)
        return np.minimum(out, 0.0)

    def __call__(self, mu, sigma2):
        return self.log_prob_r(np.asarray(mu, float) / np.sqrt(np.asarray(sigma2, float)))


def unadjusted_loglik_unknown_var(model: UnknownVarModel, mu, sigma2):
    mu = np.asarray(mu, float)
    sigma2 = np.asarray(sigma2, float)
    if np.any(sigma2 <= 0):
        raise DomainError("sigma2 must be positive")
    ss = model.n1 * (model.v1 + (model.ybar1 - mu) ** 2)
    if model.n2:
        ss = ss + model.n2 * ((model.v2 if model.n2 >= 2 else 0.0) + (model.ybar2 - mu) ** 2)
    return _shape_out(-0.5 * model.n * np.log(sigma2) - ss / (2.0 * sigma2))


def selective_loglik_unknown_var(model: UnknownVarModel, mu, sigma2, table=None):
    """Full-data normal log likelihood minus the log selection probability."""
    base = unadjusted_loglik_unknown_var(model, mu, sigma2)
    if table is not None:
        adj = table(mu, sigma2)
    else:
        adj = log_tstat_selection_probability(mu, sigma2, model.n1, model.t)
    return _shape_out(np.asarray(base) - np.asarray(adj))


def _default_c(sigma2):
    return 1.0 / np.sqrt(sigma2)


def log_prior_unknown_var(model: UnknownVarModel, kind, mu, sigma2, c=_default_c, v_reading="v1"):
    """Log of the proposed joint priors for ``(mu, sigma2)``.

    ``kind`` is ``"jeffreys"`` (conditional Jeffreys prior of the selective
    normal proxy), ``"pmp-gamma1"`` (exact matching proxy, only for
    ``n2 = 0``) or ``"sigma-inv"`` (plain ``c(sigma2)``).  ``v_reading``
    picks the variance estimate in the matching prior's threshold term:
    ``"v1"`` (first batch) or ``"v"`` (full sample).
    """
    mu = np.asarray(mu, float)
    sigma2 = np.asarray(sigma2, float)
    if np.any(sigma2 <= 0):
        raise DomainError("sigma2 must be positive")
    sigma = np.sqrt(sigma2)
    base = np.log(c(sigma2))
    if kind == SIGMA_INV:
        return _shape_out(base)
    if kind == JEFFREYS_BASED:
        arg = math.sqrt(model.n1) * mu / sigma - model.t * math.sqrt(model.v1) / sigma
        return _shape_out(base + 0.5 * np.log1p(model.gamma * sf.h2(arg)))
    if kind == PMP_GAMMA1:
        if model.n2 != 0:
            raise DomainError("the closed-form matching prior needs n2 = 0")
        if v_reading not in ("v1", "v"):
            raise DomainError("v_reading must be 'v1' or 'v'")
        v = model.v1 if v_reading == "v1" else model.v
        root_n = math.sqrt(model.n)
        a = (root_n * mu - model.t * math.sqrt(v)) / sigma
        b = (root_n * mu - root_n * model.ybar) / sigma
        log_ratio = sf.log_h1(a) - sf.log_h1(b)
        bracket = -np.expm1(log_ratio)
        if np.any(~(bracket > 0)) or np.any(~np.isfinite(bracket)):
            raise NumericError("matching-prior bracket is not positive; the h1 ratio is unstable here")
        return _shape_out(base + np.log(bracket))
    raise DomainError(f"unknown prior kind {kind!r}")


def prior_unknown_var(model: UnknownVarModel, kind, mu, sigma2, c=_default_c, v_reading="v1"):
    return _shape_out(np.exp(log_prior_unknown_var(model, kind, mu, sigma2, c, v_reading)))


def unknown_var_log_target(model: UnknownVarModel, kind, c=_default_c, table=None, selective=True):
    """Log posterior in working coordinates ``(mu, log sigma2)``, vectorised over rows."""
    stats_ = {name: np.array([getattr(model, name)]) for name in ("ybar1", "v1", "ybar2", "v2")}
    return unknown_var_batch_log_target(stats_, model.n1, model.n2, model.t, kind, c=c,
                                        table=table, selective=selective)


def unknown_var_batch_log_target(data, n1, n2, t, kind, c=_default_c, table=None, selective=True):
    """Log posterior for ``k`` independent data sets, one chain per row.

    ``data`` maps ``ybar1, v1, ybar2, v2`` to arrays of length ``k``; row
    ``i`` of the argument holds ``(mu, log sigma2)`` for data set ``i``.
    Only the closed-form prior kinds (``"jeffreys"``, ``"sigma-inv"``) are
    supported here.
    """
    if kind not in (JEFFREYS_BASED, SIGMA_INV):
        raise DomainError(f"batched target does not support prior kind {kind!r}")
    ybar1, v1 = np.asarray(data["ybar1"], float), np.asarray(data["v1"], float)
    ybar2 = np.asarray(data.get("ybar2", np.zeros_like(ybar1)), float)
    v2 = np.asarray(data.get("v2", np.zeros_like(ybar1)), float) if n2 >= 2 else np.zeros_like(ybar1)
    n = n1 + n2
    if table is None and selective:
        table = TstatSelectionTable(n1, t)
    root_n1, gamma = math.sqrt(n1), n1 / n
    root_v1 = np.sqrt(v1)

    def log_target(x):
        x = np.atleast_2d(x)
        mu, s = x[:, 0], x[:, 1]
        sigma2 = np.exp(s)
        sigma = np.sqrt(sigma2)
        ss = n1 * (v1 + (ybar1 - mu) ** 2)
        if n2:
            ss = ss + n2 * (v2 + (ybar2 - mu) ** 2)
        out = -0.5 * n * s - ss / (2.0 * sigma2)
        if selective:
            out = out - table(mu, sigma2)
        out = out + np.log(c(sigma2)) + s
        if kind == JEFFREYS_BASED:
            out = out + 0.5 * np.log1p(gamma * sf.h2((root_n1 * mu - t * root_v1) / sigma))
        return out

    return log_target


def unknown_var_initial_point(data, n1, n2):
    """Unadjusted posterior mode and curvature-based proposal scales, per row."""
    ybar1, v1 = np.asarray(data["ybar1"], float), np.asarray(data["v1"], float)
    ybar2 = np.asarray(data.get("ybar2", np.zeros_like(ybar1)), float)
    v2 = np.asarray(data.get("v2", np.zeros_like(ybar1)), float) if n2 >= 2 else np.zeros_like(ybar1)
    n = n1 + n2
    ybar = (n1 * ybar1 + n2 * ybar2) / n
    v = (n1 * v1 + n2 * v2 + n1 * (ybar1 - ybar) ** 2 + n2 * (ybar2 - ybar) ** 2) / n
    init = np.column_stack([ybar, np.log(v)])
    scales = np.column_stack([np.sqrt(v / n), np.full_like(v, math.sqrt(2.0 / n))])
    return init, scales


# ---------------------------------------------------------------------------
# Inference for the winner
# ---------------------------------------------------------------------------

L1 = "L1"
L2 = "L2"

# Trapezoid step for the L1 denominator; the integrand is entire, so the
# rule converges geometrically and this step is accurate to about 1e-12.
_WINNER_STEP = 0.2
_WINNER_PAD = 12.0


@dataclass(frozen=True)
class WinnerModel:
    """``m`` first-stage means ``y`` (the first one largest) plus a follow-up mean."""

    n1: int
    n2: int
    y: tuple
    y_tilde: float
    likelihood: str = L2

    def __post_init__(self):
        y = tuple(float(v) for v in self.y)
        object.__setattr__(self, "y", y)
        if len(y) < 2:
            raise DomainError("need at least two arms")
        if self.n1 <= 0 or self.n2 <= 0:
            raise DomainError("n1 and n2 must be positive")
        if max(y[1:]) > y[0]:
            raise InvalidObservationError("the first arm must have the largest first-stage mean")
        if self.likelihood not in (L1, L2):
            raise DomainError("likelihood must be 'L1' or 'L2'")

    @property
    def m(self):
        return len(self.y)

    @property
    def n(self):
        return self.n1 + self.n2

    @property
    def t(self):
        return max(self.y[1:])

    def proxy(self):
        """One-dimensional selective normal problem for ``theta_1`` under L2."""
        return SplitNormalModel(n=float(self.n), gamma=self.n1 / self.n, t=self.t)

    def proxy_observation(self):
        return (self.n1 * self.y[0] + self.n2 * self.y_tilde) / self.n

    def with_likelihood(self, kind):
        return WinnerModel(self.n1, self.n2, self.y, self.y_tilde, kind)


def log_winner_selection_l1(theta, n1):
    """``log P_theta(Y_1 > max_{i>=2} Y_i)`` for rows of ``theta``.

    Equals ``log int phi(z) prod_{i>=2} Phi(z + n1^(1/2)(theta_1 - theta_i)) dz``,
    evaluated by the trapezoid rule in log space on a window that always
    contains the mode of the integrand.
    """
    theta = np.atleast_2d(np.asarray(theta, float))
    if not np.all(np.isfinite(theta)):
        raise DomainError("theta must be finite")
    d = math.sqrt(n1) * (theta[:, :1] - theta[:, 1:])
    lo = -_WINNER_PAD
    hi = _WINNER_PAD + max(0.0, float(np.max(-d)))
    z = np.arange(lo, hi + _WINNER_STEP, _WINNER_STEP)
    logf = -0.5 * z * z - sf.LOG_SQRT_2PI + sc.log_ndtr(z[None, None, :] + d[:, :, None]).sum(axis=1)
    peak = logf.max(axis=1, keepdims=True)
    w = np.ones(z.size)
    w[0] = w[-1] = 0.5
    vals = np.log(np.exp(logf - peak) @ w * _WINNER_STEP) + peak[:, 0]
    if not np.all(np.isfinite(vals)):
        raise NumericError(
            f"L1 selection probability not finite on the window [{lo:.3g}, {hi:.3g}]")
    return vals


def log_winner_selection_l1_adaptive(theta, n1, tol=1e-8):
    """Same quantity by adaptive quadrature; slower reference used in tests."""
    theta = np.asarray(theta, float)
    d = math.sqrt(n1) * (theta[0] - theta[1:])
    lo, hi = -_WINNER_PAD, _WINNER_PAD + max(0.0, float(np.max(-d)))

    def logf(z, _owner):
        return -0.5 * z * z - sf.LOG_SQRT_2PI + sc.log_ndtr(z[..., None] + d).sum(axis=-1)

    return float(log_integrate_many(logf, [lo], [hi], rtol=tol)[0])


def winner_loglik(model: WinnerModel, theta):
    """Selective log likelihood L1 or L2, vectorised over rows of ``theta``."""
    theta_arr = np.asarray(theta, float)
    scalar = theta_arr.ndim == 1
    theta_arr = np.atleast_2d(theta_arr)
    if theta_arr.shape[1] != model.m:
        raise DomainError(f"theta must have {model.m} components")
    if not np.all(np.isfinite(theta_arr)):
        raise DomainError("theta must be finite")
    y = np.asarray(model.y)
    out = (-0.5 * model.n2 * (theta_arr[:, 0] - model.y_tilde) ** 2
           - 0.5 * model.n1 * ((theta_arr - y) ** 2).sum(axis=1))
    if model.likelihood == L2:
        out = out - sc.log_ndtr(math.sqrt(model.n1) * (theta_arr[:, 0] - model.t))
    else:
        out = out - log_winner_selection_l1(theta_arr, model.n1)
    return float(out[0]) if scalar else out


def log_winner_prior(theta, n1, n, t):
    theta = np.asarray(theta, float)
    th1 = theta[..., 0]
    return _shape_out(0.5 * np.log1p((n1 / n) * sf.h2(math.sqrt(n1) * (th1 - t))))


def winner_prior(theta, n1, n, t):
    """Selective Jeffreys prior for the winner; flat in the other arms."""
    return _shape_out(np.exp(log_winner_prior(theta, n1, n, t)))


def winner_log_target(model: WinnerModel):
    def log_target(x):
        x = np.atleast_2d(x)
        return winner_loglik(model, x) + log_winner_prior(x, model.n1, model.n, model.t)

    return log_target


def winner_batch_log_target(y, y_tilde, n1, n2, likelihood):
    """Log posterior (prior with flat nuisance part) for ``k`` data sets at once.

    Row ``i`` of ``y`` holds the first-stage means with the winner first.
    """
    y = np.asarray(y, float)
    y_tilde = np.asarray(y_tilde, float)
    if np.any(y[:, 1:].max(axis=1) > y[:, 0]):
        raise InvalidObservationError("the first column must hold the largest mean")
    t = y[:, 1:].max(axis=1)
    n = n1 + n2
    root_n1 = math.sqrt(n1)

    def log_target(x):
        out = -0.5 * n2 * (x[:, 0] - y_tilde) ** 2 - 0.5 * n1 * ((x - y) ** 2).sum(axis=1)
        if likelihood == L2:
            out = out - sc.log_ndtr(root_n1 * (x[:, 0] - t))
        else:
            out = out - log_winner_selection_l1(x, n1)
        return out + 0.5 * np.log1p((n1 / n) * sf.h2(root_n1 * (x[:, 0] - t)))

    return log_target


def winner_initial_point(model: WinnerModel):
    start = np.asarray(model.y, float).copy()
    start[0] = model.proxy_observation()
    scales = np.full(model.m, 1.0 / math.sqrt(model.n1))
    scales[0] = 1.0 / math.sqrt(model.n)
    return start, scales


# ---------------------------------------------------------------------------
# Metropolis-Hastings
# ---------------------------------------------------------------------------

ADAPT_WINDOW = 50
TARGET_LOW, TARGET_HIGH = 0.2, 0.4


@dataclass(frozen=True)
class MHConfig:
    """Random-walk sampler settings; ``burn_in=None`` means 20% of ``steps``."""

    steps: int = 10_000
    burn_in: Optional[int] = None
    proposal_scales: Optional[tuple] = None
    seed: int = 0
    adapt: bool = True

    def __post_init__(self):
        if self.steps < 2:
            raise DomainError("steps must be at least 2")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", self.steps // 5)
        if not 0 <= self.burn_in < self.steps:
            raise DomainError("burn_in must lie in [0, steps)")
        if self.proposal_scales is not None:
            scales = tuple(float(s) for s in self.proposal_scales)
            if not all(s > 0 and math.isfinite(s) for s in scales):
                raise DomainError("proposal scales must be positive")
            object.__setattr__(self, "proposal_scales", scales)


@dataclass
class Chain:
    samples: np.ndarray
    acceptance_rate: float
    config: MHConfig
    final_scales: np.ndarray = field(default=None, repr=False)


def acceptance_probability(log_new, log_old):
    """Metropolis acceptance ``min(1, exp(log_new - log_old))`` (symmetric proposals)."""
    with np.errstate(invalid="ignore", over="ignore"):
        diff = np.asarray(log_new, float) - np.asarray(log_old, float)
        out = np.where(np.isnan(diff), 0.0, np.exp(np.minimum(diff, 0.0)))
    return _shape_out(out)


def mh_transition_matrix(log_p, proposal):
    """Metropolis-Hastings kernel on a finite state space.

    ``proposal[i, j]`` is the probability of proposing ``j`` from ``i``;
    the result is the row-stochastic transition matrix of the chain.
    """
    log_p = np.asarray(log_p, float)
    q = np.asarray(proposal, float)
    k = log_p.size
    kernel = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i != j and q[i, j] > 0:
                ratio = log_p[j] + math.log(q[j, i]) - log_p[i] - math.log(q[i, j]) if q[j, i] > 0 else -math.inf
                kernel[i, j] = q[i, j] * acceptance_probability(ratio, 0.0)
        kernel[i, i] = 1.0 - kernel[i].sum()
    return kernel


def mh_sample_batch(log_target: Callable, init, config: MHConfig, rng=None, scales=None):
    """Run ``k`` independent random-walk chains side by side.

    ``log_target`` maps an array of shape ``(k, d)`` to ``k`` log densities.
    Returns samples of shape ``(k, steps - burn_in, d)``, per-chain
    post-burn-in acceptance rates and final proposal scales.  During
    burn-in each chain rescales its proposal every ``ADAPT_WINDOW`` steps
    toward an acceptance rate in ``[0.2, 0.4]``; afterwards the kernel is
    fixed.  ``scales`` optionally gives per-chain starting scales of shape
    ``(k, d)`` and overrides ``config.proposal_scales``.
    """
    x = np.array(np.atleast_2d(init), dtype=float)
    k, d = x.shape
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    if scales is not None:
        scales = np.broadcast_to(np.asarray(scales, float), (k, d)).copy()
    elif config.proposal_scales is None:
        scales = np.full((k, d), 0.5)
    else:
        scales = np.broadcast_to(np.asarray(config.proposal_scales, float), (k, d)).copy()
    lp = np.asarray(log_target(x), float)
    if not np.all(np.isfinite(lp)):
        raise DomainError("log target must be finite at the initial point")
    keep = config.steps - config.burn_in
    samples = np.empty((k, keep, d))
    window_acc = np.zeros(k)
    burn_acc = np.zeros(k)
    post_acc = np.zeros(k)
    for step in range(config.steps):
        prop = x + scales * rng.standard_normal((k, d))
        lq = np.asarray(log_target(prop), float)
        lq = np.where(np.isnan(lq), -np.inf, lq)
        accept = np.log(rng.random(k)) < lq - lp
        x[accept] = prop[accept]
        lp[accept] = lq[accept]
        if step < config.burn_in:
            window_acc += accept
            burn_acc += accept
            if config.adapt and (step + 1) % ADAPT_WINDOW == 0:
                rate = window_acc / ADAPT_WINDOW
                factor = np.where(rate < TARGET_LOW, 0.6, np.where(rate > TARGET_HIGH, 1.6, 1.0))
                factor = np.where(rate == 0, 0.25, factor)
                scales *= factor[:, None]
                window_acc[:] = 0
        else:
            post_acc += accept
            samples[:, step - config.burn_in] = x
    if config.burn_in and np.any(burn_acc == 0):
        raise StuckChainError(f"{int(np.sum(burn_acc == 0))} chain(s) rejected every proposal during burn-in")
    if np.any(post_acc == 0):
        raise StuckChainError(f"{int(np.sum(post_acc == 0))} chain(s) rejected every proposal after burn-in")
    return samples, post_acc / keep, scales


def mh_sample(log_target: Callable, init, config: MHConfig) -> Chain:
    """Single-chain random-walk Metropolis-Hastings with burn-in adaptation.

    ``log_target`` takes a 1-D parameter vector and returns a float.
    """
    init = np.atleast_1d(np.asarray(init, float))

    def batched(x):
        return np.array([log_target(x[0])], dtype=float)

    samples, rate, scales = mh_sample_batch(batched, init[None, :], config)
    return Chain(samples=samples[0], acceptance_rate=float(rate[0]), config=config,
                 final_scales=scales[0])


def credible_interval(chain, coordinate=0, level=0.9):
    """Equal-tailed interval from empirical quantiles of one coordinate."""
    samples = chain.samples if isinstance(chain, Chain) else np.asarray(chain)
    col = samples[:, coordinate] if samples.ndim == 2 else samples
    if col.size == 0:
        raise DomainError("empty chain")
    if not 0.0 < level < 1.0:
        raise DomainError("level must lie in (0, 1)")
    lo, hi = np.quantile(col, [(1.0 - level) / 2.0, (1.0 + level) / 2.0])
    return float(lo), float(hi)


def effective_sample_size(x, max_lag=None):
    """Initial-positive-sequence estimate of the effective sample size."""
    x = np.asarray(x, float)
    x = x - x.mean()
    n = x.size
    var = x.var()
    if var == 0:
        return float(n)
    f = np.fft.rfft(x, 2 * n)
    acov = np.fft.irfft(f * np.conj(f))[:n] / n
    rho = acov / var
    max_lag = max_lag or n - 1
    tau = 1.0
    for lag in range(1, max_lag, 2):
        pair = rho[lag] + (rho[lag + 1] if lag + 1 < n else 0.0)
        if pair < 0:
            break
        tau += 2 * pair
    return float(n / tau)
