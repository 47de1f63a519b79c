"""Repeated-sampling checks of selective posteriors.

Coverage of the one-sided interval ``(-inf, Pi^{-1}(alpha | data)]`` at a
true parameter ``theta0`` equals ``P(Pi(theta0 | data) <= alpha | S)``.
For the normal model this is computed by root finding, otherwise by
simulation from the selective distribution.

Random streams are keyed by ``(seed, cell, block)`` through
``numpy.random.SeedSequence``.  Replications are processed in fixed-size
blocks, so results do not depend on the number of worker processes.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import special as sc
from scipy import stats
from scipy.optimize import brentq

from . import expfam as ef
from . import multiparam as mp
from . import selective_normal as sn
from . import special_fns as sf
from .errors import ConsistencyError, DomainError, LowAcceptanceError, NumericError
from .selective_normal import PriorKind, SplitNormalModel

SELECTION_FLOOR = 1e-3
ATTEMPT_SAFETY = 10.0
BLOCK = 250
ROOT_XTOL = 1e-10


# ---------------------------------------------------------------------------
# Designs and conditional sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnknownVarDesign:
    """Sampling design of the unknown-variance t-test selection model."""

    n1: int = 50
    n2: int = 10
    t: float = 2.0

    def selection_probability(self, theta):
        mu, sigma2 = theta
        return mp.tstat_selection_probability(mu, sigma2, self.n1, self.t)

    def draw(self, theta, size, rng):
        """Sufficient statistics of ``size`` unconditional samples."""
        mu, sigma2 = theta
        sigma = math.sqrt(sigma2)
        out = {
            "ybar1": rng.normal(mu, sigma / math.sqrt(self.n1), size),
            "v1": sigma2 * rng.chisquare(self.n1 - 1, size) / self.n1,
        }
        if self.n2:
            out["ybar2"] = rng.normal(mu, sigma / math.sqrt(self.n2), size)
            out["v2"] = (sigma2 * rng.chisquare(self.n2 - 1, size) / self.n2
                         if self.n2 >= 2 else np.zeros(size))
        else:
            out["ybar2"] = np.zeros(size)
            out["v2"] = np.zeros(size)
        return out

    def selected(self, data):
        return data["ybar1"] / np.sqrt(data["v1"]) > self.t / math.sqrt(self.n1)


@dataclass(frozen=True)
class WinnerDesign:
    """``m`` arms with first-stage means of precision ``n1`` and a follow-up of size ``n2``."""

    m: int = 2
    n1: int = 5
    n2: int = 5

    def draw(self, theta, size, rng):
        """First-stage means sorted so the winner comes first, plus the follow-up mean."""
        theta = np.broadcast_to(np.asarray(theta, float), (self.m,))
        y = theta + rng.standard_normal((size, self.m)) / math.sqrt(self.n1)
        order = np.argsort(-y, axis=1)
        y_sorted = np.take_along_axis(y, order, axis=1)
        winner_theta = theta[order[:, 0]]
        y_tilde = winner_theta + rng.standard_normal(size) / math.sqrt(self.n2)
        return {"y": y_sorted, "y_tilde": y_tilde, "theta_winner": winner_theta}


class ConditionalDraws(NamedTuple):
    samples: Any
    attempts: int
    accepted: int

    @property
    def acceptance_rate(self):
        return self.accepted / self.attempts if self.attempts else float("nan")


def _rng(seed, *keys):
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(k) for k in keys]]))


def _selection_probability(model, theta):
    if isinstance(model, SplitNormalModel):
        return sn.selection_probability(model, theta)
    if isinstance(model, ef.ExpFamModel1D):
        return float(model.selection_probability(theta))
    if isinstance(model, UnknownVarDesign):
        return model.selection_probability(theta)
    if isinstance(model, WinnerDesign):
        return 1.0
    raise DomainError(f"no conditional sampler for {type(model).__name__}")


def _draw_block(model, theta, size, rng):
    """Unconditional draws plus a boolean selection mask."""
    if isinstance(model, SplitNormalModel):
        y1 = rng.normal(theta, 1.0 / math.sqrt(model.n1), size)
        if model.gamma < 1.0:
            y2 = rng.normal(theta, 1.0 / math.sqrt(model.n2), size)
            y = model.gamma * y1 + (1.0 - model.gamma) * y2
        else:
            y = y1
        return y, y1 > model.t
    if isinstance(model, ef.ExpFamModel1D):
        x = model.draw(theta, size, rng)
        first, _ = model.split(x)
        return x, model.selected_mle(model.mle(first))
    if isinstance(model, UnknownVarDesign):
        data = model.draw(theta, size, rng)
        return data, model.selected(data)
    if isinstance(model, WinnerDesign):
        data = model.draw(theta, size, rng)
        return data, np.ones(size, bool)
    raise DomainError(f"no conditional sampler for {type(model).__name__}")


def _take(block, mask):
    if isinstance(block, dict):
        return {k: v[mask] for k, v in block.items()}
    return block[mask]


def _concat(parts):
    if isinstance(parts[0], dict):
        return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    return np.concatenate(parts)


def _trim(samples, count):
    if isinstance(samples, dict):
        return {k: v[:count] for k, v in samples.items()}
    return samples[:count]


def sample_conditional(model, theta, count, seed=0, floor=SELECTION_FLOOR, rng=None):
    """Draw ``count`` samples from the selective distribution by rejection.

    ``model`` is a :class:`SplitNormalModel` (draws of the sufficient
    statistic ``Y``), an exponential-family descriptor (full samples, one
    per row), an :class:`UnknownVarDesign` or a :class:`WinnerDesign`
    (dicts of statistic arrays).  Refuses when the selection probability
    is below ``floor`` and aborts after ``count / floor * 10`` attempts.
    """
    if count < 1:
        raise DomainError("count must be positive")
    prob = _selection_probability(model, theta)
    if prob < floor:
        raise LowAcceptanceError(
            f"selection probability {prob:.3g} at theta={theta} is below the floor {floor}", rate=prob)
    rng = rng if rng is not None else _rng(seed, 0)
    cap = int(math.ceil(count / floor * ATTEMPT_SAFETY))
    parts, accepted, attempts = [], 0, 0
    while accepted < count:
        if attempts >= cap:
            raise LowAcceptanceError(
                f"rejection sampler accepted {accepted} of {attempts} draws before the cap",
                rate=accepted / attempts)
        need = count - accepted
        size = int(min(cap - attempts, max(64, math.ceil(1.2 * need / max(prob, floor)))))
        block, mask = _draw_block(model, theta, size, rng)
        attempts += size
        accepted += int(np.count_nonzero(mask))
        parts.append(_take(block, mask))
    return ConditionalDraws(_trim(_concat(parts), count), attempts, accepted)


# ---------------------------------------------------------------------------
# Coverage specifications and reports
# ---------------------------------------------------------------------------

DETERMINISTIC = "deterministic"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class CoverageSpec:
    model: Any
    prior: Any
    thetas: tuple
    alphas: tuple
    reps: int = 1
    seed: int = 0
    method: str = DETERMINISTIC
    mode: str = sn.SELECTIVE

    def __post_init__(self):
        object.__setattr__(self, "thetas", tuple(float(v) for v in np.atleast_1d(self.thetas)))
        object.__setattr__(self, "alphas", tuple(float(v) for v in np.atleast_1d(self.alphas)))
        if self.reps < 1:
            raise DomainError("reps must be at least 1")
        if any(not 0.0 < a <= 1.0 for a in self.alphas):
            raise DomainError("alpha values must lie in (0, 1]")
        if self.method not in (DETERMINISTIC, MONTE_CARLO):
            raise DomainError(f"unknown coverage method {self.method!r}")


class CoverageEntry(NamedTuple):
    theta: float
    alpha: float
    estimate: float
    se: float

    @property
    def error(self):
        return self.estimate - self.alpha


@dataclass
class CoverageReport:
    entries: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = sorted(self.entries, key=lambda e: (e.theta, e.alpha))

    def estimate(self, theta, alpha):
        for e in self.entries:
            if math.isclose(e.theta, theta, abs_tol=1e-12) and math.isclose(e.alpha, alpha, abs_tol=1e-12):
                return e.estimate
        raise KeyError((theta, alpha))

    def max_abs_error(self):
        return max(abs(e.error) for e in self.entries)


def _prior_label(prior):
    if callable(prior) and not isinstance(prior, (str, PriorKind)):
        return getattr(prior, "__name__", "custom")
    return PriorKind.parse(prior).value


# ---------------------------------------------------------------------------
# Deterministic coverage (normal model)
# ---------------------------------------------------------------------------

def posterior_quantile_threshold(model: SplitNormalModel, prior, theta0, alpha, mode=sn.SELECTIVE,
                                 xtol=ROOT_XTOL):
    """Observation ``y_alpha`` with ``Pi(theta0 | y_alpha) = alpha``.

    ``Pi(theta0 | y)`` decreases in ``y``; returns ``model.t`` when every
    admissible ``y`` already has ``Pi(theta0 | y) <= alpha``.  Raises
    :class:`ConsistencyError` if monotonicity fails during bracketing.
    """
    def f(y):
        return sn.posterior_cdf(model, y, prior, theta0, mode) - alpha

    truncated = model.gamma == 1.0 and model.selects
    hi = max(theta0, model.t if truncated else theta0) + 3.0
    f_hi = f(hi)
    prev = f_hi
    for _ in range(200):
        if f_hi <= 0:
            break
        hi += 1.0 + 0.5 * (hi - theta0)
        f_hi = f(hi)
        if f_hi > prev + 1e-9:
            raise ConsistencyError(f"Pi(theta0 | y) increased with y near y={hi:.6g}")
        prev = f_hi
    else:
        raise NumericError("could not bracket the posterior-quantile root from above")
    if truncated:
        gap = max(min(hi - model.t, 1.0), 1e-3)
        lo = model.t + gap
        f_lo = f(lo)
        prev = f_lo
        while f_lo < 0:
            gap /= 10.0
            if gap < 1e-12:
                return model.t
            lo = model.t + gap
            f_lo = f(lo)
            if f_lo < prev - 1e-9:
                raise ConsistencyError(f"Pi(theta0 | y) increased with y near y={lo:.6g}")
            prev = f_lo
    else:
        lo = min(theta0, hi) - 3.0
        f_lo = f(lo)
        prev = f_lo
        for _ in range(200):
            if f_lo >= 0:
                break
            lo -= 1.0 + 0.5 * (theta0 - lo)
            f_lo = f(lo)
            if f_lo < prev - 1e-9:
                raise ConsistencyError(f"Pi(theta0 | y) increased with y near y={lo:.6g}")
            prev = f_lo
        else:
            raise NumericError("could not bracket the posterior-quantile root from below")
    if f_lo < f_hi:
        raise ConsistencyError("Pi(theta0 | y) is not decreasing across the bracket")
    return brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def coverage_cell(model: SplitNormalModel, prior, theta0, alpha, mode=sn.SELECTIVE):
    """Exact coverage ``P(Pi(theta0 | Y) <= alpha | S) = H(theta0; y_alpha)``."""
    if alpha >= 1.0:
        return 1.0
    y_alpha = posterior_quantile_threshold(model, prior, theta0, alpha, mode)
    if model.gamma == 1.0 and y_alpha <= model.t:
        return 1.0
    return sn.confidence_cdf(model, theta0, y_alpha)


def coverage_deterministic(spec: CoverageSpec) -> CoverageReport:
    if not isinstance(spec.model, SplitNormalModel):
        raise DomainError("deterministic coverage is available for the normal model only")
    start = time.perf_counter()
    entries = [CoverageEntry(th, a, coverage_cell(spec.model, spec.prior, th, a, spec.mode), 0.0)
               for th in spec.thetas for a in spec.alphas]
    meta = {"method": DETERMINISTIC, "prior": _prior_label(spec.prior), "model": repr(spec.model),
            "root_tolerance": ROOT_XTOL, "runtime_s": time.perf_counter() - start}
    return CoverageReport(entries, meta)


# ---------------------------------------------------------------------------
# Monte Carlo coverage
# ---------------------------------------------------------------------------

def posterior_cdf_at(model, data, prior, theta0, mode=sn.SELECTIVE):
    """``Pi(theta0 | data)`` for one replication of a supported model."""
    if isinstance(model, SplitNormalModel):
        return sn.posterior_cdf(model, float(data), prior, theta0, mode)
    if isinstance(model, ef.ExpFamModel1D):
        return ef.posterior_cdf_expfam(model, data, prior, theta0)
    raise DomainError(f"no posterior engine for {type(model).__name__}")


def _pit_block(args):
    model, prior, theta0, mode, count, seed, cell, block = args
    rng = _rng(seed, cell, block)
    draws = sample_conditional(model, theta0, count, rng=rng)
    samples = draws.samples
    return np.array([posterior_cdf_at(model, samples[i], prior, theta0, mode) for i in range(count)])


def _blocks(reps, block=BLOCK):
    sizes = [block] * (reps // block)
    if reps % block:
        sizes.append(reps % block)
    return sizes


def run_tasks(fn: Callable, tasks: Sequence, threads: int = 1):
    """Map ``fn`` over ``tasks`` in order, optionally in worker processes."""
    if threads and threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def pit_values(model, prior, theta0, reps, seed=0, cell=0, mode=sn.SELECTIVE, threads=1):
    """``Pi(theta0 | data)`` over ``reps`` selective replications."""
    tasks = [(model, prior, theta0, mode, size, seed, cell, b) for b, size in enumerate(_blocks(reps))]
    return np.concatenate(run_tasks(_pit_block, tasks, threads))


def coverage_from_pit(pits, alphas):
    pits = np.asarray(pits)
    out = []
    for a in alphas:
        p = float(np.mean(pits <= a)) if a < 1.0 else 1.0
        out.append((p, math.sqrt(p * (1.0 - p) / pits.size)))
    return out


def coverage_mc(spec: CoverageSpec, threads: int = 1) -> CoverageReport:
    """Coverage estimated from ``reps`` selective replications per ``theta``."""
    start = time.perf_counter()
    entries = []
    for cell, th in enumerate(spec.thetas):
        pits = pit_values(spec.model, spec.prior, th, spec.reps, spec.seed, cell, spec.mode, threads)
        for a, (p, se) in zip(spec.alphas, coverage_from_pit(pits, spec.alphas)):
            entries.append(CoverageEntry(th, a, p, se))
    meta = {"method": MONTE_CARLO, "prior": _prior_label(spec.prior), "model": repr(spec.model),
            "reps": spec.reps, "seed": spec.seed, "runtime_s": time.perf_counter() - start}
    return CoverageReport(entries, meta)


# ---------------------------------------------------------------------------
# Study drivers
# ---------------------------------------------------------------------------

@dataclass
class StudyTable:
    """Rows of plain values with a stable column order and a metadata block."""

    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def where(self, **conds):
        idx = {k: self.columns.index(k) for k in conds}
        return [r for r in self.rows if all(r[idx[k]] == v for k, v in conds.items())]


def _standard_normal_log_prior(theta):
    return sf.norm_logpdf(np.asarray(theta, float))


def fig1_coverage(thetas, reps=100_000, seed=0, n=5.0, level=0.9, threads=1):
    """Coverage of equal-tailed credible intervals under a standard normal prior.

    ``Y ~ N(theta, 1/n)``; the selective regime keeps ``Y > 0``.  Three
    curves: unadjusted and selection-adjusted posteriors in the selective
    regime, and the unadjusted posterior without selection.  Each draw is
    classified through the thresholds ``y_alpha`` solving
    ``Pi(theta0 | y_alpha) = alpha``, which is exact because the posterior
    CDF at ``theta0`` decreases in ``y``.
    """
    tail = (1.0 - level) / 2.0
    model = SplitNormalModel(n=n, gamma=1.0, t=0.0)
    free = SplitNormalModel(n=n, gamma=1.0, t=-math.inf)
    rows = []
    prior = _standard_normal_log_prior
    for cell, th in enumerate(thetas):
        rng = _rng(seed, cell, 0)
        sel = sample_conditional(model, th, reps, rng=rng).samples
        allv = th + rng.standard_normal(reps) / math.sqrt(n)
        for regime, mode, data, mdl in (("selective", sn.UNADJUSTED, sel, model),
                                        ("selective", sn.SELECTIVE, sel, model),
                                        ("nonselective", sn.UNADJUSTED, allv, free)):
            y_hi = posterior_quantile_threshold(mdl, prior, th, tail, mode)
            y_lo = posterior_quantile_threshold(mdl, prior, th, 1.0 - tail, mode)
            # Pi in [tail, 1 - tail]  <=>  y_lo <= y <= y_hi
            cover = (data >= y_lo) & (data <= y_hi)
            p = float(np.mean(cover))
            rows.append([float(th), regime, "adjusted" if mode == sn.SELECTIVE else "unadjusted",
                         p, math.sqrt(p * (1 - p) / reps)])
    meta = {"n": n, "level": level, "reps": reps, "seed": seed, "prior": "N(0,1)"}
    return StudyTable(["theta", "regime", "posterior", "coverage", "se"], rows, meta)


EXPFAM_FAMILIES = {
    "exponential": ef.ExponentialRate,
    "inverse-gaussian": ef.InverseGaussianMean,
}


def expfam_model(family, n, split=0.8, c=1.0):
    n1 = int(round(split * n))
    return EXPFAM_FAMILIES[family](n1=n1, n2=n - n1, c=c)


def _expfam_block(args):
    model, priors, theta0, count, seed, cell, block = args
    rng = _rng(seed, cell, block)
    draws = sample_conditional(model, theta0, count, rng=rng).samples
    return np.array([[ef.posterior_cdf_expfam(model, draws[i], p, theta0) for p in priors]
                     for i in range(count)])


def expfam_coverage_study(family, ns=(10, 30, 80), probs=(0.1, 0.5, 0.9),
                          priors=("jeffreys", "nonselective-jeffreys"),
                          alphas=tuple(np.round(np.arange(1, 10) / 10, 2)),
                          reps=2000, seed=0, threads=1, split=0.8):
    """Coverage curves for the exponential-family examples.

    ``theta0`` solves ``phi_n(theta0) = prob`` for each panel and is stored
    in the output rows.
    """
    priors = [PriorKind.parse(p).value for p in priors]
    tasks, panels = [], []
    for i, n in enumerate(ns):
        model = expfam_model(family, n, split)
        for j, q in enumerate(probs):
            theta0 = model.solve_theta(q)
            cell = 100 * i + j
            panels.append((n, q, theta0, model, cell))
            tasks += [(model, priors, theta0, size, seed, cell, b)
                      for b, size in enumerate(_blocks(reps))]
    results = run_tasks(_expfam_block, tasks, threads)
    rows, summary = [], []
    k = 0
    nblocks = len(_blocks(reps))
    for n, q, theta0, model, cell in panels:
        pits = np.concatenate(results[k:k + nblocks])
        k += nblocks
        for pi, prior in enumerate(priors):
            cov = coverage_from_pit(pits[:, pi], alphas)
            dev = max(abs(p - a) for (p, _), a in zip(cov, alphas))
            summary.append({"n": n, "phi": q, "theta0": theta0, "prior": prior, "sup_dev": dev})
            for a, (p, se) in zip(alphas, cov):
                rows.append([family, n, q, theta0, prior, float(a), p, se])
    meta = {"family": family, "reps": reps, "seed": seed, "split": split, "summary": summary}
    return StudyTable(["family", "n", "phi", "theta0", "prior", "alpha", "coverage", "se"], rows, meta)


# -- unknown variance (PIT) ---------------------------------------------------

def _pit_unknown_block(args):
    design, theta0, priors, mh, count, seed, block, table = args
    rng = _rng(seed, 0, block)
    data = sample_conditional(design, theta0, count, rng=rng).samples
    init, scales = mp.unknown_var_initial_point(data, design.n1, design.n2)
    out = np.empty((count, len(priors)))
    for pi, prior in enumerate(priors):
        target = mp.unknown_var_batch_log_target(data, design.n1, design.n2, design.t, prior, table=table)
        cfg = mp.MHConfig(steps=mh.steps, burn_in=mh.burn_in, seed=0, adapt=mh.adapt)
        samples, _, _ = mp.mh_sample_batch(target, init, cfg, rng=_rng(seed, 1 + pi, block),
                                           scales=scales)
        out[:, pi] = np.mean(samples[:, :, 0] <= theta0[0], axis=1)
    return out


def pit_ecdf(design: UnknownVarDesign = UnknownVarDesign(), theta0=(0.0, 1.0),
             priors=(mp.JEFFREYS_BASED, mp.SIGMA_INV), reps=500,
             mh: mp.MHConfig = mp.MHConfig(steps=5000), seed=0, threads=1, grid_points=101):
    """ECDFs of ``Pi(mu0 | data)`` under each prior, with KS distances to uniform."""
    if reps < 100:
        raise DomainError("pit_ecdf needs at least 100 replications")
    table = mp.TstatSelectionTable(design.n1, design.t)
    tasks = [(design, tuple(theta0), tuple(priors), mh, size, seed, b, table)
             for b, size in enumerate(_blocks(reps, 100))]
    pits = np.concatenate(run_tasks(_pit_unknown_block, tasks, threads))
    grid = np.linspace(0.0, 1.0, grid_points)
    rows = []
    ks = {}
    for pi, prior in enumerate(priors):
        vals = np.sort(pits[:, pi])
        ecdf = np.searchsorted(vals, grid, side="right") / vals.size
        ks[prior] = float(stats.kstest(vals, "uniform").statistic)
        rows += [[prior, float(u), float(e), math.sqrt(e * (1.0 - e) / vals.size)]
                 for u, e in zip(grid, ecdf)]
    meta = {"design": vars(design) if hasattr(design, "__dict__") else repr(design),
            "theta0": list(theta0), "reps": reps, "steps": mh.steps, "burn_in": mh.burn_in,
            "seed": seed, "ks": ks}
    return StudyTable(["prior", "u", "ecdf", "se"], rows, meta), pits


# -- inference for the winner ---------------------------------------------------

def _winner_block(args):
    design, kinds, level, mh, count, seed, block = args
    rng = _rng(seed, design.m, block)
    data = sample_conditional(design, 0.0, count, rng=rng).samples
    y, y_tilde = data["y"], data["y_tilde"]
    init = y.copy()
    init[:, 0] = (design.n1 * y[:, 0] + design.n2 * y_tilde) / (design.n1 + design.n2)
    scales = np.full(design.m, 1.0 / math.sqrt(design.n1))
    scales[0] = 1.0 / math.sqrt(design.n1 + design.n2)
    out = {}
    for ki, kind in enumerate(kinds):
        target = mp.winner_batch_log_target(y, y_tilde, design.n1, design.n2, kind)
        cfg = mp.MHConfig(steps=mh.steps, burn_in=mh.burn_in, proposal_scales=tuple(scales),
                          seed=0, adapt=mh.adapt)
        samples, rate, _ = mp.mh_sample_batch(target, init, cfg,
                                              rng=_rng(seed, design.m, block, 1 + ki))
        lo, hi = np.quantile(samples[:, :, 0], [(1 - level) / 2, (1 + level) / 2], axis=1)
        truth = data["theta_winner"]
        out[kind] = (np.asarray((lo <= truth) & (truth <= hi), float), hi - lo, rate)
    return out


def winner_study(ms=(2, 5, 10, 20), n1=5, n2=5, reps=5000, level=0.9,
                 mh: mp.MHConfig = mp.MHConfig(steps=10_000), seed=0, threads=1,
                 likelihoods=(mp.L1, mp.L2)):
    """Coverage and mean length of equal-tailed intervals for the winner's mean."""
    if reps < 100:
        raise DomainError("winner_study needs at least 100 replications")
    rows = []
    rates = {}
    for m in ms:
        design = WinnerDesign(m=m, n1=n1, n2=n2)
        tasks = [(design, tuple(likelihoods), level, mh, size, seed, b)
                 for b, size in enumerate(_blocks(reps))]
        parts = run_tasks(_winner_block, tasks, threads)
        for kind in likelihoods:
            cover = np.concatenate([p[kind][0] for p in parts])
            length = np.concatenate([p[kind][1] for p in parts])
            rate = np.concatenate([p[kind][2] for p in parts])
            rates[f"{m}-{kind}"] = float(rate.mean())
            cov = float(cover.mean())
            rows.append([m, kind, cov, math.sqrt(cov * (1 - cov) / reps), float(length.mean()),
                         float(length.std(ddof=1) / math.sqrt(reps))])
    meta = {"n1": n1, "n2": n2, "reps": reps, "level": level, "steps": mh.steps,
            "burn_in": mh.burn_in, "seed": seed, "mean_acceptance": rates}
    return StudyTable(["m", "likelihood", "coverage", "coverage_se", "length", "length_se"], rows, meta)
