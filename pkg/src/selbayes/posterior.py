"""Tabulated one-dimensional posteriors.

A posterior is described by an unnormalised log density on some working
variable ``u`` (the parameter itself, or a monotone transform of it).
:func:`tabulate` finds a support interval that carries all but a
negligible amount of mass, integrates the density panel by panel and
returns a :class:`PosteriorCurve` whose grid is expressed in the
parameter scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import DivergedPosteriorError, DomainError, NumericError
from .quadrature import integrate_many

# Support edges sit where the density has fallen below exp(-DROP) of its peak.
DROP = 36.0
PROBES = 401
MAX_EXPANSIONS = 60


def _identity(u):
    return u


@dataclass(frozen=True)
class Support:
    lo: float
    hi: float
    peak: float
    probes: np.ndarray = field(repr=False)


def find_support(logpdf, center, scale, lower=-math.inf, upper=math.inf):
    """Locate ``[lo, hi]`` outside which the density is negligible.

    Starts at ``center +/- 10 scale`` and doubles the step on each side
    while the boundary density is within ``exp(-DROP)`` of the peak.
    """
    if not (scale > 0 and math.isfinite(center)):
        raise DomainError("support search needs a finite center and positive scale")
    lo_cap = lower + 1e-12 * max(1.0, abs(lower)) if math.isfinite(lower) else -math.inf
    hi_cap = upper - 1e-12 * max(1.0, abs(upper)) if math.isfinite(upper) else math.inf
    lo = max(center - 10.0 * scale, lo_cap)
    hi = min(center + 10.0 * scale, hi_cap)
    if not lo < hi:
        raise DomainError("empty support interval")
    xs = np.linspace(lo, hi, PROBES)
    with np.errstate(divide="ignore", invalid="ignore"):
        ls = np.asarray(logpdf(xs), dtype=float)
    step_l = step_r = 10.0 * scale
    for _ in range(MAX_EXPANSIONS):
        finite = ls[np.isfinite(ls)]
        if finite.size == 0:
            raise NumericError("log density is not finite anywhere on the probe grid")
        peak = float(np.max(finite))
        grow_l = xs[0] > lo_cap and ls[0] > peak - DROP
        grow_r = xs[-1] < hi_cap and ls[-1] > peak - DROP
        if not (grow_l or grow_r):
            return Support(float(xs[0]), float(xs[-1]), peak, xs)
        if grow_l:
            new_lo = max(xs[0] - step_l, lo_cap)
            extra = np.linspace(new_lo, xs[0], 65)[:-1]
            with np.errstate(divide="ignore", invalid="ignore"):
                xs = np.concatenate([extra, xs])
                ls = np.concatenate([np.asarray(logpdf(extra), float), ls])
            step_l *= 2.0
        if grow_r:
            new_hi = min(xs[-1] + step_r, hi_cap)
            extra = np.linspace(xs[-1], new_hi, 65)[1:]
            with np.errstate(divide="ignore", invalid="ignore"):
                xs = np.concatenate([xs, extra])
                ls = np.concatenate([ls, np.asarray(logpdf(extra), float)])
            step_r *= 2.0
    raise DivergedPosteriorError(
        f"posterior mass keeps growing after {MAX_EXPANSIONS} grid expansions "
        f"(support now [{xs[0]:.4g}, {xs[-1]:.4g}])")


def _panel_integrals(logpdf, edges, peak, rtol=1e-11):
    def f(x, _owner):
        with np.errstate(under="ignore", divide="ignore", invalid="ignore"):
            v = np.exp(np.asarray(logpdf(x.ravel()), float) - peak).reshape(x.shape)
        return np.where(np.isnan(v), 0.0, v)

    vals, _ = integrate_many(f, edges[:-1], edges[1:], atol=1e-15 * (edges[-1] - edges[0]),
                             rtol=rtol)
    return vals


@dataclass(frozen=True)
class PosteriorCurve:
    """Normalised posterior distribution function tabulated on a grid.

    ``grid`` is in the parameter scale; ``cdf[i]`` is the posterior
    probability of ``(-inf, grid[i]]``.  Between grid points the curve is
    evaluated by integrating the stored density, so :meth:`cdf_at` and
    :meth:`quantile` are consistent to the root-finder tolerance.
    """

    grid: np.ndarray
    cdf: np.ndarray
    meta: dict = field(default_factory=dict)
    _ugrid: np.ndarray = field(default=None, repr=False, compare=False)
    _logpdf: Callable = field(default=None, repr=False, compare=False)
    _peak: float = field(default=0.0, repr=False, compare=False)
    _mass: float = field(default=1.0, repr=False, compare=False)
    _to_u: Callable = field(default=_identity, repr=False, compare=False)
    _from_u: Callable = field(default=_identity, repr=False, compare=False)

    def _partial(self, i, u):
        if u <= self._ugrid[i]:
            return 0.0
        val = _panel_integrals(self._logpdf, np.array([self._ugrid[i], u]), self._peak)
        return float(val[0]) / self._mass

    def _cdf_u(self, u):
        ug = self._ugrid
        if u <= ug[0]:
            return 0.0
        if u >= ug[-1]:
            return 1.0
        i = int(np.searchsorted(ug, u, side="right")) - 1
        return min(1.0, self.cdf[i] + self._partial(i, u))

    def cdf_at(self, theta):
        """Posterior probability of ``(-inf, theta]``."""
        if np.ndim(theta):
            return np.array([self.cdf_at(float(v)) for v in np.ravel(theta)]).reshape(np.shape(theta))
        return self._cdf_u(float(self._to_u(theta)))

    def pdf(self, theta):
        """Normalised density in the working variable, evaluated at ``theta``."""
        u = np.asarray(self._to_u(np.asarray(theta, float)), float)
        return np.exp(np.asarray(self._logpdf(np.atleast_1d(u)), float) - self._peak).reshape(u.shape) / self._mass

    def quantile(self, alpha):
        """Inverse of :meth:`cdf_at`, by monotone interpolation then root polishing."""
        if np.ndim(alpha):
            return np.array([self.quantile(float(a)) for a in np.ravel(alpha)]).reshape(np.shape(alpha))
        if not 0.0 < alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")
        ug, cdf = self._ugrid, self.cdf
        i = int(np.searchsorted(cdf, alpha, side="left")) - 1
        i = min(max(i, 0), len(ug) - 2)
        while i > 0 and cdf[i] > alpha:
            i -= 1
        while i < len(ug) - 2 and cdf[i + 1] < alpha:
            i += 1
        a, b = ug[i], ug[i + 1]
        span = cdf[i + 1] - cdf[i]
        if span <= 0:
            return float(self._from_u(a))
        u = brentq(lambda v: cdf[i] + self._partial(i, v) - alpha, a, b,
                   xtol=1e-13 * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps)
        return float(self._from_u(u))

    def interpolant(self):
        """Monotone (PCHIP) interpolant of the tabulated CDF in the parameter scale."""
        return PchipInterpolator(self.grid, self.cdf)


def tabulate(logpdf, center, scale, *, lower=-math.inf, upper=math.inf, meta=None,
             to_u=_identity, from_u=_identity):
    """Tabulate a posterior given its unnormalised log density in ``u``."""
    sup = find_support(logpdf, center, scale, lower, upper)
    edges = sup.probes
    vals = _panel_integrals(logpdf, edges, sup.peak)
    mass = float(np.sum(vals))
    if not (mass > 0 and math.isfinite(mass)):
        raise DivergedPosteriorError("posterior normaliser is not positive and finite")
    cdf = np.concatenate([[0.0], np.cumsum(vals)]) / mass
    cdf[-1] = 1.0
    grid = np.asarray(from_u(edges), float)
    return PosteriorCurve(grid=grid, cdf=cdf, meta=dict(meta or {}), _ugrid=edges,
                          _logpdf=logpdf, _peak=sup.peak, _mass=mass, _to_u=to_u,
                          _from_u=from_u)


def cdf_at_point(logpdf, x0, center, scale, *, lower=-math.inf, upper=math.inf):
    """Posterior probability below ``x0`` without building a full curve."""
    sup = find_support(logpdf, center, scale, lower, upper)
    if x0 <= sup.lo:
        return 0.0
    if x0 >= sup.hi:
        return 1.0
    edges = sup.probes
    k = int(np.searchsorted(edges, x0))
    left = np.concatenate([edges[:k], [x0]])
    right = np.concatenate([[x0], edges[k:]])
    left = left[np.concatenate([[True], np.diff(left) > 0])]
    right = right[np.concatenate([[True], np.diff(right) > 0])]
    lv = np.sum(_panel_integrals(logpdf, left, sup.peak)) if left.size > 1 else 0.0
    rv = np.sum(_panel_integrals(logpdf, right, sup.peak)) if right.size > 1 else 0.0
    return float(lv / (lv + rv))
