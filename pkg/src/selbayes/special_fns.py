"""Numerically stable scalar kernels.

Everything here accepts scalars or numpy arrays and returns the same
shape (a Python float for scalar input).  Non-finite arguments raise
:class:`~selbayes.errors.DomainError` instead of propagating NaN.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import special as sc

from .errors import DomainError

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
SQRT_HALF_PI = math.sqrt(0.5 * math.pi)

# Below this point log Phi switches to the Mills-ratio continued fraction.
TAIL_SWITCH = -8.0
_CF_DEPTH = 80


class HazardPair(NamedTuple):
    """First two derivatives of ``log Phi`` at a point."""

    h1: float
    h2: float


def _as_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return arr


def _out(arr):
    if np.ndim(arr) == 0:
        return float(arr)
    return arr


def _mills_cf(z):
    """Return ``(R, tail)`` for z >= 8 via Laplace's continued fraction.

    ``R(z) = Phi(-z)/phi(z) = 1/(z + 1/(z + 2/(z + 3/...)))`` and
    ``tail`` is the second convergent denominator, so that
    ``1/R = z + 1/tail``.
    """
    f = np.array(z, dtype=float, copy=True)
    for k in range(_CF_DEPTH, 1, -1):
        f = z + k / f
    tail = f
    return 1.0 / (z + 1.0 / tail), tail


def mills_ratio(x):
    """Mills ratio ``Phi(-x)/phi(x)``, stable for large positive ``x``."""
    x = _as_array(x)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        out = np.where(x >= 0, SQRT_HALF_PI * sc.erfcx(np.abs(x) / math.sqrt(2.0)),
                       sc.ndtr(-x) / norm_pdf(x))
    return _out(out)


def log_mills_ratio(x):
    """``log(Phi(-x)/phi(x))`` for any finite ``x``."""
    x = _as_array(x)
    out = np.empty_like(x)
    pos = x >= 0
    if np.any(pos):
        out[pos] = np.log(SQRT_HALF_PI * sc.erfcx(x[pos] / math.sqrt(2.0)))
    if np.any(~pos):
        xn = x[~pos]
        out[~pos] = norm_logcdf(-xn) - norm_logpdf(xn)
    return _out(out)


def norm_pdf(x):
    x = _as_array(x)
    return _out(np.exp(-0.5 * x * x - LOG_SQRT_2PI))


def norm_logpdf(x):
    x = _as_array(x)
    return _out(-0.5 * x * x - LOG_SQRT_2PI)


def norm_cdf(x):
    """Standard normal distribution function."""
    x = _as_array(x)
    return _out(sc.ndtr(x))


def norm_sf(x):
    x = _as_array(x)
    return _out(sc.ndtr(-x))


def norm_logcdf(x):
    """``log Phi(x)``; uses the continued fraction for ``x <= -8``."""
    x = _as_array(x)
    out = np.empty_like(x)
    lo = x <= TAIL_SWITCH
    mid = (~lo) & (x <= 0.0)
    hi = x > 0.0
    if np.any(lo):
        z = -x[lo]
        r, _ = _mills_cf(z)
        out[lo] = -0.5 * z * z - LOG_SQRT_2PI + np.log(r)
    if np.any(mid):
        out[mid] = np.log(sc.ndtr(x[mid]))
    if np.any(hi):
        out[hi] = np.log1p(-sc.ndtr(-x[hi]))
    return _out(out)


def norm_logsf(x):
    return norm_logcdf(-_as_array(x))


def norm_ppf(p):
    p = _as_array(p, "p")
    if np.any((p <= 0.0) | (p >= 1.0)):
        raise DomainError("probability must lie in (0, 1)")
    return _out(sc.ndtri(p))


def h1(x):
    """``d/dx log Phi(x) = phi(x)/Phi(x)``."""
    x = _as_array(x)
    out = np.empty_like(x)
    lo = x <= TAIL_SWITCH
    if np.any(lo):
        z = -x[lo]
        _, tail = _mills_cf(z)
        out[lo] = z + 1.0 / tail
    rest = ~lo
    if np.any(rest):
        xr = x[rest]
        out[rest] = np.exp(norm_logpdf(xr) - norm_logcdf(xr))
    return _out(out)


def log_h1(x):
    """``log h1(x)``; finite even where ``h1`` itself underflows."""
    x = _as_array(x)
    out = np.empty_like(x)
    lo = x <= TAIL_SWITCH
    if np.any(lo):
        z = -x[lo]
        _, tail = _mills_cf(z)
        out[lo] = np.log(z + 1.0 / tail)
    rest = ~lo
    if np.any(rest):
        xr = x[rest]
        out[rest] = norm_logpdf(xr) - norm_logcdf(xr)
    return _out(out)


def h2(x):
    """``d^2/dx^2 log Phi(x) = -x h1(x) - h1(x)^2``."""
    x = _as_array(x)
    out = np.empty_like(x)
    lo = x <= TAIL_SWITCH
    if np.any(lo):
        z = -x[lo]
        _, tail = _mills_cf(z)
        g = z + 1.0 / tail
        # x + h1 = 1/tail exactly in the continued fraction.
        out[lo] = -g / tail
    rest = ~lo
    if np.any(rest):
        xr = x[rest]
        g = np.exp(norm_logpdf(xr) - norm_logcdf(xr))
        out[rest] = -g * (xr + g)
    return _out(out)


def hazard_pair(x) -> HazardPair:
    """Return ``(h1(x), h2(x))`` for a scalar ``x``."""
    x = float(_as_array(x))
    return HazardPair(h1(x), h2(x))


def owen_linear_antiderivative(x, a, b):
    """Antiderivative of ``x phi(x) Phi(a + b x)`` in ``x``.

    ``F = (b/d) phi(a/d) Phi(d x + a b/d) - phi(x) Phi(a + b x)`` with
    ``d = sqrt(1 + b^2)``.
    """
    x = _as_array(x)
    a = _as_array(a, "a")
    b = _as_array(b, "b")
    d = np.sqrt(1.0 + b * b)
    first = (b / d) * norm_pdf(a / d) * sc.ndtr(d * x + a * b / d)
    return _out(first - norm_pdf(x) * sc.ndtr(a + b * x))


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        arr = _as_array(value, name)
        if np.any(arr <= 0.0):
            raise DomainError(f"{name} must be positive, got {value!r}")


def regularized_gamma_cdf(shape, rate, x):
    """``P(G <= x)`` for ``G ~ Gamma(shape, rate)``."""
    _check_positive(shape=shape, rate=rate, x=x)
    return _out(sc.gammainc(np.asarray(shape, float), np.asarray(rate, float) * np.asarray(x, float)))


def log_regularized_gamma_cdf(shape, rate, x):
    """Log of :func:`regularized_gamma_cdf`, accurate when the CDF underflows."""
    _check_positive(shape=shape, rate=rate, x=x)
    a, z = np.broadcast_arrays(np.asarray(shape, float), np.asarray(rate, float) * np.asarray(x, float))
    p = sc.gammainc(a, z)
    with np.errstate(divide="ignore"):
        out = np.log(p)
    small = p < 1e-280
    if np.any(small):
        aa, zz = a[small], z[small]
        # P(a, z) = z^a e^-z / Gamma(a+1) * sum_k z^k / ((a+1)...(a+k))
        term = np.ones_like(zz)
        total = np.ones_like(zz)
        for k in range(1, 400):
            term = term * zz / (aa + k)
            total = total + term
            if np.all(term < 1e-17 * total):
                break
        out[small] = aa * np.log(zz) - zz - sc.gammaln(aa + 1.0) + np.log(total)
    return _out(out)


def inverse_gaussian_cdf(mean, shape, x):
    """Distribution function of the inverse Gaussian law ``IG(mean, shape)``.

    The ``exp(2 shape/mean)`` factor is folded into a Mills ratio, so the
    evaluation never overflows.
    """
    _check_positive(mean=mean, shape=shape, x=x)
    mean, shape, x = np.broadcast_arrays(*(np.asarray(v, float) for v in (mean, shape, x)))
    r = np.sqrt(shape / x)
    v = r * (x / mean - 1.0)
    u = r * (x / mean + 1.0)
    return _out(sc.ndtr(v) + norm_pdf(v) * mills_ratio(u))


def inverse_gaussian_logsf(mean, shape, x):
    """``log(1 - F)`` for the inverse Gaussian law, stable in the upper tail."""
    _check_positive(mean=mean, shape=shape, x=x)
    mean, shape, x = np.broadcast_arrays(*(np.asarray(v, float) for v in (mean, shape, x)))
    r = np.sqrt(shape / x)
    v = r * (x / mean - 1.0)
    u = r * (x / mean + 1.0)
    out = np.empty_like(v)
    pos = v > 0
    if np.any(pos):
        diff = mills_ratio(v[pos]) - mills_ratio(u[pos])
        out[pos] = norm_logpdf(v[pos]) + np.log(diff)
    if np.any(~pos):
        vn, un = v[~pos], u[~pos]
        out[~pos] = np.log(sc.ndtr(-vn) - norm_pdf(vn) * mills_ratio(un))
    return _out(out)
