"""Adaptive Gauss-Kronrod quadrature shared by every integral in the package.

The core routine, :func:`integrate_many`, integrates a batch of problems
at once: each round evaluates the 15-point Kronrod rule on every live
subinterval in a single vectorised call and bisects the ones whose
Kronrod/Gauss discrepancy exceeds their share of the tolerance.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import NumericError

# Kronrod nodes on [-1, 1]; odd positions carry the embedded 7-point Gauss rule.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_W = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_W = np.zeros(15)
_g_pos = [1, 3, 5, 7]
for _i, _w in zip(_g_pos, _WG):
    GAUSS_W[_i] = _w
    GAUSS_W[14 - _i] = _w

DEFAULT_ATOL = 1e-10
DEFAULT_RTOL = 1e-10
TAIL_TOL = 1e-12


def integrate_many(f, a, b, *, atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL,
                   max_rounds=60, max_intervals=400_000, initial_splits=1):
    """Integrate ``f`` over ``[a[k], b[k]]`` for every ``k``.

    ``f(x, owner)`` receives nodes ``x`` of shape ``(m, 15)`` and an
    integer array ``owner`` of shape ``(m,)`` naming the problem each row
    belongs to; it must return values of the same shape as ``x``.

    Returns ``(values, errors)`` arrays of length ``len(a)``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    nprob = a.size
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NumericError("integrate_many needs finite limits")

    if initial_splits > 1:
        frac = np.linspace(0.0, 1.0, initial_splits + 1)
        edges = a[:, None] + (b - a)[:, None] * frac[None, :]
        lo = edges[:, :-1].ravel()
        hi = edges[:, 1:].ravel()
        owner = np.repeat(np.arange(nprob), initial_splits)
    else:
        lo, hi, owner = a.copy(), b.copy(), np.arange(nprob)

    total_width = np.abs(b - a)
    total_width[total_width == 0] = 1.0
    done_val = np.zeros(nprob)
    done_err = np.zeros(nprob)

    for _ in range(max_rounds):
        if lo.size == 0:
            break
        if lo.size > max_intervals:
            raise NumericError(f"quadrature exceeded {max_intervals} live subintervals")
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[:, None] + half[:, None] * NODES[None, :]
        fx = np.asarray(f(x, owner), dtype=float)
        if not np.all(np.isfinite(fx)):
            raise NumericError("integrand returned non-finite values")
        kron = half * (fx @ KRONROD_W)
        err = np.abs(kron - half * (fx @ GAUSS_W))

        # running estimate per problem: finished pieces plus live ones
        est = done_val + np.bincount(owner, weights=kron, minlength=nprob)
        tol = np.maximum(atol, rtol * np.abs(est))
        share = tol[owner] * np.abs(hi - lo) / total_width[owner]
        # a piece accurate relative to itself is accepted too; this stops
        # bisection at the rounding floor of steep log-scale integrands
        ok = ((err <= share) | (err <= 0.1 * rtol * np.abs(kron))
              | (half <= 1e-15 * np.maximum(1.0, np.abs(mid))))
        done_val += np.bincount(owner[ok], weights=kron[ok], minlength=nprob)
        done_err += np.bincount(owner[ok], weights=err[ok], minlength=nprob)
        bad = ~ok
        lo, mid_b, hi, owner = lo[bad], mid[bad], hi[bad], owner[bad]
        lo = np.concatenate([lo, mid_b])
        hi = np.concatenate([mid_b, hi])
        owner = np.concatenate([owner, owner])
    else:
        if lo.size:
            raise NumericError(
                f"quadrature did not converge after {max_rounds} bisection rounds")
    return done_val, done_err


def integrate(f, a, b, *, atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL, scale=1.0,
              tail_tol=TAIL_TOL, max_doublings=60):
    """Integrate a vectorised scalar function over ``[a, b]``.

    Infinite limits are handled by integrating successive pieces of
    doubling width (starting at ``scale``) until a piece contributes less
    than ``tail_tol`` relative to the running total.
    """
    def g(x, _owner):
        return f(x)

    def finite(lo, hi):
        val, _ = integrate_many(g, [lo], [hi], atol=atol, rtol=rtol)
        return float(val[0])

    if a == b:
        return 0.0
    if a > b:
        return -integrate(f, b, a, atol=atol, rtol=rtol, scale=scale,
                          tail_tol=tail_tol, max_doublings=max_doublings)
    if math.isfinite(a) and math.isfinite(b):
        return finite(a, b)
    if math.isinf(a) and math.isinf(b):
        return (integrate(f, -math.inf, 0.0, atol=atol, rtol=rtol, scale=scale,
                          tail_tol=tail_tol, max_doublings=max_doublings)
                + integrate(f, 0.0, math.inf, atol=atol, rtol=rtol, scale=scale,
                            tail_tol=tail_tol, max_doublings=max_doublings))
    sign = 1.0 if math.isinf(b) else -1.0
    start = a if math.isinf(b) else b
    total = 0.0
    width = scale
    edge = start
    for k in range(max_doublings):
        nxt = edge + sign * width
        piece = finite(min(edge, nxt), max(edge, nxt))
        total += piece
        if k > 0 and abs(piece) <= tail_tol * max(abs(total), atol):
            return total
        edge = nxt
        width *= 2.0
    raise NumericError("tail of an infinite-range integral did not decay")


def log_integrate_many(logf, a, b, *, rtol=DEFAULT_RTOL, probes=64):
    """Return ``log`` of ``int exp(logf)`` over each ``[a[k], b[k]]``.

    A per-problem shift taken from a probe grid keeps the integrand of
    order one, so integrals far below the floating-point range survive.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    frac = (np.arange(probes) + 0.5) / probes
    xp = a[:, None] + (b - a)[:, None] * frac[None, :]
    lp = logf(xp, np.arange(a.size))
    shift = np.max(lp, axis=1)
    shift = np.where(np.isfinite(shift), shift, 0.0)

    def g(x, owner):
        with np.errstate(under="ignore"):
            return np.exp(logf(x, owner) - shift[owner][:, None])

    val, _ = integrate_many(g, a, b, atol=1e-300, rtol=rtol, initial_splits=4)
    with np.errstate(divide="ignore"):
        return np.log(val) + shift
