import math

import numpy as np
import pytest

from selbayes.errors import NumericError
from selbayes.quadrature import integrate, integrate_many, log_integrate_many


def test_batch_of_polynomials():
    a = np.array([0.0, -1.0, 2.0])
    b = np.array([1.0, 1.0, 5.0])
    vals, errs = integrate_many(lambda x, _o: x ** 3, a, b)
    np.testing.assert_allclose(vals, (b ** 4 - a ** 4) / 4, rtol=1e-13, atol=1e-14)
    assert np.all(errs >= 0)


def test_owner_indexing():
    k = np.array([1.0, 2.0, 3.0])
    vals, _ = integrate_many(lambda x, o: np.cos(k[o][:, None] * x), np.zeros(3), np.full(3, math.pi / 2))
    np.testing.assert_allclose(vals, np.sin(k * math.pi / 2) / k, atol=1e-12)


def test_peaked_integrand():
    val = integrate(lambda x: 1.0 / (1e-4 + x * x), -1.0, 1.0, rtol=1e-12)
    assert val == pytest.approx(2 * math.atan(100.0) / 1e-2, rel=1e-10)


@pytest.mark.parametrize("a,b,ref", [
    (-math.inf, math.inf, math.sqrt(math.pi)),
    (0.0, math.inf, math.sqrt(math.pi) / 2),
    (-math.inf, 0.0, math.sqrt(math.pi) / 2),
])
def test_infinite_limits(a, b, ref):
    assert integrate(lambda x: np.exp(-x * x), a, b) == pytest.approx(ref, rel=1e-11)


def test_reversed_limits_change_sign():
    assert integrate(np.sin, 1.0, 0.0) == pytest.approx(-(1 - math.cos(1.0)), rel=1e-12)


def test_log_integrate_far_below_underflow():
    logf = lambda x, _o: -2000.0 - 0.5 * x * x
    got = log_integrate_many(logf, [-40.0], [40.0])[0]
    assert got == pytest.approx(-2000.0 + 0.5 * math.log(2 * math.pi), rel=1e-12)


def test_nonfinite_integrand_raises():
    with pytest.raises(NumericError):
        integrate_many(lambda x, _o: np.full_like(x, np.nan), [0.0], [1.0])


def test_nonconvergence_raises():
    with pytest.raises(NumericError):
        integrate_many(lambda x, _o: np.sign(np.sin(1e4 * x)), [0.0], [1.0], max_rounds=3,
                       rtol=1e-14, atol=1e-16)
