from __future__ import annotations

import math

import numpy as np
import pytest

from mellinfrac import functions as fn
from mellinfrac.derivative import (
    DerivativeBundle,
    hadamard_derivative,
    hadamard_derivative_series,
    stirling_series_derivative,
    theta_derivative,
)
from mellinfrac.errors import DomainError, MissingDerivative
from mellinfrac.integral import hadamard_integral

X = np.array([0.5, 1.0, 2.0])


@pytest.mark.parametrize(("c", "b", "alpha"), [(0.0, 1.0, 0.5), (1.0, 0.0, 1.3),
                                               (0.5, 2.0, 2.7)])
def test_power_eigenfunction(c: float, b: float, alpha: float) -> None:
    val = hadamard_derivative(fn.power(b).bundle, alpha, c, X)
    assert np.allclose(val, (c + b) ** alpha * X**b, rtol=1e-7)


def test_worked_examples() -> None:
    # D^{1/2}_{0+,0} x = x and D^{1/2}_{0+,2} x = sqrt(3) x
    d = hadamard_derivative(fn.power(1.0).bundle, 0.5, 0.0, 1.0)
    assert abs(d - 1.0) < 1e-9
    d = hadamard_derivative(fn.power(1.0).bundle, 0.5, 2.0, 1.0)
    assert abs(d - math.sqrt(3)) < 1e-9


def test_log() -> None:
    c, alpha = 1.0, 0.5
    val = hadamard_derivative(fn.log_k(1).bundle, alpha, c, X)
    ref = alpha * c ** (alpha - 1) + c**alpha * np.log(X)
    assert np.allclose(val, ref, rtol=1e-7)


def test_against_series() -> None:
    b = fn.exp(-1.0)
    ref = hadamard_derivative_series(b.series, 1.3, 1.0, X)
    assert np.allclose(hadamard_derivative(b.bundle, 1.3, 1.0, X), ref, rtol=1e-8)


def test_integral_of_derivative() -> None:
    b = fn.xexp()
    d = hadamard_derivative(b.bundle, 0.7, 1.0, X)
    assert np.allclose(hadamard_integral(lambda x: hadamard_derivative(b.bundle, 0.7, 1.0, x),
                                         0.7, 1.0, X), b.f(X), rtol=1e-7)
    val, gap = hadamard_derivative(b.bundle, 0.7, 1.0, X, verify=True)
    assert gap < 1e-5
    assert np.allclose(val, d)
    assert np.allclose(val, hadamard_derivative_series(b.series, 0.7, 1.0, X), rtol=1e-8)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_integer_order_is_theta(r: int) -> None:
    b = fn.exp(-1.0)
    assert np.allclose(hadamard_derivative(b.bundle, r, 1.0, X),
                       theta_derivative(b.bundle, r, 1.0, X), rtol=1e-8)


def test_theta_first_order() -> None:
    # Theta_c f = x f' + c f
    b = fn.exp(-1.0)
    ref = -X * np.exp(-X) + 0.5 * np.exp(-X)
    assert np.allclose(theta_derivative(b.bundle, 1, 0.5, X), ref, rtol=1e-13)


def test_missing_derivative() -> None:
    bundle = DerivativeBundle(fn.exp(-1.0).f, fd_fallback=False)
    with pytest.raises(MissingDerivative):
        theta_derivative(bundle, 2, 1.0, X)


def test_stirling_series() -> None:
    b = fn.exp(-1.0)
    s = stirling_series_derivative(b.bundle, 0.5, 1.0, 0.5, K=40)
    ref = hadamard_derivative_series(b.series, 0.5, 1.0, 0.5)
    assert abs(s.value - ref) < 1e-8
    assert s.last_term < 1e-8
    with pytest.raises(DomainError):
        stirling_series_derivative(b.bundle, 0.5, 0.0, 0.5, K=10)


if __name__ == "__main__":
    import sys

    pytest.main([__file__, *sys.argv[1:]])
