from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import gammaincc

from mellinfrac import functions as fn
from mellinfrac.errors import Divergent, DomainError
from mellinfrac.integral import (
    domain_probe,
    hadamard_integral,
    hadamard_integral_fn,
    hadamard_integral_series,
    integer_iterated_integral,
)

X = np.array([0.5, 1.0, 2.0])


@pytest.mark.parametrize(("c", "b", "alpha"), [(0.0, 1.0, 0.5), (1.0, 0.0, 1.3),
                                               (0.5, 2.0, 2.7), (-0.5, 1.0, 0.5)])
def test_power_eigenfunction(c: float, b: float, alpha: float) -> None:
    val = hadamard_integral(fn.power(b).f, alpha, c, X)
    assert np.allclose(val, (c + b) ** -alpha * X**b, rtol=1e-8)


def test_worked_example() -> None:
    # J^{1/2}_{0+,1} x at x = 1
    val = hadamard_integral(fn.power(1.0).f, 0.5, 1.0, 1.0)
    assert abs(val - 1 / math.sqrt(2)) < 1e-10


def test_against_series() -> None:
    b = fn.exp(-1.0)
    ref = hadamard_integral_series(b.series, 0.7, 1.0, X)
    assert np.allclose(hadamard_integral(b.f, 0.7, 1.0, X), ref, rtol=1e-9)


def test_chi_closed_form() -> None:
    # c^{-a} below 1, c^{-a} Q(a, c log x) above
    c, alpha = 1.0, 0.6
    x = np.array([0.5, 2.0, 5.0])
    ref = c**-alpha * gammaincc(alpha, c * np.log(np.maximum(x, 1.0)))
    val = hadamard_integral(fn.chi01().f, alpha, c, x)
    assert np.allclose(val, ref, rtol=1e-8)


def test_semigroup_nested() -> None:
    f = fn.power(1.0).f
    nested = hadamard_integral(hadamard_integral_fn(f, 0.5, 1.0), 1.3, 1.0, X)
    assert np.allclose(nested, hadamard_integral(f, 1.8, 1.0, X), rtol=1e-7)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_integer_iterated(r: int) -> None:
    b = fn.xexp()
    it = integer_iterated_integral(b.f, r, 1.0, X)
    assert np.allclose(it, hadamard_integral(b.f, float(r), 1.0, X), rtol=1e-8)


def test_divergent_constant() -> None:
    with pytest.raises(Divergent):
        hadamard_integral(fn.const(1.0).f, 0.5, 0.0, 1.0)


def test_domain() -> None:
    with pytest.raises(DomainError):
        hadamard_integral(fn.power(1.0).f, 0.5, 0.0, -1.0)
    with pytest.raises(DomainError):
        hadamard_integral(fn.power(1.0).f, -0.5, 0.0, 1.0)


def test_probe() -> None:
    assert domain_probe(fn.power(1.0).f, 0.5, 0.0, 1.0).convergent
    r = domain_probe(fn.const(1.0).f, 0.5, 0.0, 1.0)
    assert r.status == "Divergent"
    assert len(r.trace) >= 2


if __name__ == "__main__":
    import sys

    pytest.main([__file__, *sys.argv[1:]])
