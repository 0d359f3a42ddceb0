from __future__ import annotations

import json

import numpy as np
import pytest

from mellinfrac import functions as fn
from mellinfrac.difference import (
    DifferenceConfig,
    difference_semigroup_check,
    difference_symbol,
    difference_terms,
    frac_difference,
    strong_derivative_estimate,
)
from mellinfrac.errors import DomainError

X = np.array([0.5, 1.0, 2.0])


def test_integer_order_terms() -> None:
    for r in (1, 2, 3):
        coef = difference_terms(r, 1.0, 0.5, r + 10)
        assert np.count_nonzero(coef) == r + 1


def test_first_order() -> None:
    # Delta^1_h f(x) = f(x) - h^c f(hx) up to the phase convention
    f = fn.exp(-1.0)
    h, c = 0.5, 1.0
    val = frac_difference(f.f, 1.0, c, h, X)
    ref = -(f(X) - h**c * f(h * X))
    assert np.allclose(val, ref, rtol=1e-13)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_power_eigenvalue(alpha: float) -> None:
    # x^b is an eigenfunction with eigenvalue e^{i pi a} (1 - h^{c+b})^a
    c, b, h = 1.0, 1.0, 0.5
    val = frac_difference(fn.power(b).f, alpha, c, h, X)
    ref = np.exp(1j * np.pi * alpha) * (1 - h ** (c + b)) ** alpha * X**b
    assert np.allclose(val, ref, rtol=1e-9)


def test_symbol_integer() -> None:
    t = np.linspace(-3, 3, 7)
    sym = difference_symbol(2.0, 0.5, t)
    assert np.allclose(sym, (1 - 0.5 ** (-1j * t)) ** 2)


def test_semigroup() -> None:
    gap = difference_semigroup_check(fn.power(1.0).f, 0.5, 0.5, 1.0, 1 / 1.1, 1.0)
    assert gap < 1e-6
    assert difference_semigroup_check(fn.power(2.0).f, 1.0, 1.0, 0.0, 1.5, 1.0) < 1e-13
    assert difference_semigroup_check(fn.power(1.0).f, 0.5, 0.0, 1.0, 0.5, 1.0) < 1e-13


def test_strong_estimate() -> None:
    cfg = DifferenceConfig(k_range=(3, 8))
    est = strong_derivative_estimate(fn.power(1.0).f, 0.5, 1.0, X, cfg)
    ref = 2.0**0.5 * X
    gaps = [np.max(np.abs(e - ref)) for e in est.estimates]
    assert all(g1 < g0 for g0, g1 in zip(gaps, gaps[1:]))
    assert np.max(np.abs(est.final.imag)) < 1e-10
    data = json.loads(est.to_json())
    assert len(data) == len(est.h_values)
    assert {"h", "estimate_norm", "successive_diff"} <= set(data[0])


def test_config_validation() -> None:
    with pytest.raises(DomainError):
        DifferenceConfig(side="sideways")
    assert DifferenceConfig().h_sequence[0] == pytest.approx(1 - 2**-3)


if __name__ == "__main__":
    import sys

    pytest.main([__file__, *sys.argv[1:]])
