from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import binom

from mellinfrac.combinatorics import (
    abs_binomial_sum,
    b_alpha,
    frac_binomial,
    frac_binomial_sequence,
    stirling_function,
    stirling_numbers,
)
from mellinfrac.errors import DomainError

# {{{ binomials


@pytest.mark.parametrize("alpha", [0.5, 1.3, 2.7, 3.0])
def test_frac_binomial_matches_scipy(alpha: float) -> None:
    j = np.arange(60)
    ref = binom(alpha, j)
    seq = frac_binomial_sequence(alpha, j.size)
    assert np.allclose(seq, ref, rtol=1e-12, atol=1e-300)
    assert all(math.isclose(frac_binomial(alpha, int(k)), r, rel_tol=1e-12, abs_tol=1e-300)
               for k, r in zip(j[:20], ref[:20]))


def test_frac_binomial_decay() -> None:
    # |binom(alpha, j)| ~ j^(-alpha-1) / |Gamma(-alpha)|
    alpha = 0.5
    j = 10_000
    ref = j ** (-alpha - 1) / abs(math.gamma(-alpha))
    assert math.isclose(abs(frac_binomial(alpha, j)), ref, rel_tol=1e-3)


def test_frac_binomial_continuation() -> None:
    full = frac_binomial_sequence(1.7, 40)
    tail = frac_binomial_sequence(1.7, 20, start=20, first=full[20])
    assert np.allclose(tail, full[20:], rtol=1e-13)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_abs_binomial_sum(alpha: float) -> None:
    # equals 2 for 0 < alpha < 1 (alternating tail sums to 1)
    total = abs_binomial_sum(alpha, rtol=1e-12)
    if alpha < 1:
        assert math.isclose(total, 2.0, rel_tol=1e-9)
    else:
        j = np.arange(200_000)
        assert math.isclose(total, float(np.sum(np.abs(binom(alpha, j)))), rel_tol=1e-6)


# }}}


# {{{ stirling


def test_stirling_classical() -> None:
    table = stirling_numbers(0.0, 6)
    assert table(3, 2) == 3
    assert table(4, 2) == 7
    assert table.row(5) == (0, 1, 15, 25, 10, 1)


@settings(max_examples=30, deadline=None)
@given(c=st.floats(-2.0, 3.0), r=st.integers(1, 10))
def test_stirling_recursion(c: float, r: int) -> None:
    table = stirling_numbers(c, r)
    assert table(r, 0) == pytest.approx(c**r)
    assert table(r, r) == 1
    for k in range(1, r):
        assert table(r, k) == pytest.approx(table(r - 1, k - 1) + (c + k) * table(r - 1, k))


@pytest.mark.parametrize("c", [0.0, 0.5, 2.0])
def test_stirling_function_integer_order(c: float) -> None:
    table = stirling_numbers(c, 12)
    for r in range(13):
        for k in range(r + 1):
            assert stirling_function(c, float(r), k) == pytest.approx(table(r, k), rel=1e-9)
        # vanishes above the diagonal
        assert abs(stirling_function(c, float(r), r + 1)) < 1e-9 * max(1.0, c**r)


def test_stirling_function_domain() -> None:
    with pytest.raises(DomainError):
        stirling_function(-1.5, 0.5, 1)
    with pytest.raises(DomainError):
        stirling_function(0.0, 0.5, 1)


def test_b_alpha() -> None:
    assert b_alpha(0.5, 3, 3) == 1.0
    assert b_alpha(0.5, 3, 1) == pytest.approx(math.gamma(2.5) / math.gamma(0.5))
    with pytest.raises(DomainError):
        b_alpha(0.5, 1, 2)


# }}}


if __name__ == "__main__":
    import sys

    pytest.main([__file__, *sys.argv[1:]])
