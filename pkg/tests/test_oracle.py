from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from mellinfrac import functions as fn
from mellinfrac.combinatorics import stirling_function
from mellinfrac.errors import DomainError
from mellinfrac.integral import hadamard_integral
from mellinfrac.oracle import OracleCase, oracle_eval, oracle_suite, read_golden, write_golden

GOLDEN = Path(__file__).parent / "golden" / "oracle_suite.csv"


def test_worked_examples() -> None:
    assert oracle_eval(OracleCase("power", "J", 0.5, 1.0, 1.0)) == pytest.approx(
        1 / math.sqrt(2), rel=1e-15)
    assert oracle_eval(OracleCase("log_k", "D", 0.5, 1.0, math.e, k=1)) == pytest.approx(
        1.5, rel=1e-15)
    assert oracle_eval(OracleCase("log_k", "J", 1.0, 1.0, 1.0, k=1)) == pytest.approx(
        -1.0, rel=1e-15)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_log_antiderivative(c: float) -> None:
    # x^{-c} int_0^x u^{c-1} log u du = log x / c - 1 / c^2
    for x in (0.3, 1.0, 4.0):
        ref = math.log(x) / c - 1 / c**2
        assert oracle_eval(OracleCase("log_k", "J", 1.0, c, x, k=1)) == pytest.approx(ref)


@pytest.mark.parametrize("alpha", [0.5, 1.3])
def test_exp_stirling_form(alpha: float) -> None:
    # e^{bx} sum_k S_c(alpha, k) (bx)^k
    c, b, x = 1.0, -1.0, 0.5
    ref = math.exp(b * x) * sum(stirling_function(c, alpha, k) * (b * x) ** k
                                for k in range(40))
    assert oracle_eval(OracleCase("exp", "D", alpha, c, x, b=b)) == pytest.approx(ref, rel=1e-8)


def test_exp_integer_integral() -> None:
    # J^1_{0+,1} e^{-x} = (1 - e^{-x}) / x
    x = 1.7
    assert oracle_eval(OracleCase("exp", "J", 1.0, 1.0, x, b=-1.0)) == pytest.approx(
        (1 - math.exp(-x)) / x, rel=1e-12)


def test_power_derivative() -> None:
    case = OracleCase("power", "D", 2.7, 0.5, 2.0, b=2.0)
    assert oracle_eval(case) == pytest.approx(2.5**2.7 * 4.0, rel=1e-14)


def test_case_validation() -> None:
    with pytest.raises(DomainError):
        OracleCase("power", "J", 0.5, -1.0, 1.0, b=1.0)
    with pytest.raises(DomainError):
        OracleCase("exp", "J", 0.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        OracleCase("bessel", "J", 0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        OracleCase("power", "K", 0.5, 1.0, 1.0)


def test_suite_matches_golden(tmp_path: Path) -> None:
    suite = oracle_suite()
    assert len(suite) == 120
    golden = read_golden(GOLDEN)
    assert [c for c, _ in golden] == [c for c, _ in suite]
    assert np.allclose([v for _, v in golden], [v for _, v in suite], rtol=1e-15, atol=0)

    out = tmp_path / "suite.csv"
    write_golden(out, suite)
    assert out.read_bytes() == GOLDEN.read_bytes()


def test_engine_spot_check() -> None:
    # a handful of golden rows against the quadrature engine
    for case, ref in read_golden(GOLDEN)[:: 17]:
        if case.op != "J":
            continue
        b = {"power": fn.power(case.b), "log_k": fn.log_k(case.k), "exp": fn.exp(case.b),
             "sinc": fn.sinc()}[case.family]
        val = hadamard_integral(b.f, case.alpha, case.c, case.x)
        assert abs(val - ref) <= 1e-7 * max(abs(ref), 1e-6)


if __name__ == "__main__":
    import sys

    pytest.main([__file__, *sys.argv[1:]])
