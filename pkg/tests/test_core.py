from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma as sgamma

from mellinfrac.core import (
    FracOrder,
    LogGrid,
    MellinFunction,
    MellinSpectrum,
    mellin_convolve_at,
    mellin_inverse_at,
    mellin_transform,
    mellin_translate,
    xc_norm,
)
from mellinfrac.errors import DomainError, TailError
from mellinfrac.functions import chi01, exp, log_gauss, log_gauss_transform
from mellinfrac.gamma import gamma


def test_log_grid() -> None:
    g = LogGrid(0.5, 8.0, 5)
    assert g.points[0] == 0.5 and g.points[-1] == 8.0
    assert np.allclose(np.diff(np.log(g.points)), g.h_log)
    with pytest.raises(DomainError):
        LogGrid(2.0, 1.0, 4)
    with pytest.raises(DomainError):
        LogGrid(0.0, 1.0, 4)


def test_frac_order() -> None:
    assert FracOrder(0.5).m == 1
    assert FracOrder(2.0).m == 3
    assert FracOrder(1.0 + 1e-14).is_integer
    with pytest.raises(DomainError):
        FracOrder(-1.0)


def test_lanczos_gamma() -> None:
    z = np.array([0.5, 1.0 + 1.0j, 3.7 - 2.0j, 10.0 + 5.0j])
    assert np.allclose([gamma(v) for v in z], sgamma(z), rtol=1e-13)
    assert gamma(1 + 1j) == pytest.approx(0.498015668 - 0.154949828j, abs=1e-9)


# {{{ transform


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_transform_exp(nu: float) -> None:
    t = np.linspace(-10, 10, 21)
    spec = mellin_transform(exp(-1.0).f, nu, t)
    assert np.max(np.abs(spec.values - sgamma(nu + 1j * t))) < 1e-8


def test_transform_chi() -> None:
    t = np.linspace(-10, 10, 21)
    spec = mellin_transform(chi01().f, 1.0, t)
    assert np.max(np.abs(spec.values - 1 / (1 + 1j * t))) < 1e-8


def test_transform_conjugate_symmetry() -> None:
    t = np.linspace(-5, 5, 11)
    v = mellin_transform(log_gauss(1.5, 0.4).f, 0.3, t).values
    assert np.allclose(v, np.conj(v[::-1]), atol=1e-12)


def test_inverse_round_trip() -> None:
    t = np.linspace(-60, 60, 2401)
    spec = mellin_transform(exp(-1.0).f, 1.0, t)
    x = np.array([0.5, 1.0, 3.0])
    assert np.max(np.abs(mellin_inverse_at(spec, x) - np.exp(-x))) < 1e-8


def test_inverse_tail_error() -> None:
    t = np.linspace(-2, 2, 41)
    spec = MellinSpectrum(nu=1.0, t_values=t, values=np.ones_like(t, dtype=complex))
    with pytest.raises(TailError):
        mellin_inverse_at(spec, 1.0)


# }}}


# {{{ translation and convolution


@settings(max_examples=20, deadline=None)
@given(h1=st.floats(0.2, 5.0), h2=st.floats(0.2, 5.0), c=st.floats(-1.0, 2.0),
       x=st.floats(0.1, 10.0))
def test_translation_composition(h1: float, h2: float, c: float, x: float) -> None:
    f = MellinFunction.from_rule(lambda v: np.exp(-v) * v)
    lhs = mellin_translate(mellin_translate(f, h1, c), h2, c)(x)
    rhs = mellin_translate(f, h1 * h2, c)(x)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_translation_symbol() -> None:
    # M[tau_h^c f](c + it) = h^{-it} M[f](c + it)
    f = log_gauss(1.0, 0.5).f
    t = np.linspace(-4, 4, 9)
    h, c = 1.7, 0.5
    lhs = mellin_transform(mellin_translate(f, h, c), c, t).values
    rhs = h ** (-1j * t) * log_gauss_transform(c + 1j * t, 1.0, 0.5)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_convolution_theorem() -> None:
    f = log_gauss(1.0, 0.5).f
    g = log_gauss(2.0, 0.3).f
    t = np.linspace(-3, 3, 7)
    conv = MellinFunction.from_rule(lambda x: mellin_convolve_at(f, g, x))
    lhs = mellin_transform(conv, 0.2, t).values
    rhs = log_gauss_transform(0.2 + 1j * t, 1.0, 0.5) * log_gauss_transform(0.2 + 1j * t, 2.0, 0.3)
    assert np.max(np.abs(lhs - rhs)) < 1e-7


def test_convolution_chi() -> None:
    chi = chi01().f
    assert mellin_convolve_at(chi, chi, 0.5) == pytest.approx(math.log(2), rel=1e-10)
    assert abs(mellin_convolve_at(chi, chi, 1.5)) < 1e-12


def test_xc_norm() -> None:
    # int x^{c-1} e^{-x} dx = Gamma(c)
    assert xc_norm(exp(-1.0).f, 2.5) == pytest.approx(math.gamma(2.5), rel=1e-9)


# }}}


if __name__ == "__main__":
    import sys

    pytest.main([__file__, *sys.argv[1:]])
