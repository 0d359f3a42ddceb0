from __future__ import annotations

import math

import numpy as np
import pytest

from mellinfrac import functions as fn
from mellinfrac.core import LogGrid
from mellinfrac.errors import DomainError
from mellinfrac.pde import (
    PdeProblem,
    closed_form_kernel,
    diffusion_coefficients,
    diffusion_kernel,
    evolution_kernel,
    evolution_symbol,
    residual_check,
    solve_pde,
)

GRID = LogGrid(0.25, 4.0, 41)


@pytest.mark.parametrize("alpha", [2.0, 6.0, 10.0])
def test_diffusion_rejects_alpha(alpha: float) -> None:
    with pytest.raises(DomainError, match="cos"):
        PdeProblem("diffusion", alpha, fn.log_gauss().f, GRID, (0.1,))


def test_evolution_rejects_nu() -> None:
    with pytest.raises(DomainError):
        PdeProblem("evolution", 0.5, fn.log_gauss().f, GRID, (0.1,), nu=0.5)


def test_coefficients_eighth() -> None:
    a, b, _ = diffusion_coefficients(0.5)
    assert a == pytest.approx(math.sqrt(2 + math.sqrt(2)) / 2)
    assert b == pytest.approx(math.sqrt(2 - math.sqrt(2)) / 2)


def test_heat_solution() -> None:
    # alpha = 4 is the heat equation in u = log x; Gaussians spread by 2y
    sigma, y = 0.3, 0.2
    p = PdeProblem("diffusion", 4.0, fn.log_gauss(1.0, sigma).f, GRID, (y,))
    w = solve_pde(p).values[0]
    u = np.log(GRID.points)
    var = sigma**2 + 2 * y
    ref = sigma / math.sqrt(var) * np.exp(-u * u / (2 * var))
    assert np.max(np.abs(w - ref)) < 1e-8


def test_heat_convolution_method() -> None:
    sigma, y = 0.3, 0.2
    f = fn.log_gauss(1.0, sigma).f
    spectral = solve_pde(PdeProblem("diffusion", 4.0, f, GRID, (y,)))
    conv = solve_pde(PdeProblem("diffusion", 4.0, f, GRID, (y,), method="convolution"))
    assert np.max(np.abs(spectral.values - conv.values)) < 1e-8


def test_evolution_transform_side() -> None:
    # forward-transform the sampled solution at t = 0
    nu, y = -1.0, 0.3
    grid = LogGrid(math.exp(-8.0), math.exp(30.0), 3801)
    p = PdeProblem("evolution", 0.5, fn.log_gauss(1.0, 0.4).f, grid, (y,), nu=nu)
    w = solve_pde(p).values[0]
    u = np.log(grid.points)
    got = np.trapezoid(w * np.exp(nu * u), u)
    ref = fn.log_gauss_transform(nu, 1.0, 0.4) * evolution_symbol(0.5, nu, 0.0, y)
    assert got == pytest.approx(ref.real, rel=1e-5)


def test_zero_data() -> None:
    p = PdeProblem("diffusion", 4.0, fn.const(0.0).f, GRID, (0.1, 0.2, 0.3, 0.4, 0.5))
    w = solve_pde(p)
    assert np.all(w.values == 0)
    assert residual_check(p, w).max_residual == 0


def test_heat_residual() -> None:
    # central differences in y: the residual scales like dy^2
    y = tuple(0.1 + 0.005 * k for k in range(5))
    p = PdeProblem("diffusion", 4.0, fn.log_gauss(1.0, 0.4).f, GRID, y)
    assert residual_check(p, solve_pde(p)).relative < 1e-3


def test_kernels_exact() -> None:
    x = np.exp(np.linspace(-1.5, 1.5, 13))
    g = evolution_kernel(0.5, -1.0, x, 0.5)
    assert np.max(np.abs(g.values[0] - closed_form_kernel("evolution", 0.5, x, 0.5))) < 1e-5
    for alpha in (1.0, 4.0):
        g = diffusion_kernel(alpha, x, 0.5)
        ref = closed_form_kernel("diffusion", alpha, x, 0.5)
        assert np.max(np.abs(g.values[0] - ref)) < 1e-5
    assert closed_form_kernel("diffusion", 4.0, 1.0, 1.0) == pytest.approx(
        1 / (2 * math.sqrt(math.pi)))


if __name__ == "__main__":
    import sys

    pytest.main([__file__, *sys.argv[1:]])
