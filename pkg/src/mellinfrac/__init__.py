"""Numerical fractional calculus in the Mellin frame."""

from __future__ import annotations

from mellinfrac.combinatorics import (
    StirlingTable,
    abs_binomial_sum,
    b_alpha,
    frac_binomial,
    stirling_function,
    stirling_numbers,
)
from mellinfrac.core import (
    FracOrder,
    LogGrid,
    MellinFunction,
    MellinSpectrum,
    QuadConfig,
    mellin_convolve,
    mellin_convolve_at,
    mellin_inverse,
    mellin_inverse_at,
    mellin_transform,
    mellin_translate,
    xc_norm,
)
from mellinfrac.derivative import (
    DerivativeBundle,
    hadamard_derivative,
    hadamard_derivative_series,
    stirling_series_derivative,
    theta_derivative,
)
from mellinfrac.difference import (
    DifferenceConfig,
    StrongEstimate,
    frac_difference,
    strong_derivative_estimate,
)
from mellinfrac.errors import (
    Divergent,
    DomainError,
    MellinError,
    MissingDerivative,
    NonConvergent,
    TailError,
    TruncationError,
)
from mellinfrac.integral import (
    ProbeResult,
    domain_probe,
    hadamard_integral,
    hadamard_integral_series,
    integer_iterated_integral,
)
from mellinfrac.oracle import OracleCase, oracle_eval, oracle_suite
from mellinfrac.pde import (
    KernelField,
    PdeProblem,
    diffusion_kernel,
    evolution_kernel,
    residual_check,
    solve_pde,
)

__all__ = [
    "DerivativeBundle",
    "DifferenceConfig",
    "Divergent",
    "DomainError",
    "FracOrder",
    "KernelField",
    "LogGrid",
    "MellinError",
    "MellinFunction",
    "MellinSpectrum",
    "MissingDerivative",
    "NonConvergent",
    "OracleCase",
    "PdeProblem",
    "ProbeResult",
    "QuadConfig",
    "StirlingTable",
    "StrongEstimate",
    "TailError",
    "TruncationError",
    "abs_binomial_sum",
    "b_alpha",
    "diffusion_kernel",
    "domain_probe",
    "evolution_kernel",
    "frac_binomial",
    "frac_difference",
    "hadamard_derivative",
    "hadamard_derivative_series",
    "hadamard_integral",
    "hadamard_integral_series",
    "integer_iterated_integral",
    "mellin_convolve",
    "mellin_convolve_at",
    "mellin_inverse",
    "mellin_inverse_at",
    "mellin_transform",
    "mellin_translate",
    "oracle_eval",
    "oracle_suite",
    "residual_check",
    "solve_pde",
    "stirling_function",
    "stirling_numbers",
    "stirling_series_derivative",
    "strong_derivative_estimate",
    "theta_derivative",
    "xc_norm",
]
