r"""Lanczos approximation of the Gamma function for real and complex arguments.

Uses the :math:`g = 7, n = 9` coefficient set, which gives a relative error
below ``1e-13`` on :math:`(0, 30]` and along vertical lines of moderate height.
The reflection formula covers :math:`\operatorname{Re} z < 1/2`.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

_G = 7.0
_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_complex(z: complex) -> complex:
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * _lanczos_complex(1.0 - z))

    z = z - 1.0
    a = _COEFFS[0]
    t = z + _G + 0.5
    for i in range(1, len(_COEFFS)):
        a += _COEFFS[i] / (z + i)

    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * a


def _lanczos_real(x: float) -> float:
    if x < 0.5:
        s = math.sin(math.pi * x)
        if s == 0.0:
            raise ValueError(f"Gamma has a pole at {x}")
        return math.pi / (s * _lanczos_real(1.0 - x))

    x = x - 1.0
    a = _COEFFS[0]
    t = x + _G + 0.5
    for i in range(1, len(_COEFFS)):
        a += _COEFFS[i] / (x + i)

    # split the power to delay overflow for arguments close to 171
    half = t ** ((x + 0.5) / 2.0)
    return math.sqrt(2.0 * math.pi) * half * (half * math.exp(-t)) * a


def gamma(z: complex | float) -> complex | float:
    """Evaluate :math:`\\Gamma(z)`; real input gives a real result."""
    if isinstance(z, complex):
        return _lanczos_complex(z)
    x = float(z)
    if x == math.floor(x) and x <= 0:
        raise ValueError(f"Gamma has a pole at {x}")
    return _lanczos_real(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma, with zeros at the non-positive integers."""
    x = float(x)
    if x == math.floor(x) and x <= 0:
        return 0.0
    return 1.0 / _lanczos_real(x)


def gamma_array(z: np.ndarray) -> np.ndarray:
    """Elementwise :func:`gamma` over an array (complex or real)."""
    z = np.asarray(z)
    out = np.empty(z.shape, dtype=complex if np.iscomplexobj(z) else float)
    for idx, val in np.ndenumerate(z):
        out[idx] = gamma(complex(val) if np.iscomplexobj(z) else float(val))
    return out
