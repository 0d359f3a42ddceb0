r"""Quadrature rules shared by the transform, integral and kernel engines.

All rules return ``(nodes, weights)`` arrays. Nodes close to an endpoint are
computed from their distance to that endpoint, so that no precision is lost
when the interval is far from the origin.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre


@lru_cache(maxsize=64)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    s, w = roots_legendre(n)
    s.flags.writeable = False
    w.flags.writeable = False
    return s, w


@lru_cache(maxsize=256)
def _jacobi(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    s, w = roots_jacobi(n, 0.0, beta)
    s.flags.writeable = False
    w.flags.writeable = False
    return s, w


def gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """*n*-point Gauss-Legendre rule on :math:`[a, b]`."""
    s, w = _legendre(n)
    half = 0.5 * (b - a)
    return a + half * (1.0 + s), half * w


def composite_gauss_legendre(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule with *n* nodes on every panel between *edges*."""
    edges = np.asarray(edges, dtype=float)
    s, w = _legendre(n)
    a = edges[:-1, None]
    half = 0.5 * np.diff(edges)[:, None]
    return (a + half * (1.0 + s)).ravel(), (half * w).ravel()


def gauss_jacobi_left(width: float, alpha: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    r"""Rule for :math:`\int_0^w t^{\alpha - 1} g(t)\,dt` with smooth :math:`g`.

    The weight :math:`(1 + s)^{\alpha - 1}` on :math:`[-1, 1]` is mapped to
    :math:`[0, w]`, which scales the weights by :math:`(w / 2)^\alpha`.
    """
    s, w = _jacobi(n, float(alpha) - 1.0)
    return 0.5 * width * (1.0 + s), (0.5 * width) ** alpha * w


def tanh_sinh(a: float, b: float, level: int,
              kmax: float = 4.0) -> tuple[np.ndarray, np.ndarray]:
    r"""Double-exponential (tanh-sinh) rule on :math:`[a, b]`.

    The step is :math:`2^{-\ell}` in the transformed variable. Nodes of
    successive levels are nested, although this implementation simply
    rebuilds them.
    """
    h = 2.0 ** (-level)
    k = np.arange(-int(kmax / h), int(kmax / h) + 1)
    tau = k * h
    z = 0.5 * math.pi * np.sinh(tau)
    # distance of tanh(z) from the nearest endpoint of [-1, 1]
    ez = np.exp(-2.0 * np.abs(z))
    gap = 2.0 * ez / (1.0 + ez)
    half = 0.5 * (b - a)
    nodes = np.where(tau < 0, a + half * gap, b - half * gap)
    weights = half * h * 0.5 * math.pi * np.cosh(tau) / np.cosh(z) ** 2

    keep = (weights > 0) & (nodes > a) & (nodes < b)
    return nodes[keep], weights[keep]


def fornberg_weights(order: int, offsets: np.ndarray) -> np.ndarray:
    """Finite-difference weights for the derivative of given *order* at 0.

    Uses Fornberg's recursion on the stencil *offsets* (in units of the step).
    """
    z = np.asarray(offsets, dtype=float)
    n = z.size
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = z[0]
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = z[i]
        for j in range(i):
            c3 = z[i] - z[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2

    return c[:, order]
