r"""Mellin derivatives and the Hadamard-type fractional derivative.

The Mellin derivative :math:`\Theta_c f = x f' + c f` has the iterates

.. math::

    \Theta_c^r f(x) = \sum_{k = 0}^r S_c(r, k) x^k f^{(k)}(x)
        = \sum_{j = 0}^r \binom{r}{j} c^{r - j} \delta^j f(x),
    \qquad \delta = x \frac{d}{dx},

and the fractional derivative of order :math:`\alpha` with
:math:`m = \lfloor \alpha \rfloor + 1` is evaluated in the commuted form
:math:`D^\alpha_{0+,c} f = J^{m - \alpha}_{0+,c} \Theta_c^m f`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from mellinfrac.combinatorics import stirling_function, stirling_row
from mellinfrac.core import (
    FracOrder,
    MellinFunction,
    QuadConfig,
    as_function,
    as_order,
)
from mellinfrac.errors import DomainError, MissingDerivative
from mellinfrac.integral import _check_series, _series_sum, hadamard_integral
from mellinfrac.quadrature import fornberg_weights

ArrayFn = Callable[[np.ndarray], np.ndarray]

# finite differences in log x are only trusted up to this order
FD_MAX_ORDER = 4
# default step in log x for the 9-point stencils
FD_STEP = 0.02
_STENCIL = np.arange(-4, 5)


# {{{ finite differences in log x


@lru_cache(maxsize=16)
def _log_fd_weights(order: int) -> np.ndarray:
    return fornberg_weights(order, _STENCIL)


def log_fd(values_at: Callable[[np.ndarray], np.ndarray], order: int,
           x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    r"""Central difference approximation of :math:`\delta^j g(x)`.

    *values_at* maps an array of points to values of :math:`g` and is called
    once on the whole stencil, so that vectorized evaluators share one
    quadrature rule across the stencil.
    """
    if order > FD_MAX_ORDER:
        raise MissingDerivative(
            f"finite differences are limited to order {FD_MAX_ORDER}: got {order}")
    x = np.asarray(x, dtype=float)
    if order == 0:
        return values_at(x)

    pts = x.reshape(-1, 1) * np.exp(step * _STENCIL)[None, :]
    vals = np.asarray(values_at(pts.ravel())).reshape(pts.shape)
    out = vals @ _log_fd_weights(order) / step**order
    return out.reshape(x.shape)


@lru_cache(maxsize=32)
def _stirling_first_row(k: int) -> tuple[int, ...]:
    # coefficients of delta (delta - 1) ... (delta - k + 1) in powers of delta
    poly = [1]
    for i in range(k):
        nxt = [0] * (len(poly) + 1)
        for j, a in enumerate(poly):
            nxt[j + 1] += a
            nxt[j] -= i * a
        poly = nxt
    return tuple(poly)


# }}}


# {{{ derivative bundle


@dataclass(frozen=True, eq=False)
class DerivativeBundle:
    r"""A function together with whatever derivatives are known for it.

    Derivatives may be supplied as ordinary derivatives (*derivs* holds
    :math:`f', f'', \dots`; *nth* produces :math:`f^{(k)}` for any *k*) or as
    logarithmic derivatives :math:`\delta^j f` (*log_derivs*). Missing orders
    up to :data:`FD_MAX_ORDER` fall back to finite differences in
    :math:`\log x` when *fd_fallback* is set.
    """

    f: MellinFunction
    derivs: tuple[ArrayFn, ...] = ()
    nth: Callable[[int], ArrayFn] | None = None
    log_derivs: tuple[ArrayFn, ...] = ()
    fd_fallback: bool = True
    fd_step: float = FD_STEP

    @property
    def depth(self) -> float:
        """Highest order available analytically (``inf`` if unbounded)."""
        if self.nth is not None:
            return math.inf
        return max(len(self.derivs), len(self.log_derivs))

    def has_x_derivatives(self, k: int) -> bool:
        return self.nth is not None or k <= len(self.derivs)

    def derivative(self, k: int) -> ArrayFn:
        """Ordinary derivative :math:`f^{(k)}`."""
        if k == 0:
            return self.f
        if self.nth is not None:
            return self.nth(k)
        if k <= len(self.derivs):
            return self.derivs[k - 1]

        scaled = self.scaled(k)
        return lambda x: scaled(x) / np.asarray(x, dtype=float) ** k

    def scaled(self, k: int) -> ArrayFn:
        r""":math:`x^k f^{(k)}(x)`."""
        if k == 0:
            return self.f
        if self.has_x_derivatives(k):
            dk = self.derivative(k)
            return lambda x: np.asarray(x, dtype=float) ** k * dk(x)

        s = _stirling_first_row(k)
        logs = [self.log_derivative(j) for j in range(k + 1)]
        return lambda x: sum(s[j] * logs[j](x) for j in range(1, k + 1))

    def log_derivative(self, j: int) -> ArrayFn:
        r""":math:`\delta^j f = (x\,d/dx)^j f`."""
        if j == 0:
            return self.f
        if j <= len(self.log_derivs):
            return self.log_derivs[j - 1]
        if self.has_x_derivatives(j):
            row = stirling_row(0.0, j)
            scaled = [self.scaled(k) for k in range(j + 1)]
            return lambda x: sum(row[k] * scaled[k](x) for k in range(1, j + 1))
        if self.fd_fallback and j <= FD_MAX_ORDER:
            return lambda x: log_fd(self.f, j, x, self.fd_step)

        raise MissingDerivative(
            f"no derivative of order {j} available (depth {self.depth})")

    def check(self, points: np.ndarray | None = None, rtol: float = 1.0e-5) -> float:
        """Compare analytic derivatives with finite differences.

        Returns the largest relative discrepancy over *points* and orders up
        to ``min(depth, 4)``; raises :class:`ValueError` above *rtol*.
        """
        if points is None:
            points = np.array([0.5, 1.0, 2.0])
        top = int(min(self.depth, FD_MAX_ORDER))
        worst = 0.0
        for j in range(1, top + 1):
            exact = np.asarray(self.log_derivative(j)(points))
            approx = log_fd(self.f, j, points, self.fd_step)
            scale = np.maximum(np.abs(exact), np.max(np.abs(self.f(points))))
            worst = max(worst, float(np.max(np.abs(exact - approx) / scale)))
        if worst > rtol:
            raise ValueError(
                f"analytic derivatives disagree with finite differences: {worst:.3e}")
        return worst


def as_bundle(f: DerivativeBundle | MellinFunction | ArrayFn) -> DerivativeBundle:
    if isinstance(f, DerivativeBundle):
        return f
    return DerivativeBundle(as_function(f))


# }}}


# {{{ integer-order Mellin derivatives


def theta_function(bundle: DerivativeBundle | MellinFunction | ArrayFn,
                   r: int, c: float) -> MellinFunction:
    r""":math:`\Theta_c^r f` as a rule-kind function."""
    bundle = as_bundle(bundle)
    if r < 0:
        raise DomainError(f"Mellin derivative order must be non-negative: {r}")
    if r > bundle.depth and not (bundle.fd_fallback and r <= FD_MAX_ORDER):
        raise MissingDerivative(
            f"Theta^{r} needs derivatives up to order {r}; depth is {bundle.depth}")

    if bundle.has_x_derivatives(r):
        row = stirling_row(c, r)
        terms = [bundle.scaled(k) for k in range(r + 1)]
        coeffs = [row[k] for k in range(r + 1)]
    else:
        terms = [bundle.log_derivative(j) for j in range(r + 1)]
        coeffs = [math.comb(r, j) * c ** (r - j) for j in range(r + 1)]

    def rule(x: np.ndarray) -> np.ndarray:
        return sum(a * g(x) for a, g in zip(coeffs, terms) if a != 0)

    f = bundle.f
    return MellinFunction.from_rule(
        rule, support=f.support, breakpoints=f.breakpoints, real=f.real,
        name=f"theta^{r}({f.name})")


def theta_derivative(bundle: DerivativeBundle | MellinFunction | ArrayFn,
                     r: int, c: float, x: np.ndarray | float) -> np.ndarray:
    r"""Evaluate :math:`\Theta_c^r f(x) = \sum_k S_c(r, k) x^k f^{(k)}(x)`."""
    if r < 1:
        raise DomainError(f"Mellin derivative order must be at least 1: {r}")
    return theta_function(bundle, r, c)(x)


# }}}


# {{{ fractional derivative


def hadamard_derivative(bundle: DerivativeBundle | MellinFunction | ArrayFn,
                        order: FracOrder | float, c: float, x: np.ndarray | float,
                        quad: QuadConfig | None = None, *,
                        verify: bool = False) -> np.ndarray | tuple[np.ndarray, float]:
    r"""Evaluate :math:`(D^\alpha_{0+,c} f)(x) = J^{m - \alpha}_{0+,c}(\Theta_c^m f)(x)`.

    With *verify* set, the defining order :math:`\Theta_c^m J^{m-\alpha}_{0+,c} f`
    is also evaluated (by finite differences in :math:`\log x`) and the
    largest relative discrepancy is returned alongside the value.
    """
    bundle = as_bundle(bundle)
    order = as_order(order)
    m = order.m
    inner = theta_function(bundle, m, c)
    value = hadamard_integral(inner, m - order.alpha, c, x, quad)
    if not verify:
        return value

    other = hadamard_derivative_outer(bundle.f, order, c, x, quad,
                                      step=bundle.fd_step)
    scale = np.maximum(np.abs(value), 1.0e-300)
    return value, float(np.max(np.abs(value - other) / scale))


def hadamard_derivative_outer(f: MellinFunction | ArrayFn, order: FracOrder | float,
                              c: float, x: np.ndarray | float,
                              quad: QuadConfig | None = None,
                              step: float = FD_STEP) -> np.ndarray:
    r"""The defining order :math:`\Theta_c^m (J^{m-\alpha}_{0+,c} f)(x)`.

    The outer derivatives are central differences in :math:`\log x`; the
    integral is evaluated once on the whole stencil.
    """
    f = as_function(f)
    order = as_order(order)
    m = order.m
    if m > FD_MAX_ORDER:
        raise MissingDerivative(
            f"outer differentiation of order {m} exceeds {FD_MAX_ORDER}")

    def integral(pts: np.ndarray) -> np.ndarray:
        return hadamard_integral(f, m - order.alpha, c, pts, quad)

    x_arr = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x_arr)
    pts = xs.reshape(-1, 1) * np.exp(step * _STENCIL)[None, :]
    vals = np.asarray(integral(pts.ravel())).reshape(pts.shape)

    out = np.zeros(xs.size, dtype=complex)
    for j in range(m + 1):
        coeff = math.comb(m, j) * c ** (m - j)
        if coeff == 0:
            continue
        if j == 0:
            out += coeff * vals[:, 4]
        else:
            out += coeff * (vals @ _log_fd_weights(j)) / step**j

    out = out.reshape(x_arr.shape)
    return out[()] if out.ndim == 0 else out


def hadamard_derivative_fn(bundle: DerivativeBundle | MellinFunction | ArrayFn,
                           order: FracOrder | float, c: float,
                           quad: QuadConfig | None = None) -> MellinFunction:
    r""":math:`D^\alpha_{0+,c} f` as a rule-kind function."""
    bundle = as_bundle(bundle)

    def rule(x: np.ndarray) -> np.ndarray:
        return hadamard_derivative(bundle, order, c, x, quad)

    return MellinFunction.from_rule(rule, real=False, name=f"D({bundle.f.name})")


def hadamard_derivative_series(f: MellinFunction, order: FracOrder | float, c: float,
                               x: np.ndarray | float) -> np.ndarray:
    r"""Term-wise :math:`D^\alpha_{0+,c} \sum a_k x^k = \sum (c + k)^\alpha a_k x^k`."""
    _check_series(f, c)
    return _series_sum(f, as_order(order).alpha, c, x)


# }}}


# {{{ Stirling function series


@dataclass(frozen=True)
class SeriesValue:
    """Partial sum of a series with the magnitude of its last term."""

    value: complex
    last_term: float
    terms: int


def stirling_series_derivative(bundle: DerivativeBundle | MellinFunction | ArrayFn,
                               alpha: float, c: float, x: float, K: int,
                               integral: bool = False) -> SeriesValue:
    r"""Partial sum :math:`\sum_{k=0}^K S_c(\pm\alpha, k) x^k f^{(k)}(x)`.

    The plus sign gives :math:`D^\alpha_{0+,c} f`, the minus sign (with
    *integral* set) gives :math:`J^\alpha_{0+,c} f`. The magnitude of the last
    term is reported as a proxy for the truncation error.
    """
    bundle = as_bundle(bundle)
    if not c > 0:
        raise DomainError(f"the Stirling series needs c > 0: c = {c}")
    if K < 0:
        raise DomainError(f"truncation index must be non-negative: K = {K}")
    if K > bundle.depth and not (bundle.fd_fallback and K <= FD_MAX_ORDER):
        raise MissingDerivative(f"series needs {K} derivatives; depth is {bundle.depth}")

    order = -alpha if integral else alpha
    total = 0.0 + 0.0j
    last = 0.0
    for k in range(K + 1):
        term = stirling_function(c, order, k) * complex(bundle.scaled(k)(x))
        total += term
        last = abs(term)

    return SeriesValue(total, last, K + 1)


# }}}
