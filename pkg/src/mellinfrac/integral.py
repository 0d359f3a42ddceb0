r"""Hadamard-type fractional integrals.

.. math::

    (J^\alpha_{0+,\mu} f)(x)
        = \frac{1}{\Gamma(\alpha)} \int_0^x \left(\frac{u}{x}\right)^\mu
            \left(\log \frac{x}{u}\right)^{\alpha - 1} f(u) \frac{du}{u}
        = \frac{1}{\Gamma(\alpha)} \int_0^\infty
            e^{-\mu t} t^{\alpha - 1} f(x e^{-t})\,dt.

The second form, obtained from :math:`t = \log(x/u)`, is the one evaluated:
the weakly singular factor becomes a Jacobi weight on the first panel and
the rest of the half-line is covered by Gauss-Legendre panels whose width
grows with :math:`t`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from scipy.integrate import cumulative_simpson

from mellinfrac.core import (
    FracOrder,
    MellinFunction,
    QuadConfig,
    as_function,
    as_order,
)
from mellinfrac.errors import Divergent, DomainError
from mellinfrac.gamma import gamma
from mellinfrac.quadrature import (
    composite_gauss_legendre,
    gauss_jacobi_left,
    gauss_legendre,
)

# beyond this t the argument x e^{-t} underflows for any reasonable x
T_CAP = 700.0
# panels per block when marching along an unbounded tail
_BLOCK = 4
# absolute floor for convergence tests; relative tests are noise near underflow
_TINY = 1.0e-280

Integrand = Callable[[np.ndarray], np.ndarray]


# {{{ panel rules


def _panel_edges(a: float, b: float, w: float) -> np.ndarray:
    """Panel edges on [a, b] with widths ``w * max(1, t / 4)``."""
    edges = [a]
    while edges[-1] < b:
        t = edges[-1]
        edges.append(min(b, t + w * max(1.0, t / 4.0)))
    return np.array(edges)


def _finite_rule(a: float, b: float, alpha: float, w: float,
                 quad: QuadConfig) -> tuple[np.ndarray, np.ndarray]:
    r"""Nodes and weights for :math:`\int_a^b t^{\alpha - 1} g(t)\,dt`."""
    nodes = []
    weights = []
    start = a
    if a == 0.0:
        first = min(w, b)
        t, wt = gauss_jacobi_left(first, alpha, quad.gj_nodes)
        nodes.append(t)
        weights.append(wt)
        start = first
    elif a < w and not float(alpha).is_integer():
        # t^{alpha - 1} is nearly singular just right of a small a: grade
        # geometrically by integrating in log t
        end = min(a + w, b)
        n = max(1, int(math.ceil(math.log(end / a) / 0.5)))
        tau, wtau = composite_gauss_legendre(
            np.linspace(math.log(a), math.log(end), n + 1), quad.gl_nodes)
        t = np.exp(tau)
        nodes.append(t)
        weights.append(wtau * t**alpha)
        start = end

    if start < b:
        t, wt = composite_gauss_legendre(_panel_edges(start, b, w), quad.gl_nodes)
        nodes.append(t)
        weights.append(wt * t ** (alpha - 1.0))

    return np.concatenate(nodes), np.concatenate(weights)


def _tail_blocks(a: float, alpha: float, w: float,
                 quad: QuadConfig) -> Iterator[tuple[np.ndarray, np.ndarray, float]]:
    """Blocks of panels marching from *a* towards infinity."""
    t0 = a
    if a == 0.0 or (a < w and not float(alpha).is_integer()):
        t, wt = _finite_rule(a, a + w, alpha, w, quad)
        t0 = a + w
        yield t, wt, t0

    while True:
        edges = [t0]
        for _ in range(_BLOCK):
            t = edges[-1]
            edges.append(t + w * max(1.0, t / 4.0))
        t, wt = composite_gauss_legendre(np.array(edges), quad.gl_nodes)
        t0 = edges[-1]
        yield t, wt * t ** (alpha - 1.0), t0


# }}}


# {{{ core integrator


@dataclass
class _Sum:
    value: np.ndarray
    l1: np.ndarray
    trace: list[tuple[float, float]] = field(default_factory=list)


def _integrate(F: Integrand, n_x: int, alpha: float, edges: list[float],
               w: float, quad: QuadConfig, t_cap: float = T_CAP) -> _Sum:
    r"""Integrate :math:`t^{\alpha - 1} F(t)` over the pieces in *edges*.

    *F* maps a 1D array of *t* nodes to an array of shape ``(n_x, len(t))``.
    The last edge may be infinite, in which case panels are added block by
    block until the contributions of the last blocks are negligible.
    """
    total = np.zeros(n_x, dtype=complex)
    l1 = np.zeros(n_x)

    for a, b in zip(edges[:-1], edges[1:]):
        if math.isfinite(b):
            t, wt = _finite_rule(a, b, alpha, w, quad)
            vals = F(t)
            total += vals @ wt
            l1 += np.abs(vals) @ np.abs(wt)
            continue

        trace = []
        quiet = 0
        for t, wt, t_end in _tail_blocks(a, alpha, w, quad):
            vals = F(t)
            block = vals @ wt
            block_l1 = np.abs(vals) @ np.abs(wt)
            total += block
            l1 += block_l1
            trace.append((t_end, float(np.max(block_l1))))

            scale = np.maximum(np.abs(total), 1.0e-4 * l1)
            negligible = bool(np.all(block_l1 <= 1.0e-3 * quad.rel_tol * scale + _TINY))
            quiet = quiet + 1 if negligible else 0
            if quiet >= 2 and t_end > 1.0:
                break
            if not np.all(np.isfinite(total)):
                raise Divergent(f"integrand is not finite near t = {t_end:.3g}",
                                evidence=trace)
            if t_end > t_cap:
                raise Divergent(
                    f"tail contributions still of size {trace[-1][1]:.3e} "
                    f"at t = {t_end:.3g}; the integral does not settle",
                    evidence=trace)

    return _Sum(total, l1)


def _refine(F: Integrand, n_x: int, alpha: float, edges: list[float],
            quad: QuadConfig) -> np.ndarray:
    """Halve the panel width until two successive rules agree."""
    w = 1.0
    coarse = _integrate(F, n_x, alpha, edges, w, quad)
    for _ in range(quad.max_levels):
        w *= 0.5
        fine = _integrate(F, n_x, alpha, edges, w, quad)
        err = np.abs(fine.value - coarse.value)
        scale = np.maximum(np.abs(fine.value), 1.0e-4 * fine.l1)
        if np.all(err <= quad.rel_tol * scale + _TINY):
            return fine.value
        coarse = fine

    raise Divergent(
        f"panel refinement did not settle: max error {float(np.max(err)):.3e}",
        evidence={"width": w, "error": float(np.max(err))})


# }}}


# {{{ hadamard_integral


def _t_edges(f: MellinFunction, x: float) -> list[float]:
    """Pieces in t = log(x/u) for a single evaluation point."""
    lo, hi = f.support
    span_lo, span_hi = f.span
    hi = min(hi, span_hi)
    lo = max(lo, span_lo)

    t_lo = max(0.0, math.log(x / hi)) if math.isfinite(hi) else 0.0
    t_hi = math.log(x / lo) if lo > 0 else math.inf
    if not t_lo < t_hi:
        return []

    cuts = {math.log(x / p) for p in f.breakpoints if 0 < p < x}
    inner = sorted(t for t in cuts if t_lo < t < t_hi)
    return [t_lo, *inner, t_hi]


def _vector_safe(f: MellinFunction, x: np.ndarray) -> bool:
    lo, hi = f.support
    span_lo, span_hi = f.span
    limit = min([hi, span_hi, *(p for p in f.breakpoints if p > 0)])
    return lo == 0.0 and span_lo == 0.0 and bool(np.all(x <= limit))


def hadamard_integral(f: MellinFunction | Integrand, order: FracOrder | float,
                      mu: float, x: np.ndarray | float,
                      quad: QuadConfig | None = None) -> np.ndarray:
    r"""Evaluate :math:`(J^\alpha_{0+,\mu} f)(x)`.

    :returns: complex values with the shape of *x*.
    :raises Divergent: when the integral does not settle, with the tail trace
        as evidence.
    """
    quad = quad or QuadConfig()
    f = as_function(f)
    alpha = as_order(order).alpha
    x_arr = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x_arr).ravel()
    if np.any(~(xs > 0)):
        raise DomainError("the Hadamard integral is evaluated at x > 0 only")

    scale = 1.0 / gamma(alpha)

    if _vector_safe(f, xs):
        logx = np.log(xs)

        def F(t: np.ndarray) -> np.ndarray:
            return np.exp(-mu * t)[None, :] * f.eval_log(logx[:, None] - t[None, :])

        out = scale * _refine(F, xs.size, alpha, [0.0, math.inf], quad)
    else:
        out = np.empty(xs.size, dtype=complex)
        for i, xi in enumerate(xs):
            edges = _t_edges(f, float(xi))
            if not edges:
                out[i] = 0.0
                continue
            lx = math.log(xi)

            def F(t: np.ndarray, lx: float = lx) -> np.ndarray:
                return (np.exp(-mu * t) * f.eval_log(lx - t))[None, :]

            out[i] = scale * _refine(F, 1, alpha, edges, quad)[0]

    out = out.reshape(x_arr.shape)
    return out[()] if out.ndim == 0 else out


def hadamard_integral_fn(f: MellinFunction | Integrand, order: FracOrder | float,
                         mu: float, quad: QuadConfig | None = None) -> MellinFunction:
    r""":math:`J^\alpha_{0+,\mu} f` as a rule-kind function."""
    f = as_function(f)

    def rule(x: np.ndarray) -> np.ndarray:
        return hadamard_integral(f, order, mu, x, quad)

    # kinks of f persist and its support edges become kinks
    lo, hi = f.support
    points = {p for p in (*f.breakpoints, lo, hi) if lo <= p < math.inf and p > 0}
    return MellinFunction.from_rule(
        rule, real=False, breakpoints=tuple(sorted(points)),
        support=(lo, math.inf), name=f"J({f.name})")


# }}}


# {{{ power series path


def _check_series(f: MellinFunction, c: float) -> None:
    if f.kind != "power_series":
        raise DomainError(f"expected a power series, got kind {f.kind!r}")
    if c < 0:
        raise DomainError(f"series rules need c >= 0: c = {c}")
    if c == 0 and f.coeffs[0] != 0:
        raise DomainError(
            "for c = 0 the constant term must vanish: "
            f"a_0 = {f.coeffs[0]} lies outside the domain")


def _series_sum(f: MellinFunction, power: float, c: float,
                x: np.ndarray | float) -> np.ndarray:
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)) or np.any(x_arr > f.radius):
        raise DomainError(f"series evaluated outside (0, {f.radius}]")

    coeffs = np.array(f.coeffs, dtype=complex)
    k = np.arange(coeffs.size, dtype=float)
    nz = coeffs != 0
    scaled = np.zeros_like(coeffs)
    scaled[nz] = coeffs[nz] * (c + k[nz]) ** power
    out = np.polynomial.polynomial.polyval(x_arr, scaled)
    return out[()] if np.ndim(out) == 0 else out


def hadamard_integral_series(f: MellinFunction, order: FracOrder | float, c: float,
                             x: np.ndarray | float) -> np.ndarray:
    r"""Term-wise :math:`J^\alpha_{0+,c} \sum a_k x^k = \sum (c + k)^{-\alpha} a_k x^k`.

    For :math:`c = 0` the constant term has to vanish.
    """
    _check_series(f, c)
    return _series_sum(f, -as_order(order).alpha, c, x)


# }}}


# {{{ iterated integer-order integral


def integer_iterated_integral(f: MellinFunction | Integrand, r: int, c: float,
                              x: np.ndarray | float,
                              quad: QuadConfig | None = None,
                              t_max: float = 60.0, n: int = 1 << 14) -> np.ndarray:
    r"""The *r*-fold iterated integral :math:`x^{-c}\int_0^x \cdots \int_0^{u_2}
    f(u_1) u_1^c \frac{du_1}{u_1} \cdots \frac{du_r}{u_r}`.

    In :math:`v = \log u` each level is the running integral
    :math:`I_k(v) = e^{-cv} \int_{-\infty}^v e^{cw} I_{k-1}(w)\,dw`, which is
    accumulated with the composite Simpson rule on a uniform grid covering
    :math:`[\log x - t_{max}, \log x]`. This shares no code with the
    Jacobi-weighted engine of :func:`hadamard_integral`.
    """
    if r < 1:
        raise DomainError(f"iteration count must be at least 1: r = {r}")
    quad = quad or QuadConfig()
    f = as_function(f)
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)):
        raise DomainError("the iterated integral is evaluated at x > 0 only")

    out = []
    for lx in np.log(np.atleast_1d(x_arr)).ravel():
        v = np.linspace(lx - t_max, lx, n + 1)
        vals = f.eval_log(v).astype(complex)
        weight = np.exp(c * (v - lx))
        for k in range(r):
            edge = abs(vals[0]) * weight[0]
            peak = float(np.max(np.abs(vals) * weight))
            if edge > 1.0e-3 * quad.rel_tol * max(peak, 1.0e-300):
                raise Divergent(
                    f"integrand at t = {t_max} is still {edge:.3e} at level {k + 1}",
                    evidence={"level": k + 1, "edge": float(edge)})
            # vals / weight restores the e^{-cv} factor relative to log x
            g = weight * vals
            vals = (cumulative_simpson(g.real, x=v, initial=0.0)
                    + 1j * cumulative_simpson(g.imag, x=v, initial=0.0)) / weight
        out.append(vals[-1])

    result = np.array(out, dtype=complex).reshape(x_arr.shape)
    return result[()] if result.ndim == 0 else result


# }}}


# {{{ domain probe


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of :func:`domain_probe`.

    *trace* lists ``(T, I(T))`` for the truncation levels that were run.
    """

    status: str
    value: float
    trace: tuple[tuple[float, float], ...]

    @property
    def convergent(self) -> bool:
        return self.status == "Convergent"


def domain_probe(f: MellinFunction | Integrand, order: FracOrder | float,
                 c: float, x: float, *,
                 growth_threshold: float = 1.5, consecutive: int = 5,
                 levels: int = 10, quad: QuadConfig | None = None) -> ProbeResult:
    r"""Heuristic check that :math:`(J^\alpha_{0+,c}|f|)(x)` is finite.

    The truncated integrals :math:`I(T_k)` over :math:`t \in [0, T_k]` with
    :math:`T_k = 2^{2^k}` are computed; a power or logarithmic divergence
    makes :math:`I(T_{k+1}) / I(T_k)` settle at a value of at least 2 on
    this doubly exponential ladder. The verdict is ``Divergent`` when
    *consecutive* ratios exceed *growth_threshold* or a value is not finite.
    This is a diagnostic: finiteness cannot be certified from samples.
    """
    quad = quad or QuadConfig()
    f = as_function(f)
    alpha = as_order(order).alpha
    if not x > 0:
        raise DomainError(f"probe point must be positive: x = {x}")
    lx = math.log(x)
    norm = 1.0 / gamma(alpha)

    def g(t: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return np.exp(-c * t) * np.abs(f.eval_log(lx - t))

    edges = _t_edges(f, x)
    if not edges:
        return ProbeResult("Convergent", 0.0, ())
    cuts = [e for e in edges[1:-1]]
    t_start, t_stop = edges[0], edges[-1]

    trace: list[tuple[float, float]] = []
    total = 0.0
    reached = t_start
    for k in range(levels):
        T = 2.0 ** (2**k)
        upper = min(T, t_stop)
        if upper > reached:
            pts = [reached, *(p for p in cuts if reached < p < upper), upper]
            for a, b in zip(pts[:-1], pts[1:]):
                total += _probe_piece(g, a, b, alpha, quad)
            reached = upper
        trace.append((T, norm * total))
        if not math.isfinite(total):
            return ProbeResult("Divergent", math.inf, tuple(trace))

    ratios = [b / a if a > 0 else math.inf
              for (_, a), (_, b) in zip(trace[:-1], trace[1:])]
    run = 0
    for ratio in ratios:
        run = run + 1 if ratio > growth_threshold else 0
        if run >= consecutive:
            return ProbeResult("Divergent", trace[-1][1], tuple(trace))

    return ProbeResult("Convergent", trace[-1][1], tuple(trace))


def _probe_piece(g: Integrand, a: float, b: float, alpha: float,
                 quad: QuadConfig) -> float:
    # geometric panels: ratio 2 away from the origin
    total = 0.0
    if a == 0.0:
        first = min(1.0, b)
        t, w = gauss_jacobi_left(first, alpha, quad.gj_nodes)
        total += float(np.sum(w * g(t)))
        a = first
    while a < b:
        nxt = min(b, max(2.0 * a, a + 1.0))
        t, w = gauss_legendre(a, nxt, quad.gl_nodes)
        with np.errstate(over="ignore", invalid="ignore"):
            total += float(np.sum(w * t ** (alpha - 1.0) * g(t)))
        a = nxt
    return total


# }}}
