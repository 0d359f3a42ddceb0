r"""Grids, function representations and the Mellin transform machinery.

Every integral over :math:`(0, \infty)` against the measure :math:`du/u` is
evaluated in the logarithmic variable :math:`u = \log x`, where the Mellin
transform

.. math::

    \mathcal{M}[f](\nu + i t) = \int_0^\infty x^{\nu + i t - 1} f(x)\,dx
        = \int_{-\infty}^{\infty} e^{(\nu + i t) u} f(e^u)\,du

becomes a Fourier-type integral and dilations become shifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from mellinfrac.errors import DomainError, NonConvergent, TailError
from mellinfrac.quadrature import tanh_sinh

ArrayFn = Callable[[np.ndarray], np.ndarray]

# relative slack when testing whether a point lies inside a sampled span
_SPAN_SLACK = 1.0e-12
# the phase matrix is built in chunks of at most this many entries
_CHUNK = 1 << 22
# exp(u) stays a normal double for |u| below this
_LOG_LIMIT = 708.0
# integrand samples below this fraction of the peak are treated as zero
_NEGLIGIBLE = 1.0e-20


# {{{ grids and orders


@dataclass(frozen=True)
class LogGrid:
    """Log-uniform grid on :math:`[x_{min}, x_{max}]`."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self) -> None:
        if not (self.x_min > 0 and self.x_max > 0):
            raise DomainError(f"grid bounds must be positive: {self.x_min}, {self.x_max}")
        if not self.x_min < self.x_max:
            raise DomainError(f"x_min must be below x_max: {self.x_min} >= {self.x_max}")
        if self.n < 2:
            raise DomainError(f"grid needs at least 2 points: n = {self.n}")

    @classmethod
    def from_log(cls, u_min: float, u_max: float, n: int) -> LogGrid:
        return cls(math.exp(u_min), math.exp(u_max), n)

    @property
    def h_log(self) -> float:
        return (math.log(self.x_max) - math.log(self.x_min)) / (self.n - 1)

    @cached_property
    def log_points(self) -> np.ndarray:
        return np.linspace(math.log(self.x_min), math.log(self.x_max), self.n)

    @cached_property
    def points(self) -> np.ndarray:
        x = np.exp(self.log_points)
        x[0] = self.x_min
        x[-1] = self.x_max
        return x


@dataclass(frozen=True)
class FracOrder:
    r"""Fractional order :math:`\alpha > 0` with :math:`m = \lfloor \alpha \rfloor + 1`.

    Orders within ``1e-12`` of an integer are snapped to it, so that the
    integer case flows through the same code with :math:`m = \alpha + 1`.
    """

    alpha: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise DomainError(f"order must be positive: alpha = {self.alpha}")
        nearest = round(self.alpha)
        if abs(self.alpha - nearest) <= 1.0e-12 and nearest > 0:
            object.__setattr__(self, "alpha", float(nearest))

    @property
    def m(self) -> int:
        return int(math.floor(self.alpha)) + 1

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer()


def as_order(alpha: float | FracOrder) -> FracOrder:
    return alpha if isinstance(alpha, FracOrder) else FracOrder(float(alpha))


# }}}


# {{{ function representations


@dataclass(frozen=True, eq=False)
class MellinFunction:
    r"""A function of :math:`x > 0` given by a rule, a power series or samples.

    *support* is the closed interval outside of which the function is known to
    vanish, and *breakpoints* lists interior points where it (or one of its
    derivatives) jumps. Both only steer quadrature and may be left at their
    defaults for smooth functions.

    *log_rule*, when present, evaluates :math:`u \mapsto f(e^u)` directly; it is
    used when arguments would overflow or underflow in :math:`x`.
    """

    kind: str
    rule: ArrayFn | None = None
    coeffs: tuple[complex, ...] = ()
    radius: float = math.inf
    grid: LogGrid | None = None
    samples: np.ndarray | None = None
    breakpoints: tuple[float, ...] = ()
    support: tuple[float, float] = (0.0, math.inf)
    log_rule: ArrayFn | None = None
    real: bool = True
    name: str = ""

    _spline: object = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in ("rule", "power_series", "sampled"):
            raise DomainError(f"unknown function kind: {self.kind!r}")
        if self.kind == "sampled" and self._spline is None:
            if self.grid is None or self.samples is None:
                raise DomainError("sampled functions need a grid and samples")
            values = np.asarray(self.samples)
            if values.shape != (self.grid.n,):
                raise DomainError(
                    f"expected {self.grid.n} samples, got shape {values.shape}")
            object.__setattr__(self, "_spline", CubicSpline(self.grid.log_points, values))

    # {{{ constructors

    @classmethod
    def from_rule(cls, rule: ArrayFn, *, vectorized: bool = True,
                  **kwargs: object) -> MellinFunction:
        if not vectorized:
            rule = np.vectorize(rule, otypes=[complex])
        return cls(kind="rule", rule=rule, **kwargs)

    @classmethod
    def from_series(cls, coeffs: tuple[complex, ...] | list[complex], *,
                    radius: float = math.inf, name: str = "") -> MellinFunction:
        coeffs = tuple(coeffs)
        if not coeffs:
            coeffs = (0.0,)
        return cls(kind="power_series", coeffs=coeffs, radius=float(radius),
                   real=all(np.isreal(coeffs)), name=name)

    @classmethod
    def from_samples(cls, grid: LogGrid, values: np.ndarray, *,
                     name: str = "") -> MellinFunction:
        values = np.asarray(values)
        if not np.iscomplexobj(values):
            values = values.astype(float)
        return cls(kind="sampled", grid=grid, samples=values,
                   real=not np.iscomplexobj(values), name=name)

    # }}}

    @property
    def span(self) -> tuple[float, float]:
        """Interval on which the representation can be evaluated."""
        if self.kind == "sampled":
            assert self.grid is not None
            return self.grid.x_min, self.grid.x_max
        if self.kind == "power_series":
            return 0.0, self.radius
        return 0.0, math.inf

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        x_arr = np.asarray(x, dtype=float)
        if np.any(~(x_arr > 0)):
            raise DomainError("functions are evaluated on x > 0 only")

        if self.kind == "rule":
            assert self.rule is not None
            result = np.broadcast_to(self.rule(x_arr), x_arr.shape)
        elif self.kind == "power_series":
            if np.any(x_arr > self.radius):
                raise DomainError(
                    f"power series evaluated beyond its radius {self.radius}")
            result = np.polynomial.polynomial.polyval(x_arr, np.asarray(self.coeffs))
        else:
            lo, hi = self.span
            if np.any(x_arr < lo * (1 - _SPAN_SLACK)) or np.any(x_arr > hi * (1 + _SPAN_SLACK)):
                raise DomainError(
                    f"sampled function evaluated outside its span [{lo}, {hi}]")
            u = np.clip(np.log(x_arr), math.log(lo), math.log(hi))
            result = self._spline(u)

        return result[()] if np.ndim(x) == 0 else np.asarray(result)

    def eval_log(self, u: np.ndarray | float) -> np.ndarray:
        r"""Evaluate :math:`f(e^u)`.

        Without a *log_rule*, arguments are clamped to the normal double range
        :math:`|u| \le 708`, so that the far ends evaluate as :math:`f(0+)` and
        :math:`f(+\infty)` instead of failing on an underflowed ``x = 0``.
        """
        if self.log_rule is not None:
            return np.asarray(self.log_rule(np.asarray(u, dtype=float)))
        return self(np.exp(np.clip(u, -_LOG_LIMIT, _LOG_LIMIT)))


def as_function(f: MellinFunction | ArrayFn) -> MellinFunction:
    if isinstance(f, MellinFunction):
        return f
    return MellinFunction.from_rule(f)


# }}}


# {{{ transform


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and budgets shared by the quadrature engines."""

    rel_tol: float = 1.0e-8
    max_levels: int = 20
    gj_nodes: int = 64
    gl_nodes: int = 16
    window: tuple[float, float] = (-40.0, 40.0)
    """Truncation window in :math:`u = \\log x`."""
    panel_width: float = 0.5
    max_points: int = 1 << 20

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive: {self.rel_tol}")
        if not self.window[0] < self.window[1]:
            raise DomainError(f"invalid window: {self.window}")


@dataclass(frozen=True)
class MellinSpectrum:
    r"""Samples of :math:`\mathcal{M}[f](\nu + i t)` along one vertical line."""

    nu: float
    t_values: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.t_values, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if t.shape != v.shape or t.ndim != 1:
            raise DomainError("t_values and values must be 1D arrays of equal length")
        object.__setattr__(self, "t_values", t)
        object.__setattr__(self, "values", v)


def _log_pieces(f: MellinFunction, window: tuple[float, float]) -> tuple[list[float], bool]:
    """Edges in *u* of the smooth pieces of *f* inside *window*.

    The flag is *True* when the integrand may be non-smooth at some edge,
    which rules out the plain trapezoid rule.
    """
    lo, hi = window
    clipped = False
    for a, b in (f.support, f.span):
        if a > 0 and math.log(a) > lo:
            lo, clipped = math.log(a), True
        if math.isfinite(b) and math.log(b) < hi:
            hi, clipped = math.log(b), True
    if not lo < hi:
        return [], False

    inner = sorted({math.log(p) for p in f.breakpoints if p > 0 and lo < math.log(p) < hi})
    return [lo, *inner, hi], clipped or bool(inner)


def _phase_sum(u: np.ndarray, weighted: np.ndarray, t: np.ndarray) -> np.ndarray:
    r"""Compute :math:`\sum_k w_k e^{i t u_k}` for every *t*."""
    out = np.zeros(t.size, dtype=complex)
    step = max(1, _CHUNK // max(t.size, 1))
    for start in range(0, u.size, step):
        sl = slice(start, start + step)
        out += np.exp(1j * np.outer(t, u[sl])) @ weighted[sl]
    return out


def _transform_trapezoid(f: MellinFunction, nu: float, t: np.ndarray,
                         a: float, b: float, quad: QuadConfig) -> np.ndarray:
    tmax = float(np.max(np.abs(t))) if t.size else 0.0
    h = min(quad.panel_width, 0.5 / tmax) if tmax > 0 else quad.panel_width
    n = max(2, int(math.ceil((b - a) / h)))
    h = (b - a) / n

    u = np.linspace(a, b, n + 1)
    g = np.exp(nu * u) * f.eval_log(u)
    # drop ends where the integrand is negligible on the starting grid
    mag = np.abs(g)
    keep = np.flatnonzero(mag > _NEGLIGIBLE * mag.max()) if mag.max() > 0 else []
    if len(keep) and (keep[0] > 1 or keep[-1] < n - 1):
        lo, hi = max(keep[0] - 1, 0), min(keep[-1] + 1, n)
        a, b, n = float(u[lo]), float(u[hi]), hi - lo
        u, g = u[lo:hi + 1], g[lo:hi + 1]
    w = np.full(u.size, h)
    w[[0, -1]] *= 0.5
    total = _phase_sum(u, w * g, t)
    l1 = float(np.sum(w * np.abs(g)))

    for _ in range(quad.max_levels):
        if 2 * n + 1 > quad.max_points:
            break
        um = a + h * (np.arange(n) + 0.5)
        gm = np.exp(nu * um) * f.eval_log(um)
        finer = 0.5 * total + _phase_sum(um, 0.5 * h * gm, t)
        l1 = 0.5 * l1 + float(np.sum(0.5 * h * np.abs(gm)))
        n, h = 2 * n, 0.5 * h

        err = np.max(np.abs(finer - total))
        scale = max(float(np.max(np.abs(finer))), 1.0e-4 * l1)
        total = finer
        if err <= quad.rel_tol * scale:
            return total

    raise NonConvergent(
        f"trapezoid refinement did not reach rel_tol = {quad.rel_tol} "
        f"with {n + 1} points")


def _transform_pieces(f: MellinFunction, nu: float, t: np.ndarray,
                      edges: list[float], quad: QuadConfig) -> np.ndarray:
    tmax = float(np.max(np.abs(t))) if t.size else 0.0
    pieces = list(zip(edges[:-1], edges[1:]))

    def rule(a: float, b: float, level: int) -> tuple[np.ndarray, np.ndarray, float]:
        u, w = tanh_sinh(a, b, level)
        g = w * np.exp(nu * u) * f.eval_log(u)
        return _phase_sum(u, g, t), u.size, float(np.sum(np.abs(g)))

    def first_level(a: float, b: float) -> int:
        # middle node spacing is roughly (b - a) * h * pi / 4
        spacing = quad.panel_width if tmax == 0 else min(quad.panel_width, 0.5 / tmax)
        return max(2, int(math.ceil(math.log2(max((b - a) * math.pi / 4 / spacing, 1.0)))))

    levels = [first_level(a, b) for a, b in pieces]
    values = []
    l1 = 0.0
    for (a, b), lvl in zip(pieces, levels):
        v, _, piece_l1 = rule(a, b, lvl)
        values.append(v)
        l1 += piece_l1

    scale = max(float(np.max(np.abs(sum(values)))) if t.size else 0.0, 1.0e-4 * l1)
    atol = quad.rel_tol * scale / max(len(pieces), 1)

    total = np.zeros(t.size, dtype=complex)
    for (a, b), lvl, v in zip(pieces, levels, values):
        for _ in range(quad.max_levels):
            lvl += 1
            finer, npts, _ = rule(a, b, lvl)
            err = float(np.max(np.abs(finer - v))) if t.size else 0.0
            v = finer
            if err <= atol:
                break
            if npts > quad.max_points:
                raise NonConvergent(
                    f"tanh-sinh refinement on [{a}, {b}] exceeded the point budget")
        else:
            raise NonConvergent(
                f"tanh-sinh refinement on [{a}, {b}] did not reach the tolerance")
        total += v

    return total


def mellin_transform(f: MellinFunction | ArrayFn, nu: float,
                     t_grid: np.ndarray | float,
                     quad: QuadConfig | None = None) -> MellinSpectrum:
    r"""Evaluate :math:`\mathcal{M}[f](\nu + i t)` for every *t* in *t_grid*.

    Smooth functions whose support is covered by the window use the trapezoid
    rule in :math:`u = \log x`, which converges geometrically for analytic
    integrands that decay at both ends. Functions with breakpoints or support
    edges inside the window are split into pieces, each integrated with a
    tanh-sinh rule that tolerates endpoint non-smoothness.
    """
    quad = quad or QuadConfig()
    f = as_function(f)
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))

    edges, rough = _log_pieces(f, quad.window)
    if not edges:
        values = np.zeros(t.size, dtype=complex)
    elif rough:
        values = _transform_pieces(f, nu, t, edges, quad)
    else:
        values = _transform_trapezoid(f, nu, t, edges[0], edges[-1], quad)

    return MellinSpectrum(nu=float(nu), t_values=t, values=values)


def mellin_inverse_at(spec: MellinSpectrum, x: np.ndarray | float,
                      tail_tol: float = 1.0e-6) -> np.ndarray:
    r"""Evaluate :math:`\frac{1}{2\pi}\int F(\nu + i t) x^{-\nu - i t}\,dt` at *x*.

    The trapezoid rule on the uniform *t*-grid of *spec* is used. Raises
    :class:`TailError` when the spectrum at the window edges exceeds
    ``tail_tol`` times its peak.
    """
    t = spec.t_values
    if t.size < 2:
        raise DomainError("inverse transform needs at least two t samples")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1.0e-9, atol=0.0):
        raise DomainError("inverse transform needs a uniform t-grid")

    peak = float(np.max(np.abs(spec.values)))
    edge = max(abs(spec.values[0]), abs(spec.values[-1]))
    if peak > 0 and edge > tail_tol * peak:
        raise TailError(
            f"spectrum at the window edge is {edge / peak:.3e} of its peak "
            f"(tolerance {tail_tol:.1e}); widen the t-window")

    w = np.full(t.size, dt[0] / (2 * math.pi), dtype=complex)
    w[[0, -1]] *= 0.5
    weighted = w * spec.values

    x_arr = np.asarray(x, dtype=float)
    logs = np.log(np.atleast_1d(x_arr)).ravel()
    # x^{-i t} for every (x, t), summed against the weighted spectrum
    out = np.empty(logs.size, dtype=complex)
    step = max(1, _CHUNK // t.size)
    for start in range(0, logs.size, step):
        sl = slice(start, start + step)
        out[sl] = np.exp(-1j * np.outer(logs[sl], t)) @ weighted
    out *= np.exp(-spec.nu * logs)

    out = out.reshape(np.shape(x_arr))
    return out[()] if out.ndim == 0 else out


def mellin_inverse(spec: MellinSpectrum, x_grid: LogGrid,
                   tail_tol: float = 1.0e-6, real: bool = False) -> MellinFunction:
    """Sampled inverse transform on *x_grid*; see :func:`mellin_inverse_at`."""
    values = mellin_inverse_at(spec, x_grid.points, tail_tol=tail_tol)
    if real:
        values = values.real
    return MellinFunction.from_samples(x_grid, values, name="mellin_inverse")


# }}}


# {{{ translation and convolution


def _shifted_log_rule(base: ArrayFn, log_h: float, scale: float) -> ArrayFn:
    def rule(u: np.ndarray) -> np.ndarray:
        return scale * base(u + log_h)

    return rule


def mellin_translate(f: MellinFunction | ArrayFn, h: float, c: float) -> MellinFunction:
    r"""Mellin translation :math:`(\tau_h^c f)(x) = h^c f(h x)`."""
    if not h > 0:
        raise DomainError(f"translation needs h > 0: h = {h}")
    f = as_function(f)
    scale = h ** c

    if f.kind == "power_series":
        coeffs = tuple(a * h ** (c + k) for k, a in enumerate(f.coeffs))
        return MellinFunction.from_series(coeffs, radius=f.radius / h, name=f.name)

    if f.kind == "sampled":
        assert f.grid is not None and f.samples is not None
        grid = LogGrid(f.grid.x_min / h, f.grid.x_max / h, f.grid.n)
        return MellinFunction.from_samples(grid, scale * f.samples, name=f.name)

    log_h = math.log(h)
    shifted = None if f.log_rule is None else _shifted_log_rule(f.log_rule, log_h, scale)

    lo, hi = f.support
    return replace(
        f,
        rule=lambda x: scale * f(h * x),
        breakpoints=tuple(p / h for p in f.breakpoints),
        support=(lo / h, hi / h),
        log_rule=shifted,
    )


def _conv_pieces(f: MellinFunction, g: MellinFunction, log_x: float,
                 window: tuple[float, float]) -> list[float]:
    # the integrand in v = log u is g(x e^{-v}) f(e^v)
    lo, hi = window
    cuts = set()
    for a, b in (f.support, f.span):
        if a > 0:
            lo = max(lo, math.log(a))
        if math.isfinite(b):
            hi = min(hi, math.log(b))
    for a, b in (g.support, g.span):
        if math.isfinite(b):
            lo = max(lo, log_x - math.log(b))
        if a > 0:
            hi = min(hi, log_x - math.log(a))
    if not lo < hi:
        return []

    cuts.update(math.log(p) for p in f.breakpoints if p > 0)
    cuts.update(log_x - math.log(p) for p in g.breakpoints if p > 0)
    inner = sorted(v for v in cuts if lo < v < hi)
    return [lo, *inner, hi]


def _conv_pointwise(f: MellinFunction, g: MellinFunction, log_x: float,
                    quad: QuadConfig) -> complex:
    edges = _conv_pieces(f, g, log_x, quad.window)
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        prev = None
        for level in range(3, quad.max_levels + 3):
            v, w = tanh_sinh(a, b, level)
            val = complex(np.sum(w * g.eval_log(log_x - v) * f.eval_log(v)))
            l1 = float(np.sum(w * np.abs(g.eval_log(log_x - v) * f.eval_log(v))))
            if prev is not None and abs(val - prev) <= quad.rel_tol * max(abs(val), 1.0e-4 * l1, 1.0e-300):
                break
            if v.size > quad.max_points:
                raise NonConvergent("convolution refinement exceeded the point budget")
            prev = val
        else:
            raise NonConvergent(f"convolution did not converge on [{a}, {b}]")
        total += val

    return total


def mellin_convolve_at(f: MellinFunction | ArrayFn, g: MellinFunction | ArrayFn,
                       x: np.ndarray | float,
                       quad: QuadConfig | None = None) -> np.ndarray:
    r"""Mellin convolution :math:`(f * g)(x) = \int_0^\infty g(x/u) f(u)\,du/u`."""
    quad = quad or QuadConfig()
    f = as_function(f)
    g = as_function(g)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    log_x = np.log(x_arr)

    smooth = (not f.breakpoints and not g.breakpoints
              and f.support == (0.0, math.inf) and g.support == (0.0, math.inf)
              and f.kind != "sampled" and g.kind != "sampled")

    if not smooth:
        out = np.array([_conv_pointwise(f, g, lx, quad) for lx in log_x])
    else:
        a, b = quad.window
        n = max(2, int(math.ceil((b - a) / quad.panel_width)))
        out = None
        for _ in range(quad.max_levels):
            v = np.linspace(a, b, n + 1)
            w = np.full(v.size, (b - a) / n)
            w[[0, -1]] *= 0.5
            vals = g.eval_log(log_x[:, None] - v[None, :]) * f.eval_log(v)[None, :]
            new = vals @ w
            l1 = np.abs(vals) @ w
            if out is not None:
                err = np.max(np.abs(new - out))
                if err <= quad.rel_tol * max(float(np.max(np.abs(new))), 1.0e-4 * float(np.max(l1))):
                    out = new
                    break
            out = new
            n *= 2
            if (n + 1) * x_arr.size > quad.max_points * 64:
                raise NonConvergent("convolution refinement exceeded the point budget")
        else:
            raise NonConvergent("convolution did not converge")

    out = np.asarray(out).reshape(np.shape(np.asarray(x, dtype=float)))
    return out[()] if out.ndim == 0 else out


def mellin_convolve(f: MellinFunction | ArrayFn, g: MellinFunction | ArrayFn,
                    x_grid: LogGrid, quad: QuadConfig | None = None) -> MellinFunction:
    """Mellin convolution sampled on *x_grid*."""
    f = as_function(f)
    g = as_function(g)
    values = mellin_convolve_at(f, g, x_grid.points, quad)
    if f.real and g.real:
        values = np.real(values)
    return MellinFunction.from_samples(x_grid, values, name="mellin_convolve")


def xc_norm(f: MellinFunction | ArrayFn, c: float,
            quad: QuadConfig | None = None) -> float:
    r"""Estimate :math:`\int_0^\infty x^{c - 1} |f(x)|\,dx` over the window.

    Finiteness of this norm cannot be certified from samples; the value is a
    diagnostic for the truncated window only.
    """
    f = as_function(f)
    absf = replace(
        f,
        rule=lambda x: np.abs(f(x)),
        log_rule=(lambda u: np.abs(f.eval_log(u))),
        kind="rule",
        _spline=None,
    )
    return float(mellin_transform(absf, c, 0.0, quad).values[0].real)


# }}}
