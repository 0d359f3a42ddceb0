r"""Fractional evolution and diffusion problems in the Mellin frame.

Evolution, on a line :math:`\operatorname{Re} s = \nu < 0`:

.. math::

    D^\alpha_{0+} w(\cdot, y) = -\partial_y w, \qquad
    \hat w(s, y) = \hat f(s)\, e^{-(-s)^\alpha y}.

Diffusion, on the line :math:`\operatorname{Re} s = 0`:

.. math::

    D^\alpha_{0+} w(\cdot, y) = \partial_y^2 w, \qquad
    \hat w(it, y) = \hat f(it)\,
        e^{-y |t|^{\alpha/2} (a - i \sigma b \operatorname{sgn} t)},

with :math:`a = |\cos(\alpha\pi/4)|`, :math:`b = \sin(\alpha\pi/4)` and
:math:`\sigma = \operatorname{sgn}\cos(\alpha\pi/4)`, which picks the root of
:math:`(-it)^\alpha` that decays in *y*. Kernels are the inverse transforms of
these symbols, so that :math:`w(\cdot, y) = f * G(\cdot, y)`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from mellinfrac.core import (
    LogGrid,
    MellinFunction,
    MellinSpectrum,
    QuadConfig,
    as_function,
    mellin_convolve_at,
    mellin_inverse_at,
    mellin_transform,
)
from mellinfrac.derivative import DerivativeBundle, hadamard_derivative
from mellinfrac.errors import DomainError, TailError

PROBLEMS = ("evolution", "diffusion")


def _check_alpha(problem: str, alpha: float) -> None:
    if problem == "evolution":
        if not 0 < alpha < 1:
            raise DomainError(f"evolution needs 0 < alpha < 1: alpha = {alpha}")
    elif problem == "diffusion":
        if not alpha > 0:
            raise DomainError(f"diffusion needs alpha > 0: alpha = {alpha}")
        if abs(alpha / 4 - math.floor(alpha / 4) - 0.5) < 1.0e-12:
            raise DomainError(
                f"diffusion needs cos(alpha*pi/4) != 0, which excludes "
                f"alpha = 2, 6, 10, ...: alpha = {alpha}")
    else:
        raise DomainError(f"problem must be one of {PROBLEMS}: {problem!r}")


def diffusion_coefficients(alpha: float) -> tuple[float, float, float]:
    r"""Return :math:`(a, b, \sigma)` for the diffusion symbol."""
    _check_alpha("diffusion", alpha)
    cos = math.cos(alpha * math.pi / 4)
    return abs(cos), math.sin(alpha * math.pi / 4), math.copysign(1.0, cos)


def evolution_symbol(alpha: float, nu: float, t: np.ndarray, y: float) -> np.ndarray:
    return np.exp(-((-nu - 1j * np.asarray(t, dtype=float)) ** alpha) * y)


def diffusion_symbol(alpha: float, t: np.ndarray, y: float) -> np.ndarray:
    a, b, sigma = diffusion_coefficients(alpha)
    t = np.asarray(t, dtype=float)
    return np.exp(-y * np.abs(t) ** (alpha / 2) * (a - 1j * sigma * b * np.sign(t)))


# {{{ kernels


@dataclass(frozen=True)
class KernelConfig:
    """Truncation of the kernel integrals over *t*."""

    tol: float = 1.0e-12
    """The t-window ends where the damping envelope drops below *tol*."""
    span: float | None = None
    """Period in log x of the aliasing images of the trapezoid rule; by
    default it is derived from the decay of the kernel."""
    max_points: int = 1 << 24


@dataclass(frozen=True)
class KernelField:
    """Kernel samples ``values[i, j] = G(x_j, y_i)``."""

    x: np.ndarray
    y_values: tuple[float, ...]
    values: np.ndarray
    provenance: str
    alpha: float
    problem: str
    nu: float = 0.0
    imag_residual: float = 0.0


def _t_step(span: float, t_max: float, cfg: KernelConfig) -> tuple[float, int]:
    dt = 2 * math.pi / span
    n = int(math.ceil(t_max / dt))
    if n + 1 > cfg.max_points:
        raise TailError(
            f"the kernel integral needs {n + 1} points up to t = {t_max:.3g}; "
            "y is too small for the damping to close the window")
    return dt, n


def evolution_kernel(alpha: float, nu: float, x_grid: LogGrid | np.ndarray, y: float,
                     cfg: KernelConfig | None = None) -> KernelField:
    r"""Numeric :math:`G(x, y) = \frac{1}{2\pi}\int e^{-(-\nu - it)^\alpha y}
    x^{-\nu - it}\,dt` by the trapezoid rule on a symmetric window."""
    cfg = cfg or KernelConfig()
    _check_alpha("evolution", alpha)
    if not nu < 0:
        raise DomainError(f"evolution needs nu < 0: nu = {nu}")
    if not y > 0:
        raise DomainError(f"kernels need y > 0: y = {y}")

    x = x_grid.points if isinstance(x_grid, LogGrid) else np.atleast_1d(
        np.asarray(x_grid, dtype=float))
    # Re (-nu - it)^alpha >= |t|^alpha cos(alpha pi / 2)
    t_max = (-math.log(cfg.tol) / (y * math.cos(alpha * math.pi / 2))) ** (1 / alpha)
    span = cfg.span or float(np.max(np.abs(np.log(x)))) - math.log(cfg.tol) / -nu
    dt, n = _t_step(span, t_max, cfg)

    t = dt * np.arange(-n, n + 1)
    spec = MellinSpectrum(nu=nu, t_values=t, values=evolution_symbol(alpha, nu, t, y))
    values = mellin_inverse_at(spec, x, tail_tol=math.inf)
    return KernelField(
        x=x, y_values=(y,), values=values.real[None, :], provenance="numeric",
        alpha=alpha, problem="evolution", nu=nu,
        imag_residual=float(np.max(np.abs(values.imag))))


def diffusion_kernel(alpha: float, x_grid: LogGrid | np.ndarray, y: float,
                     cfg: KernelConfig | None = None) -> KernelField:
    r"""Numeric :math:`G(x, y) = \frac{1}{\pi}\int_0^\infty e^{-a y t^{\alpha/2}}
    \cos(t \log x - \sigma b y t^{\alpha/2})\,dt`.

    The trapezoid rule on a uniform grid starting at 0 is exact up to the
    aliasing images :math:`G(x e^{\pm k P}, y)`, where the period *P* is
    ``cfg.span``. For :math:`\alpha < 4` the kernel has algebraic tails in
    :math:`\log x`, so the default period is wide.
    """
    cfg = cfg or KernelConfig()
    a, b, sigma = diffusion_coefficients(alpha)
    if not y > 0:
        raise DomainError(f"kernels need y > 0: y = {y}")

    x = x_grid.points if isinstance(x_grid, LogGrid) else np.atleast_1d(
        np.asarray(x_grid, dtype=float))
    logs = np.log(x)
    t_max = (-math.log(cfg.tol) / (a * y)) ** (2 / alpha)
    span = cfg.span or 2 * float(np.max(np.abs(logs))) + 4000.0
    dt, n = _t_step(span, t_max, cfg)

    t = dt * np.arange(n + 1)
    p = y * t ** (alpha / 2)
    w = np.full(t.size, dt / math.pi)
    w[0] *= 0.5
    env = w * np.exp(-a * p)
    phase = sigma * b * p

    values = np.empty(x.size)
    step = max(1, (1 << 22) // t.size)
    for start in range(0, x.size, step):
        sl = slice(start, start + step)
        values[sl] = np.cos(np.outer(logs[sl], t) - phase) @ env

    return KernelField(
        x=x, y_values=(y,), values=values[None, :], provenance="numeric",
        alpha=alpha, problem="diffusion")


def kernel_field(problem: str, alpha: float, x_grid: LogGrid, y_values: tuple[float, ...],
                 nu: float = -1.0, provenance: str = "numeric",
                 cfg: KernelConfig | None = None) -> KernelField:
    """Kernel slices stacked over *y_values*."""
    rows = []
    imag = 0.0
    for y in y_values:
        if provenance == "closed_form":
            rows.append(closed_form_kernel(problem, alpha, x_grid.points, y))
        elif problem == "evolution":
            k = evolution_kernel(alpha, nu, x_grid, y, cfg)
            rows.append(k.values[0])
            imag = max(imag, k.imag_residual)
        else:
            rows.append(diffusion_kernel(alpha, x_grid, y, cfg).values[0])
    return KernelField(x=x_grid.points, y_values=tuple(y_values), values=np.array(rows),
                       provenance=provenance, alpha=alpha, problem=problem,
                       nu=nu if problem == "evolution" else 0.0, imag_residual=imag)


def _levy(u: np.ndarray, y: float) -> np.ndarray:
    # one-sided stable law of index 1/2 in u = log x
    u = np.asarray(u, dtype=float)
    pos = np.where(u > 0, u, 1.0)
    val = y / (2 * math.sqrt(math.pi)) * pos**-1.5 * np.exp(-y * y / (4 * pos))
    return np.where(u > 0, val, 0.0)


def evolution_closed_form(x: np.ndarray | float, y: float,
                          variant: str = "exact") -> np.ndarray:
    r"""Closed-form evolution kernel at :math:`\alpha = 1/2`.

    ``"exact"`` is :math:`\frac{y}{2\sqrt\pi}(\log x)^{-3/2}
    e^{-y^2/(4\log x)}` on :math:`x > 1`. ``"alternate"`` is its reflection
    :math:`x \mapsto 1/x`, supported on :math:`(0, 1)`.
    """
    u = np.log(np.asarray(x, dtype=float))
    if variant == "exact":
        return _levy(u, y)
    if variant == "alternate":
        return _levy(-u, y)
    raise DomainError(f"variant must be 'exact' or 'alternate': {variant!r}")


def diffusion_closed_form(alpha: float, x: np.ndarray | float, y: float,
                          variant: str = "exact") -> np.ndarray:
    r"""Closed-form diffusion kernels at :math:`\alpha \in \{1, 4\}`.

    Exact forms: the heat kernel :math:`e^{-\log^2 x/(4y)}/(2\sqrt{\pi y})`
    for :math:`\alpha = 4`, and for :math:`\alpha = 1` the same one-sided law
    as the evolution kernel. ``"alternate"`` gives
    :math:`\frac12\sqrt{\pi/y}\,e^{-\log^2 x/(4y)}` and
    :math:`\sqrt{\pi/2}(\log x)^{-3/2} e^{-y/(2\sqrt2 \log x)}` on
    :math:`x > 1`, respectively.
    """
    u = np.log(np.asarray(x, dtype=float))
    if variant not in ("exact", "alternate"):
        raise DomainError(f"variant must be 'exact' or 'alternate': {variant!r}")
    if alpha == 4:
        scale = 0.5 * math.sqrt(math.pi / y) if variant == "alternate" else \
            1 / (2 * math.sqrt(math.pi * y))
        return scale * np.exp(-u * u / (4 * y))
    if alpha == 1:
        if variant == "exact":
            return _levy(u, y)
        pos = np.where(u > 0, u, 1.0)
        val = math.sqrt(math.pi / 2) * pos**-1.5 * np.exp(-y / (2 * math.sqrt(2) * pos))
        return np.where(u > 0, val, 0.0)
    raise DomainError(f"no closed-form diffusion kernel for alpha = {alpha}")


def closed_form_kernel(problem: str, alpha: float, x: np.ndarray | float, y: float,
                       variant: str = "exact") -> np.ndarray:
    if problem == "evolution":
        if alpha != 0.5:
            raise DomainError(f"no closed-form evolution kernel for alpha = {alpha}")
        return evolution_closed_form(x, y, variant)
    return diffusion_closed_form(alpha, x, y, variant)


def kernel_function(problem: str, alpha: float, y: float) -> MellinFunction:
    """Exact closed-form kernel as a function of x, for convolution."""
    if problem == "evolution" or alpha == 1:
        return MellinFunction.from_rule(
            lambda x: closed_form_kernel(problem, alpha, x, y),
            log_rule=lambda u: _levy(u, y), support=(1.0, math.inf),
            name=f"G({problem},alpha={alpha},y={y})")
    if alpha == 4:
        return MellinFunction.from_rule(
            lambda x: closed_form_kernel(problem, alpha, x, y),
            log_rule=lambda u: np.exp(-u * u / (4 * y)) / (2 * math.sqrt(math.pi * y)),
            name=f"G(diffusion,alpha=4,y={y})")
    raise DomainError(f"no closed-form {problem} kernel for alpha = {alpha}")


# }}}


# {{{ problems


@dataclass(frozen=True)
class PdeProblem:
    problem: str
    alpha: float
    f: MellinFunction
    x_grid: LogGrid
    y_values: tuple[float, ...]
    nu: float | None = None
    """Line abscissa: defaults to -1 for evolution; diffusion uses 0."""
    t_max: float = 60.0
    n_t: int = 8193
    method: str = "spectral"
    quad: QuadConfig = field(default_factory=QuadConfig)

    def __post_init__(self) -> None:
        _check_alpha(self.problem, self.alpha)
        object.__setattr__(self, "f", as_function(self.f))
        object.__setattr__(self, "y_values", tuple(float(y) for y in self.y_values))
        if self.nu is None:
            object.__setattr__(self, "nu", -1.0 if self.problem == "evolution" else 0.0)
        if self.problem == "evolution" and not self.nu < 0:
            raise DomainError(f"evolution needs nu < 0 so that Re(-s) > 0: nu = {self.nu}")
        if self.problem == "diffusion" and self.nu != 0:
            raise DomainError(f"diffusion is solved on the line nu = 0: nu = {self.nu}")
        if not self.y_values or min(self.y_values) <= 0:
            raise DomainError("y values must be positive")
        if self.method not in ("spectral", "convolution"):
            raise DomainError(f"method must be 'spectral' or 'convolution': {self.method!r}")
        if self.n_t < 3 or not self.t_max > 0:
            raise DomainError("the t-grid needs n_t >= 3 and t_max > 0")

    def symbol(self, t: np.ndarray, y: float) -> np.ndarray:
        if self.problem == "evolution":
            return evolution_symbol(self.alpha, self.nu, t, y)
        return diffusion_symbol(self.alpha, t, y)

    @cached_property
    def t_values(self) -> np.ndarray:
        return np.linspace(-self.t_max, self.t_max, self.n_t)

    @cached_property
    def spectrum(self) -> MellinSpectrum:
        return mellin_transform(self.f, self.nu, self.t_values, self.quad)


@dataclass(frozen=True)
class PdeField:
    """Solution samples ``values[i, j] = w(x_j, y_i)``."""

    problem: PdeProblem
    values: np.ndarray

    @property
    def x_grid(self) -> LogGrid:
        return self.problem.x_grid

    @property
    def y_values(self) -> tuple[float, ...]:
        return self.problem.y_values

    def spectrum(self, y: float) -> MellinSpectrum:
        p = self.problem
        spec = p.spectrum
        return MellinSpectrum(nu=spec.nu, t_values=spec.t_values,
                              values=spec.values * p.symbol(spec.t_values, y))

    def bundle(self, y: float, depth: int = 6) -> DerivativeBundle:
        r""":math:`w(\cdot, y)` with spectral log-derivatives
        :math:`\delta^j w \leftrightarrow (-s)^j \hat w`."""
        spec = self.spectrum(y)
        s = spec.nu + 1j * spec.t_values

        def at(j: int):
            sj = MellinSpectrum(nu=spec.nu, t_values=spec.t_values,
                                values=spec.values * (-s) ** j)
            return lambda x: mellin_inverse_at(sj, x, tail_tol=math.inf).real

        # the trapezoid inverse is periodic in log x; keep one period
        # centred on the grid
        period = 2 * math.pi / (spec.t_values[1] - spec.t_values[0])
        mid = 0.5 * (math.log(self.x_grid.x_min) + math.log(self.x_grid.x_max))
        support = (math.exp(mid - period / 2), math.exp(mid + period / 2))
        f = MellinFunction.from_rule(at(0), support=support, name=f"w(.,{y})")
        return DerivativeBundle(f, log_derivs=tuple(at(j) for j in range(1, depth + 1)),
                                fd_fallback=False)


def solve_pde(problem: PdeProblem, tail_tol: float = 1.0e-6) -> PdeField:
    """Sample the solution on ``x_grid`` x ``y_values``.

    The spectral method multiplies the transform of the initial data by the
    symbol and inverts on the same line. The convolution method convolves
    with the exact closed-form kernel where one is available.
    """
    p = problem
    x = p.x_grid.points
    rows = []
    for y in p.y_values:
        if p.method == "spectral":
            spec = PdeField(p, np.empty(0)).spectrum(y)
            rows.append(mellin_inverse_at(spec, x, tail_tol=tail_tol).real)
        else:
            g = kernel_function(p.problem, p.alpha, y)
            rows.append(np.real(mellin_convolve_at(p.f, g, x, p.quad)))
    return PdeField(p, np.array(rows))


# }}}


# {{{ checks


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    scale: float
    x_points: tuple[float, ...]
    y_points: tuple[float, ...]

    @property
    def relative(self) -> float:
        return self.max_residual / self.scale if self.scale > 0 else self.max_residual

    def to_dict(self) -> dict[str, object]:
        return {"max_residual": self.max_residual, "scale": self.scale,
                "relative": self.relative, "x_points": list(self.x_points),
                "y_points": list(self.y_points)}


def residual_check(problem: PdeProblem, w: PdeField,
                   x_points: np.ndarray | None = None) -> ResidualReport:
    r"""Compare :math:`D^\alpha_{0+}` in *x* against the *y*-derivative.

    The fractional derivative comes from quadrature on the spectral bundle of
    each interior *y*-slice, the *y*-derivative from central differences on
    the (uniform, at least five level) *y*-grid. The scale is the largest
    magnitude of the *y*-derivative.
    """
    ys = np.asarray(problem.y_values)
    if ys.size < 5:
        raise DomainError("residual_check needs at least five y levels")
    dy = np.diff(ys)
    if not np.allclose(dy, dy[0], rtol=1.0e-9):
        raise DomainError("residual_check needs a uniform y-grid")
    dy = float(dy[0])

    x_all = problem.x_grid.points
    if x_points is None:
        idx = np.linspace(1, x_all.size - 2, min(5, x_all.size - 2)).round().astype(int)
        x_points = x_all[np.unique(idx)]
    x_points = np.asarray(x_points, dtype=float)

    def slice_at(y: float) -> np.ndarray:
        spec = w.spectrum(y)
        return mellin_inverse_at(spec, x_points, tail_tol=math.inf).real

    worst = 0.0
    scale = 0.0
    for i in range(1, ys.size - 1):
        y = float(ys[i])
        centre = slice_at(y)
        up, down = slice_at(y + dy), slice_at(y - dy)
        if problem.problem == "evolution":
            rhs = -(up - down) / (2 * dy)
        else:
            rhs = (up - 2 * centre + down) / dy**2
        lhs = np.real(hadamard_derivative(w.bundle(y), problem.alpha, 0.0, x_points,
                                          problem.quad))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        scale = max(scale, float(np.max(np.abs(rhs))))

    return ResidualReport(max_residual=worst, scale=scale,
                          x_points=tuple(map(float, x_points)),
                          y_points=tuple(map(float, ys[1:-1])))


def recovery_norms(problem: PdeProblem, y_values: tuple[float, ...] = (1e-1, 1e-2, 1e-3),
                   ) -> list[float]:
    r"""Discrete norms :math:`\int |w(x, y) - f(x)| x^{\nu} dx/x` on the x-grid."""
    p = PdeProblem(problem.problem, problem.alpha, problem.f, problem.x_grid,
                   tuple(y_values), nu=problem.nu, t_max=problem.t_max, n_t=problem.n_t,
                   method=problem.method, quad=problem.quad)
    w = solve_pde(p)
    x = p.x_grid.points
    f = np.real(p.f(x))
    u = np.log(x)
    return [float(np.trapezoid(np.abs(row - f) * x**p.nu, u)) for row in w.values]


# }}}
