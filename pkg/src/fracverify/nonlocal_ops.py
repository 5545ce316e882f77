"""Caputo-Fabrizio operator, Grunwald-Letnikov oracle and the
Riemann-Liouville series in integer-order derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .core.config import EvalConfig
from .core.functions import K_MAX, SmoothFunction
from .core.special import gamma_fn, generalized_binomial
from .errors import DomainError, StepSizeError, TruncationOrderError

__all__ = [
    "CFConstants",
    "CFSpec",
    "SeriesCoefficients",
    "caputo_fabrizio",
    "caputo_fabrizio_higher",
    "cf_constants",
    "cf_via_ode",
    "grunwald_letnikov_values",
    "rl_grunwald_letnikov",
    "rl_series",
    "series_coefficient",
    "series_coefficients",
    "unit_normalization",
]


def unit_normalization(alpha: float) -> float:
    """The constant normalization ``m(alpha) = 1``."""
    return 1.0


@dataclass(frozen=True)
class CFSpec:
    alpha: float
    t0: float = 0.0
    normalization: Callable[[float], float] = unit_normalization

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise DomainError(f"Caputo-Fabrizio order must lie in (0, 1), got {self.alpha}")

    @property
    def rate(self) -> float:
        return self.alpha / (1.0 - self.alpha)

    @property
    def prefactor(self) -> float:
        return self.normalization(self.alpha) / (1.0 - self.alpha)


@dataclass(frozen=True)
class CFConstants:
    A: float
    B: float
    C: float


def cf_constants(alpha: float, lam: float, normalization: Callable[[float], float] = unit_normalization) -> CFConstants:
    """Coefficients of ``Y' = A*Y + B*f'`` and of the accelerator form
    ``Z' = A*Z + C*f``."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if lam == 0:
        raise DomainError("lambda must be non-zero")
    A = -alpha / (1.0 - alpha)
    B = lam * normalization(alpha) / (1.0 - alpha)
    return CFConstants(A, B, A * B)


def _simpson(y: np.ndarray, h: float) -> float:
    w = np.ones_like(y)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return h / 3.0 * math.fsum(w * y)


def _cf_quadrature(f: SmoothFunction, spec: CFSpec, t: float, order: int, panels: int) -> float:
    if not t > spec.t0:
        raise DomainError(f"need t > t0, got t={t}, t0={spec.t0}")
    h = (t - spec.t0) / panels
    tau = spec.t0 + h * np.arange(panels + 1)
    tau[-1] = t
    integrand = np.exp(-spec.rate * (t - tau)) * f.derivative(tau, order)
    return spec.prefactor * _simpson(integrand, h)


def caputo_fabrizio(f: SmoothFunction, spec: CFSpec, t: float, cfg: EvalConfig | None = None) -> float:
    """``m/(1-alpha) * int_{t0}^{t} exp(-alpha (t-tau)/(1-alpha)) f'(tau) dtau``
    by composite Simpson over ``cfg.quad_panels`` subintervals."""
    cfg = cfg or EvalConfig()
    return _cf_quadrature(f, spec, t, 1, cfg.quad_panels)


def caputo_fabrizio_higher(
    f: SmoothFunction, alpha: float, n: int, t0: float, t: float, cfg: EvalConfig | None = None
) -> float:
    """Order ``alpha + n``: the Caputo-Fabrizio operator applied to ``f^(n)``."""
    cfg = cfg or EvalConfig()
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if n + 1 > K_MAX:
        raise TruncationOrderError(f"order {n + 1} derivative exceeds K_MAX={K_MAX}")
    return _cf_quadrature(f, CFSpec(alpha, t0), t, n + 1, cfg.quad_panels)


def _rk4_linear(a: float, forcing: np.ndarray, h: float, steps: int) -> float:
    # forcing sampled on the half-step grid: index 2i is tau_i, 2i+1 its midpoint
    y = 0.0
    for i in range(steps):
        f0, fm, f1 = forcing[2 * i], forcing[2 * i + 1], forcing[2 * i + 2]
        k1 = a * y + f0
        k2 = a * (y + 0.5 * h * k1) + fm
        k3 = a * (y + 0.5 * h * k2) + fm
        k4 = a * (y + h * k3) + f1
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def _solve_state(f: SmoothFunction, consts: CFConstants, t0: float, t: float, steps: int) -> float:
    h = (t - t0) / steps
    grid = t0 + 0.5 * h * np.arange(2 * steps + 1)
    grid[-1] = t
    forcing = consts.B * f.derivative(grid, 1)
    return _rk4_linear(consts.A, forcing, h, steps)


def cf_via_ode(f: SmoothFunction, spec: CFSpec, lam: float, t: float, cfg: EvalConfig | None = None) -> float:
    """Caputo-Fabrizio value from the equivalent first-order system.

    Integrates ``Y' = A*Y + B*f'`` with ``Y(t0) = 0`` by classical RK4 at
    ``cfg.quad_panels`` steps and returns ``Y(t)/lam``.  The run is repeated
    at half the step; a relative change above ``cfg.rel_tol`` raises
    :class:`StepSizeError`.
    """
    cfg = cfg or EvalConfig()
    if not t > spec.t0:
        raise DomainError(f"need t > t0, got t={t}, t0={spec.t0}")
    consts = cf_constants(spec.alpha, lam, spec.normalization)
    y = _solve_state(f, consts, spec.t0, t, cfg.quad_panels)
    y_fine = _solve_state(f, consts, spec.t0, t, 2 * cfg.quad_panels)
    if abs(y - y_fine) > cfg.rel_tol * max(abs(y_fine), 1.0):
        raise StepSizeError(f"halving the RK4 step moved Y(t) from {y!r} to {y_fine!r}")
    return y / lam


@lru_cache(maxsize=32)
def _gl_weights(alpha: float, n: int) -> np.ndarray:
    # (-1)^j binom(alpha, j) via w_j = w_{j-1} (j-1-alpha)/j
    j = np.arange(1, n + 1, dtype=float)
    w = np.empty(n + 1)
    w[0] = 1.0
    w[1:] = np.cumprod((j - 1.0 - alpha) / j)
    w.setflags(write=False)
    return w


def _gl_sum(func: Callable[[np.ndarray], np.ndarray], alpha: float, t0: float, t: float, n: int) -> float:
    h = (t - t0) / n
    nodes = t0 + h * np.arange(n, -1, -1, dtype=float)
    nodes[0] = t
    return h ** (-alpha) * float(np.sum(_gl_weights(alpha, n) * func(nodes)))


def grunwald_letnikov_values(
    func: Callable[[np.ndarray], np.ndarray], alpha: float, t0: float, t: float, n_steps: int
) -> float:
    """Richardson-refined GL estimate ``2*GL(2n) - GL(n)`` for a vectorized callable."""
    if not t > t0:
        raise DomainError(f"need t > t0, got t={t}, t0={t0}")
    return 2.0 * _gl_sum(func, alpha, t0, t, 2 * n_steps) - _gl_sum(func, alpha, t0, t, n_steps)


def rl_grunwald_letnikov(f: SmoothFunction, alpha: float, t0: float, t: float, n_steps: int = 65536) -> float:
    """Riemann-Liouville derivative of order ``alpha`` from ``t0`` by the
    Grunwald-Letnikov sum with one Richardson step."""
    if not alpha > 0 or float(alpha).is_integer():
        raise DomainError(f"alpha must be positive and non-integer, got {alpha}")
    if n_steps < 1:
        raise DomainError(f"n_steps must be positive, got {n_steps}")
    return grunwald_letnikov_values(f, alpha, t0, t, n_steps)


def series_coefficient(alpha: float, k: int, t: float, t0: float) -> float:
    """``binom(alpha, k) * (t - t0)**(k - alpha) / Gamma(k - alpha + 1)``."""
    if not t > t0:
        raise DomainError(f"need t > t0, got t={t}, t0={t0}")
    g_arg = k - alpha + 1.0
    if g_arg <= 0 and float(g_arg).is_integer():
        return 0.0
    return generalized_binomial(alpha, k) * (t - t0) ** (k - alpha) / gamma_fn(g_arg)


@dataclass(frozen=True)
class SeriesCoefficients:
    alpha: float
    t0: float
    t: float
    values: tuple[float, ...]


def series_coefficients(alpha: float, t0: float, t: float, K: int) -> SeriesCoefficients:
    return SeriesCoefficients(alpha, t0, t, tuple(series_coefficient(alpha, k, t, t0) for k in range(K + 1)))


def rl_series(f: SmoothFunction, alpha: float, t0: float, t: float, K: int) -> float:
    """Partial sum ``sum_{k=0..K} a_k(t, t0, alpha) f^(k)(t)``."""
    if K < 0:
        raise DomainError(f"K must be non-negative, got {K}")
    if K > K_MAX:
        raise TruncationOrderError(f"K={K} exceeds the {K_MAX} exact derivatives available")
    total = 0.0
    for k, a_k in enumerate(series_coefficients(alpha, t0, t, K).values):
        total += a_k * f.derivative(t, k)
    return total
