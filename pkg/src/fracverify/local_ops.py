"""Limit-defined operators that collapse to first-order derivatives.

The conformable, Katugampola and M-fractional operators are evaluated from
their one-sided difference quotients over ``cfg.eps_ladder`` and extrapolated
to ``eps -> 0``.  Each has a companion ``*_reduced`` that applies the
equivalent variable-coefficient first derivative directly.  The
Kolwankar-Gangal operator is evaluated as the limit of a Riemann-Liouville
derivative of the Taylor remainder.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core.config import EvalConfig, TimeWindow
from .core.extrapolation import extrapolate_to_zero
from .core.functions import SmoothFunction
from .core.special import gamma_fn, truncated_mittag_leffler
from .errors import DomainError, NonConvergenceError

__all__ = [
    "KG_H_LADDER",
    "KG_NODES_PER_STEP",
    "KG_ZERO_THRESHOLD",
    "LocalKind",
    "LocalOperatorSpec",
    "conformable_limit",
    "conformable_reduced",
    "katugampola_limit",
    "kg_local_derivative",
    "mfractional_limit",
    "mfractional_reduced",
]

KG_H_LADDER = tuple(2.0**-j for j in range(3, 13))
KG_NODES_PER_STEP = 256
KG_ZERO_THRESHOLD = 1e-4


class LocalKind(str, enum.Enum):
    CONFORMABLE = "conformable"
    KATUGAMPOLA = "katugampola"
    MFRACTIONAL = "mfractional"
    KOLWANKAR_GANGAL = "kg"


@dataclass(frozen=True)
class LocalOperatorSpec:
    kind: LocalKind
    alpha: float
    beta: float = 1.0
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", LocalKind(self.kind))
        if self.kind is LocalKind.KOLWANKAR_GANGAL:
            if not self.alpha > 0 or float(self.alpha).is_integer():
                raise ValueError(f"KG order must be positive and non-integer, got {self.alpha}")
        elif not 0 < self.alpha < 1:
            raise ValueError(f"{self.kind.value} order must lie in (0, 1), got {self.alpha}")
        if self.kind is LocalKind.MFRACTIONAL:
            if not self.beta > 0:
                raise ValueError(f"beta must be positive, got {self.beta}")
            if self.m < 0:
                raise ValueError(f"m must be non-negative, got {self.m}")


def _check_open_unit(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def _check_positive_time(t: float) -> None:
    if not t > 0:
        raise DomainError(f"operator is defined for t > 0, got t={t}")


def _limit(quotient: Callable[[float], float], cfg: EvalConfig) -> float:
    eps = cfg.eps_ladder
    values = [quotient(e) for e in eps]
    value, err = extrapolate_to_zero(eps, values, cfg.richardson_depth)
    if err > 10 * max(cfg.abs_tol, cfg.rel_tol * abs(value)):
        raise NonConvergenceError(f"successive extrapolants disagree: estimate {value!r}, spread {err:.3e}")
    return value


def conformable_limit(f: SmoothFunction, alpha: float, t: float, cfg: EvalConfig | None = None) -> float:
    """``lim [f(t + eps*t**(1-alpha)) - f(t)] / eps``."""
    cfg = cfg or EvalConfig()
    _check_open_unit(alpha)
    _check_positive_time(t)
    ft = f(t)
    scale = t ** (1.0 - alpha)
    return _limit(lambda e: (f(t + e * scale) - ft) / e, cfg)


def conformable_reduced(f: SmoothFunction, alpha: float, t: float) -> float:
    """``t**(1-alpha) * f'(t)``."""
    _check_open_unit(alpha)
    _check_positive_time(t)
    return t ** (1.0 - alpha) * f.derivative(t, 1)


def katugampola_limit(f: SmoothFunction, alpha: float, t: float, cfg: EvalConfig | None = None) -> float:
    """``lim [f(t*exp(eps*t**-alpha)) - f(t)] / eps``."""
    cfg = cfg or EvalConfig()
    _check_open_unit(alpha)
    _check_positive_time(t)
    ft = f(t)
    rate = t ** (-alpha)
    return _limit(lambda e: (f(t * math.exp(e * rate)) - ft) / e, cfg)


def mfractional_limit(
    f: SmoothFunction, alpha: float, beta: float, m: int, t: float, cfg: EvalConfig | None = None
) -> float:
    """``lim [f(t*E(eps*t**-alpha)) - f(t)] / eps`` with ``E`` the
    Mittag-Leffler series truncated after ``m`` terms."""
    cfg = cfg or EvalConfig()
    _check_open_unit(alpha)
    _check_positive_time(t)
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    ft = f(t)
    rate = t ** (-alpha)
    return _limit(lambda e: (f(t * truncated_mittag_leffler(beta, m, e * rate)) - ft) / e, cfg)


def mfractional_reduced(f: SmoothFunction, alpha: float, beta: float, t: float) -> float:
    """``t**(1-alpha) / Gamma(beta+1) * f'(t)``; independent of ``m``."""
    _check_open_unit(alpha)
    _check_positive_time(t)
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    return t ** (1.0 - alpha) / gamma_fn(beta + 1.0) * f.derivative(t, 1)


def _taylor_remainder(f: SmoothFunction, a: float, n: int) -> Callable[[np.ndarray], np.ndarray]:
    coeffs = [f.derivative(a, k) / math.factorial(k) for k in range(n)]

    def remainder(t: np.ndarray) -> np.ndarray:
        x = t - a
        poly = np.zeros_like(x)
        for c in reversed(coeffs):
            poly = poly * x + c
        return f(t) - poly

    return remainder


def kg_local_derivative(
    f: SmoothFunction,
    alpha: float,
    a: float,
    cfg: EvalConfig | None = None,
    window: TimeWindow | None = None,
) -> float:
    """Kolwankar-Gangal local derivative of ``f`` at ``a``.

    The RL derivative (Grunwald-Letnikov, ``KG_NODES_PER_STEP`` nodes per
    step) of the Taylor remainder of order ``n = ceil(alpha)`` is sampled at
    ``a + h`` for ``h`` in ``KG_H_LADDER``.  On a smooth remainder the image
    expands in powers ``h**(k - alpha)``, ``k >= n``; a least-squares fit of
    ``c0 + sum_k c_k h**(k-alpha)`` returns ``c0`` as the ``h -> 0`` limit.
    """
    from .nonlocal_ops import grunwald_letnikov_values

    cfg = cfg or EvalConfig()
    if not alpha > 0 or float(alpha).is_integer():
        raise DomainError(f"KG order must be positive and non-integer, got {alpha}")
    if window is not None and window.t0 != a:
        raise DomainError(f"window starts at {window.t0}, expected a={a}")
    h = np.asarray(KG_H_LADDER)
    if window is not None and a + h.max() > window.t1:
        raise DomainError(f"h-ladder reaches {a + h.max()}, beyond window end {window.t1}")
    n = math.ceil(alpha)
    remainder = _taylor_remainder(f, a, n)
    values = np.array([grunwald_letnikov_values(remainder, alpha, a, a + hj, KG_NODES_PER_STEP) for hj in h])

    x = h / h.max()
    powers = [k - alpha for k in range(n, n + 5)]
    design = np.column_stack([np.ones_like(x)] + [x**p for p in powers])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    resid = np.max(np.abs(design @ coef - values))
    scale = max(1.0, float(np.max(np.abs(values))))
    if resid > 1e-3 * scale:
        raise NonConvergenceError(f"KG h-ladder values do not follow the remainder expansion (residual {resid:.3e})")
    return float(coef[0])
