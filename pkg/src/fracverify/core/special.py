"""Gamma function, generalized binomial coefficients and the truncated
Mittag-Leffler sum used by the M-fractional operator."""

from __future__ import annotations

import math

from ..errors import PoleError

__all__ = ["gamma_fn", "generalized_binomial", "truncated_mittag_leffler"]


def gamma_fn(x: float) -> float:
    """Gamma function for real ``x``.

    Raises :class:`PoleError` at 0, -1, -2, ...
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at x={x!r}")
    return math.gamma(x)


def generalized_binomial(alpha: float, k: int) -> float:
    """``alpha*(alpha-1)*...*(alpha-k+1) / k!`` by the running product.

    The product form stays finite for every real ``alpha``; a gamma ratio
    would hit poles whenever ``alpha`` is a non-negative integer below ``k``.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    c = 1.0
    for j in range(1, k + 1):
        c = c * (alpha - j + 1) / j
    return c


def truncated_mittag_leffler(beta: float, m: int, z: float) -> float:
    """Finite sum ``sum_{k=0..m} z**k / Gamma(beta*k + 1)``."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    total = 0.0
    zk = 1.0
    for k in range(m + 1):
        total += zk / math.gamma(beta * k + 1.0)
        zk *= z
    return total
