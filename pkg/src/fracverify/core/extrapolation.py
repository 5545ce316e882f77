"""Richardson extrapolation of sequences sampled along a step ladder."""

from __future__ import annotations

from typing import Sequence

__all__ = ["richardson_table", "extrapolate_to_zero"]


def richardson_table(steps: Sequence[float], values: Sequence[float], depth: int) -> list[list[float]]:
    """Neville table for ``v(h) = v0 + c1*h + c2*h**2 + ...``.

    ``table[i][j]`` eliminates the first ``j`` error terms using samples
    ``i-j .. i``.  Steps may be any strictly decreasing positive sequence.
    """
    h = list(steps)
    table = [[float(v)] for v in values]
    for i in range(1, len(h)):
        for j in range(1, min(i, depth) + 1):
            lo, hi = table[i - 1][j - 1], table[i][j - 1]
            ratio = h[i - j] / h[i]
            table[i].append(hi + (hi - lo) / (ratio - 1.0))
    return table


def extrapolate_to_zero(steps: Sequence[float], values: Sequence[float], depth: int) -> tuple[float, float]:
    """Estimate ``v(0)`` from the ``depth + 1`` largest steps.

    Returns ``(table[d][d], spread)`` where ``spread`` is the distance to the
    next extrapolant of the same order, ``table[d+1][d]`` (zero when the
    ladder has no further step).  The estimate is a fixed linear combination
    of ``values``, so it inherits the linearity of whatever produced them.
    """
    if not len(steps) == len(values) >= 1:
        raise ValueError("need matching, non-empty steps and values")
    d = min(depth, len(steps) - 1)
    table = richardson_table(steps, values, d)
    best = table[d][d]
    spread = abs(table[d + 1][d] - best) if len(table) > d + 1 else 0.0
    return best, float(spread)
