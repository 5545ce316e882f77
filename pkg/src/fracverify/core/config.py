"""Evaluation settings and time windows."""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from pathlib import Path

__all__ = ["EvalConfig", "TimeWindow", "load_config"]

DEFAULT_EPS_LADDER = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


@dataclass(frozen=True)
class TimeWindow:
    t0: float
    t1: float
    n_points: int = 2

    def __post_init__(self):
        if not self.t0 < self.t1:
            raise ValueError(f"need t0 < t1, got t0={self.t0}, t1={self.t1}")
        if self.n_points < 2:
            raise ValueError(f"n_points must be at least 2, got {self.n_points}")

    @property
    def h(self) -> float:
        return (self.t1 - self.t0) / (self.n_points - 1)


@dataclass(frozen=True)
class EvalConfig:
    """Numerical knobs shared by every evaluator.

    ``eps_ladder`` feeds the limit definitions, ``quad_panels`` the
    Caputo-Fabrizio quadrature and ODE step count, ``gl_steps`` the
    reference Grunwald-Letnikov resolution.
    """

    eps_ladder: tuple[float, ...] = DEFAULT_EPS_LADDER
    richardson_depth: int = 3
    quad_panels: int = 4096
    abs_tol: float = 1e-10
    rel_tol: float = 1e-6
    gl_steps: int = 65536

    def __post_init__(self):
        ladder = tuple(float(e) for e in self.eps_ladder)
        object.__setattr__(self, "eps_ladder", ladder)
        if not ladder or any(e <= 0 for e in ladder):
            raise ValueError("eps_ladder entries must be positive")
        if any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise ValueError("eps_ladder must be strictly decreasing")
        if self.richardson_depth < 0:
            raise ValueError("richardson_depth must be non-negative")
        if self.quad_panels < 2 or self.quad_panels % 2:
            raise ValueError("quad_panels must be a positive even integer")
        if self.gl_steps < 1:
            raise ValueError("gl_steps must be positive")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["eps_ladder"] = list(self.eps_ladder)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EvalConfig":
        return cls(**{k: (tuple(v) if k == "eps_ladder" else v) for k, v in d.items()})


_CASTS = {
    "eps_ladder": lambda s: tuple(float(x) for x in s.split(",") if x.strip()),
    "richardson_depth": int,
    "quad_panels": int,
    "gl_steps": int,
    "abs_tol": float,
    "rel_tol": float,
}


def load_config(path: str | Path, base: EvalConfig | None = None) -> EvalConfig:
    """Read ``key = value`` lines (``#`` comments allowed) over ``base``."""
    updates = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CASTS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        updates[key] = _CASTS[key](value)
    return replace(base or EvalConfig(), **updates)
