"""Catalog of smooth test functions with closed-form derivatives.

Every member evaluates ``f^(k)(t)`` exactly for ``k <= K_MAX`` and accepts
either a scalar or a numpy array for ``t``.  Functions compose with ``+``,
``-`` and ``*`` (scalar or function), so linear combinations and products
used by the linearity and Leibniz checks stay inside the catalog.

    >>> f = SmoothFunction(Power(2))
    >>> eval_derivative(f, 3.0, 1)
    6.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import DomainError, TruncationOrderError

__all__ = [
    "K_MAX",
    "BumpPerturbation",
    "Constant",
    "Exponential",
    "Polynomial",
    "Power",
    "Product",
    "ShiftedPower",
    "Sine",
    "SmoothFunction",
    "Sum",
    "apply_bump",
    "eval_derivative",
    "evaluate",
    "parse_descriptor",
]

K_MAX = 8

ArrayLike = Union[float, np.ndarray]


def _falling(p: float, k: int) -> float:
    c = 1.0
    for j in range(k):
        c *= p - j
    return c


def _check_order(k: int) -> None:
    if k < 0:
        raise ValueError(f"derivative order must be non-negative, got {k}")
    if k > K_MAX:
        raise TruncationOrderError(f"derivative order {k} exceeds K_MAX={K_MAX}")


@dataclass(frozen=True)
class Constant:
    c: float

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        if k == 0:
            return np.full_like(t, self.c)
        return np.zeros_like(t)

    @property
    def descriptor(self) -> str:
        return f"const:{self.c!r}"


@dataclass(frozen=True)
class ShiftedPower:
    """``t -> (t - a)**p``; non-integer ``p`` requires ``t >= a``."""

    p: float
    a: float = 0.0

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        p = self.p
        x = t - self.a
        if float(p).is_integer() and p >= 0:
            if k > p:
                return np.zeros_like(t)
            return _falling(p, k) * x ** int(p - k)
        if np.any(x < 0):
            raise DomainError(f"(t - {self.a})**{p} needs t >= {self.a} for non-integer power")
        if p - k < 0 and np.any(x == 0):
            raise DomainError(f"derivative {k} of (t - {self.a})**{p} is singular at t = {self.a}")
        return _falling(p, k) * x ** (p - k)

    @property
    def descriptor(self) -> str:
        return f"spower:{self.p!r},{self.a!r}"


@dataclass(frozen=True)
class Power:
    """``t -> t**p``."""

    p: float

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        return ShiftedPower(self.p, 0.0).derivative(t, k)

    @property
    def descriptor(self) -> str:
        return f"power:{self.p!r}"


@dataclass(frozen=True)
class Exponential:
    k: float = 1.0

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        return self.k**k * np.exp(self.k * t)

    @property
    def descriptor(self) -> str:
        return f"exp:{self.k!r}"


@dataclass(frozen=True)
class Sine:
    """``t -> sin(omega * t)``."""

    omega: float = 1.0

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        x = self.omega * t
        base = (np.sin, np.cos, lambda y: -np.sin(y), lambda y: -np.cos(y))[k % 4](x)
        return self.omega**k * base

    @property
    def descriptor(self) -> str:
        return f"sin:{self.omega!r}"


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending order: ``coeffs[i] * t**i``."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        c = np.asarray(self.coeffs, dtype=float)
        if k >= len(c):
            return np.zeros_like(t)
        return P.polyval(t, P.polyder(c, k) if k else c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def descriptor(self) -> str:
        return "poly:" + ",".join(repr(c) for c in self.coeffs)


@dataclass(frozen=True)
class Sum:
    """``sum(coef * f)`` over ``terms``."""

    terms: tuple[tuple[float, "SmoothFunction"], ...]

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        out = np.zeros_like(t)
        for coef, f in self.terms:
            out = out + coef * f.derivative(t, k)
        return out

    @property
    def descriptor(self) -> str:
        return "(" + " + ".join(f"{c!r}*{f.descriptor}" for c, f in self.terms) + ")"


@dataclass(frozen=True)
class Product:
    """``left * right`` with derivatives from the Leibniz expansion."""

    left: "SmoothFunction"
    right: "SmoothFunction"

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        out = np.zeros_like(t)
        for j in range(k + 1):
            out = out + math.comb(k, j) * self.left.derivative(t, j) * self.right.derivative(t, k - j)
        return out

    @property
    def descriptor(self) -> str:
        return f"({self.left.descriptor} * {self.right.descriptor})"


@lru_cache(maxsize=None)
def _bump_numerator(k: int) -> np.ndarray:
    # phi(s) = exp(1 - 1/(1-s^2));  phi^(k) = N_k(s) / (1-s^2)^(2k) * phi(s)
    # N_{k+1} = N_k' (1-s^2)^2 + N_k (4k s (1-s^2) - 2s)
    if k == 0:
        return np.array([1.0])
    prev = _bump_numerator(k - 1)
    j = k - 1
    one_minus_s2 = np.array([1.0, 0.0, -1.0])
    term1 = P.polymul(P.polyder(prev), P.polymul(one_minus_s2, one_minus_s2)) if len(prev) > 1 else np.array([0.0])
    factor = P.polysub(P.polymul([0.0, 4.0 * j], one_minus_s2), [0.0, 2.0])
    return P.polyadd(term1, P.polymul(prev, factor))


@dataclass(frozen=True)
class BumpPerturbation:
    """Compactly supported smooth bump ``amplitude * exp(1 - 1/(1 - s**2))``
    with ``s = (t - center) / radius``; identically zero for ``|s| >= 1``."""

    center: float
    radius: float
    amplitude: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"bump radius must be positive, got {self.radius}")

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.radius, self.center + self.radius)

    def derivative(self, t: np.ndarray, k: int) -> np.ndarray:
        _check_order(k)
        s = (t - self.center) / self.radius
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        if np.any(inside):
            si = s[inside]
            u = 1.0 - si * si
            num = P.polyval(si, _bump_numerator(k))
            out[inside] = num * np.exp(1.0 - 1.0 / u - 2 * k * np.log(u))
        return self.amplitude / self.radius**k * out


Kind = Union[Constant, Power, ShiftedPower, Exponential, Sine, Polynomial, Sum, Product]


@dataclass(frozen=True)
class SmoothFunction:
    """A catalog member plus an ordered tuple of bump perturbations."""

    kind: Kind
    perturbations: tuple[BumpPerturbation, ...] = field(default=())

    def derivative(self, t: ArrayLike, k: int = 0):
        _check_order(k)
        scalar = np.ndim(t) == 0
        x = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.asarray(self.kind.derivative(x, k), dtype=float)
        for b in self.perturbations:
            if b.amplitude != 0.0:
                out = out + b.derivative(x, k)
        return float(out[0]) if scalar else out

    def __call__(self, t: ArrayLike):
        return self.derivative(t, 0)

    @property
    def descriptor(self) -> str:
        base = self.kind.descriptor
        for b in self.perturbations:
            base += f"+bump({b.center!r},{b.radius!r},{b.amplitude!r})"
        return base

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = SmoothFunction(Constant(float(other)))
        if not isinstance(other, SmoothFunction):
            return NotImplemented
        return SmoothFunction(Sum(((1.0, self), (1.0, other))))

    __radd__ = __add__

    def __neg__(self):
        return SmoothFunction(Sum(((-1.0, self),)))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return SmoothFunction(Sum(((float(other), self),)))
        if not isinstance(other, SmoothFunction):
            return NotImplemented
        return SmoothFunction(Product(self, other))

    __rmul__ = __mul__


def evaluate(f: SmoothFunction, t: float) -> float:
    return f(t)


def eval_derivative(f: SmoothFunction, t: float, k: int) -> float:
    return f.derivative(t, k)


def apply_bump(f: SmoothFunction, b: BumpPerturbation) -> SmoothFunction:
    """Return ``f`` with ``b`` appended to its perturbations."""
    return SmoothFunction(f.kind, f.perturbations + (b,))


def parse_descriptor(text: str) -> SmoothFunction:
    """Build a catalog function from ``name[:p1,p2,...]``.

    Names: ``const:c``, ``power:p``, ``spower:p,a``, ``exp[:k]``,
    ``sin[:omega]``, ``poly:c0,c1,...`` (ascending coefficients).
    """
    name, _, rest = text.strip().partition(":")
    try:
        params = [float(x) for x in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise ValueError(f"non-numeric parameter in function descriptor {text!r}") from None
    arity = {"const": (1, 1), "power": (1, 1), "spower": (1, 2), "exp": (0, 1), "sin": (0, 1), "poly": (1, None)}
    if name not in arity:
        raise ValueError(f"unknown function {name!r}; expected one of {', '.join(arity)}")
    lo, hi = arity[name]
    if len(params) < lo or (hi is not None and len(params) > hi):
        raise ValueError(f"wrong number of parameters for {name!r}: {text!r}")
    if name == "const":
        kind = Constant(params[0])
    elif name == "power":
        kind = Power(params[0])
    elif name == "spower":
        kind = ShiftedPower(params[0], params[1] if len(params) > 1 else 0.0)
    elif name == "exp":
        kind = Exponential(params[0] if params else 1.0)
    elif name == "sin":
        kind = Sine(params[0] if params else 1.0)
    else:
        kind = Polynomial(tuple(params))
    return SmoothFunction(kind)
