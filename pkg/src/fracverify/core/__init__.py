"""Functions, special functions, configuration and extrapolation helpers."""

from .config import EvalConfig, TimeWindow, load_config
from .extrapolation import extrapolate_to_zero, richardson_table
from .functions import (
    K_MAX,
    BumpPerturbation,
    Constant,
    Exponential,
    Polynomial,
    Power,
    Product,
    ShiftedPower,
    Sine,
    SmoothFunction,
    Sum,
    apply_bump,
    eval_derivative,
    evaluate,
    parse_descriptor,
)
from .special import gamma_fn, generalized_binomial, truncated_mittag_leffler

__all__ = [
    "K_MAX",
    "BumpPerturbation",
    "Constant",
    "EvalConfig",
    "Exponential",
    "Polynomial",
    "Power",
    "Product",
    "ShiftedPower",
    "Sine",
    "SmoothFunction",
    "Sum",
    "TimeWindow",
    "apply_bump",
    "eval_derivative",
    "evaluate",
    "extrapolate_to_zero",
    "gamma_fn",
    "generalized_binomial",
    "load_config",
    "parse_descriptor",
    "richardson_table",
    "truncated_mittag_leffler",
]
