"""Numerical fractional-calculus operators and locality verification."""

__version__ = "0.1.0"
