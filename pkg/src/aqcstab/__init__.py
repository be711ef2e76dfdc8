"""Exact p-adic stability verification for the mixed additive-quadratic-cubic equation."""

__version__ = "0.1.0"
