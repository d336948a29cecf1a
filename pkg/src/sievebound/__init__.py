"""Numerical tools for semi-linear and linear sieve bounds on almost-prime sums of two squares."""

__version__ = "0.1.0"
