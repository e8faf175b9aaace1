"""Lie point symmetries of a two-factor Kolmogorov backward equation family."""

__version__ = "0.1.0"
