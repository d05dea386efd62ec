"""Numerical laboratory for the conformable time-fractional tsunami system."""

__version__ = "0.1.0"
