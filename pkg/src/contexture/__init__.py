"""Exact tools for joint-distribution criteria, couplings and contextuality
in 2x2 binary factorial systems."""

__version__ = "0.1.0"
