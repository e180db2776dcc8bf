"""Generalized Reed-Muller code laboratory."""

__version__ = "0.1.0"
