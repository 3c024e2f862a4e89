"""Optimization problems reduced to weighted partial MaxSAT."""

__version__ = "0.1.0"
