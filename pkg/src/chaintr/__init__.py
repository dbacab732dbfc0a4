"""Spectral curves and the topological expansion of chain-of-matrices models."""

__version__ = "0.1.0"
