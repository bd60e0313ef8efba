"""Hyperbolic Fourier series toolkit."""

__version__ = "0.1.0"
