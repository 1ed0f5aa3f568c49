"""Martingale tail-probability bounds with Monte Carlo verification."""

__version__ = "0.1.0"
