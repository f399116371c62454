"""Hyperbolic fuzzy c-means clustering on the Poincare ball."""

__version__ = "0.1.0"
