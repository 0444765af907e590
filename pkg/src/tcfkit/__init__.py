"""Exact computations with tail correlation matrices and the polytopes
around them (extremal coefficient functions, cut and correlation polytopes)."""

__version__ = "0.1.0"
