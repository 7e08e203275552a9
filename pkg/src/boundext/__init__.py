"""Exact computations for bounded extensions of quiver algebras."""

__version__ = "0.1.0"
