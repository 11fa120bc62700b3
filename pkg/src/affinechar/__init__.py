"""Exact-arithmetic characters of negative-level modules over affine Lie algebras."""

__version__ = "0.1.0"
