"""Exact computation with averaging operators on commutative algebras."""

__version__ = "0.1.0"
