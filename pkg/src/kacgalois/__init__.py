"""Finite-dimensional Kac algebra duality, coideal Galois lattices, and
Jones basic constructions over dense complex linear algebra."""

__version__ = "0.1.0"
