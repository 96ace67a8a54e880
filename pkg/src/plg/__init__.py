"""Finite projective geometries, subspace lattices, orthogonality and coordinatization."""

__version__ = "0.1.0"
