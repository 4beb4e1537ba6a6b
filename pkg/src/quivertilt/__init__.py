"""Exact torsion-pair transport and tilting over quiver algebras.

The package computes, entirely in exact arithmetic over small prime
fields, how torsion pairs on a module category move across the corner
localization A-mod -> eAe-mod and how they tilt to hearts of the
induced t-structures, with every step verified on exhaustively
enumerated desk-scale universes.
"""

from .linalg import Field, Mat, Subspace

__version__ = "0.1.0"

__all__ = ["Field", "Mat", "Subspace", "__version__"]
