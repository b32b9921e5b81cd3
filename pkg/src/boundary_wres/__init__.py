"""Exact evaluation of the boundary residue form Omega_3 at a boundary point of a 4-manifold."""

__version__ = "0.1.0"
