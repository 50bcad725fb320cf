"""Reduced Cosserat shell energy up to O(h^5) with a 3D quadrature oracle."""

__version__ = "0.1.0"
