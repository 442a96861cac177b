"""Combinatorial verification toolkit for colored-polytope 5-manifolds,
their circle-valued Morse functions, fiber triangulations, and exact
integer homology."""

__version__ = "0.1.0"
