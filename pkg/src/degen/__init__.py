"""Planar degenerations of degree-6 surfaces.

Tools for the classification of planar degenerations: exact-rational complex
geometry, the induced curve/line combinatorics, finitely presented quotients
of the braid-monodromy group, coset enumeration, Chern invariants, and an
isomorph-free enumerator that rebuilds the degree-6 table from scratch.
"""

__version__ = "0.1.0"
