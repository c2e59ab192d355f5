"""Exact and numerical tools for invariant convex cones, Coxeter orbit hulls,
root decompositions, majorization and double extensions of Lie algebras."""

__version__ = "0.1.0"
