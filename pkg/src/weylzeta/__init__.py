"""Exact computations around affine Coxeter groups: Poincare series,
Hecke algebras and twisted series, straight-strip factorizations and
their determinant identities, Macdonald exponent tables, and Ihara-style
zeta functions of graphs and torus quotients."""

from . import coxeter, hecke, rootsys, series, strips, zeta

__version__ = "0.1.0"

__all__ = ["coxeter", "series", "hecke", "strips", "rootsys", "zeta", "__version__"]
