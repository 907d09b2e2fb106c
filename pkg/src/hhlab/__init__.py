"""Exact homological calculator for triangular algebras [A M; 0 B].

Computes Hochschild cohomology, Ext groups of bimodules, derivation Lie
algebras and Hilbert-Poincare series over Q or F_p, and mechanically checks
the reduction identities and long exact sequences that relate them.
"""

from .fields import Field, QQ, parse_field

__all__ = ["Field", "QQ", "parse_field"]
__version__ = "0.1.0"
