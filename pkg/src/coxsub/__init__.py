"""Subword complexes of finite Coxeter groups and the effect of braid moves.

The package builds the complex of a word/element pair, classifies what a
single braid move does to it (isomorphism, an edge subdivision chain in
either direction, or a common refinement), verifies the accompanying
h- and gamma-polynomial identities, and orders the reduced words of an
element by subdivision.
"""

from .backend import backend_name
from .coxeter import CoxeterMatrix, CoxeterSystem, GroupElement, Word

__version__ = "0.1.0"

__all__ = [
    "CoxeterMatrix",
    "CoxeterSystem",
    "GroupElement",
    "Word",
    "backend_name",
    "__version__",
]
