"""Exact enumeration of perfect quadratic forms with Voronoi's algorithm.

The package works with positive definite quadratic forms over the rationals
and classifies perfect forms, classically or inside a linear subspace of
invariant forms, entirely in exact arithmetic.
"""

from .forms import QuadForm
from .shortvec import MinData, minimum, vectors_below

__version__ = "0.1.0"

__all__ = ["QuadForm", "MinData", "minimum", "vectors_below", "__version__"]
