"""Exact-arithmetic cohomology of matrix-valued forms over simplicial bases."""

from .scalars import GaussianRational, gr

__all__ = ["GaussianRational", "gr"]
__version__ = "0.1.0"
