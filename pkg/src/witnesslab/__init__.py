"""Numerical optimality checks for decomposable entanglement witnesses."""
from .bipartite import (
    BipartiteOperator,
    ProductVector,
    embed,
    partial_conjugate,
    partial_transpose,
    product_overlap,
)
from .matrix_core import Subspace, orthogonal_complement, orthonormalize
from .product_search import SeesawConfig

__version__ = "0.1.0"
