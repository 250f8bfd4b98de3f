"""qweyl: exact verification of quantum Weyl group identities.

Laurent-polynomial linear algebra on tensor-power weight modules, braid
operators with an empirically derived grading convention, a formal
term rewriter cross-checked against the matrix oracle, and divided
difference / colored crossing calculus on polynomial representations.
"""

from .qalg import LaurentPoly, RationalFunction, qint, qfact, qbinom
from .cartan import SimpleGraph, CartanData, Weight, parse_graph, path_graph
from .tensor_rep import WeightModule, OperatorMatrix

__all__ = [
    "LaurentPoly", "RationalFunction", "qint", "qfact", "qbinom",
    "SimpleGraph", "CartanData", "Weight", "parse_graph", "path_graph",
    "WeightModule", "OperatorMatrix",
]

__version__ = "0.1.0"
