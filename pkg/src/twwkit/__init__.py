"""Twin-width variants, clique-width expressions, rank-width and H-coloring counts.

Submodules:

* :mod:`twwkit.graphcore` -- graphs, text format, generators
* :mod:`twwkit.trigraph` -- trigraphs, contraction sequences, width measures
* :mod:`twwkit.cwexpr` -- k-expressions and exact (linear) clique-width
* :mod:`twwkit.rankwidth` -- cut-rank and exact (linear) rank-width
* :mod:`twwkit.transform` -- certificate conversions
* :mod:`twwkit.homcount` -- counting homomorphisms
"""

from .errors import BudgetExceeded, GraphError, InvalidCertificate, ParseError, TwwkitError
from .graphcore import Graph, parse_graph, serialize_graph
from .trigraph import ContractionSequence, exact_width, sequence_width

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ContractionSequence",
    "Graph",
    "GraphError",
    "InvalidCertificate",
    "ParseError",
    "TwwkitError",
    "exact_width",
    "parse_graph",
    "sequence_width",
    "serialize_graph",
]
