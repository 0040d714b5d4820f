"""Wiener index of the Sierpinski carpet graphs.

Two independent routes to the same numbers: a closed-form distance on vertex
words (:mod:`carpet_wiener.metric`) summed over canonical vertices, and
breadth-first search on the explicitly glued graph (:mod:`carpet_wiener.oracle`).
"""

from .engine import (
    ValidationReport,
    WienerReport,
    make_table,
    validate,
    wiener_both,
    wiener_formula,
    wiener_oracle,
)
from .metric import DistanceTrace, PairMetric, distance
from .oracle import AdjacencyGraph, bfs_from, build_graph, oracle_wiener
from .words import (
    LatticePoint,
    LevelCapError,
    VertexTable,
    Word,
    WordParseError,
    build_vertex_table,
    compare_words,
    parse_word,
    word_to_point,
)

__version__ = "0.1.0"
