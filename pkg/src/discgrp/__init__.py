"""Verification toolkit for automorphism groups of intertwiner unit balls
over finite graph correspondences."""

from .correspondence import (
    CorrespondenceContext,
    DirectedGraph,
    Edge,
    build_context,
    graph_from_json,
    load_graph,
)
from .disc_group import (
    AdmissibleIsometry,
    DiscAutomorphism,
    compose,
    inverse,
    moebius_apply,
    normality_witness,
)
from .linalg import DEFAULT_TOL, Tolerance

__version__ = "0.1.0"

__all__ = [
    "AdmissibleIsometry",
    "CorrespondenceContext",
    "DEFAULT_TOL",
    "DirectedGraph",
    "DiscAutomorphism",
    "Edge",
    "Tolerance",
    "build_context",
    "compose",
    "graph_from_json",
    "inverse",
    "load_graph",
    "moebius_apply",
    "normality_witness",
    "__version__",
]
