import numpy as np
import pytest

from discgrp.correspondence import DirectedGraph, Edge, build_context


@pytest.fixture
def scalar_ctx():
    """One vertex, one loop, multiplicity 1: the classical unit disc."""
    g = DirectedGraph(("v1",), (Edge("e1", "v1", "v1"),))
    return build_context(g, {"v1": 1})


@pytest.fixture
def two_ctx():
    """Loop at v1 plus an edge v1 -> v2, multiplicities (2, 1)."""
    g = DirectedGraph(
        ("v1", "v2"),
        (Edge("e1", "v1", "v1"), Edge("e2", "v1", "v2")),
    )
    return build_context(g, {"v1": 2, "v2": 1})


@pytest.fixture
def cycle_ctx():
    """Loop-free two-cycle, multiplicities (2, 1)."""
    g = DirectedGraph(
        ("v1", "v2"),
        (Edge("e1", "v1", "v2"), Edge("e2", "v2", "v1")),
    )
    return build_context(g, {"v1": 2, "v2": 1})


@pytest.fixture
def big_ctx():
    """Three vertices, five edges, mixed multiplicities, no sources."""
    g = DirectedGraph(
        ("v1", "v2", "v3"),
        (
            Edge("e1", "v1", "v1"),
            Edge("e2", "v1", "v2"),
            Edge("e3", "v2", "v3"),
            Edge("e4", "v3", "v1"),
            Edge("e5", "v2", "v2"),
        ),
    )
    return build_context(g, {"v1": 2, "v2": 3, "v3": 1})


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
