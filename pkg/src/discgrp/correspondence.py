"""Finite-dimensional realization of a graph correspondence.

A directed graph with vertex multiplicities determines the algebra A of
functions on vertices, the edge module E, the representation space
H = sum_v H_v with dim H_v = m_v, the dilated space E (x) H = sum_e H_s(e),
and the two actions sigma(a) and phi(a) (x) I as concrete block matrices.

Vertex and edge orderings are fixed by input order and define every block
layout downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np


class GraphSpecError(ValueError):
    """Malformed graph description (duplicate names, bad references)."""


class UnknownVertexError(GraphSpecError):
    pass


class ZeroMultiplicityError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    rng: str


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphSpecError("duplicate vertex names")
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise GraphSpecError("duplicate edge names")
        declared = set(self.vertices)
        for e in self.edges:
            if e.src not in declared:
                raise UnknownVertexError(f"edge {e.name}: unknown source {e.src}")
            if e.rng not in declared:
                raise UnknownVertexError(f"edge {e.name}: unknown range {e.rng}")

    @property
    def has_sources(self) -> bool:
        """True when some vertex receives no edge.

        The isometry structure theorem assumes a graph without sources, so
        suites relying on it refuse such graphs.
        """
        return bool(self.source_vertices())

    def source_vertices(self) -> list[str]:
        targets = {e.rng for e in self.edges}
        return [v for v in self.vertices if v not in targets]

    def loops(self) -> list[Edge]:
        return [e for e in self.edges if e.src == e.rng]

    def edges_with_range(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.rng == v]


class CorrespondenceContext:
    """Immutable bundle of graph data plus block offset tables.

    H decomposes as the direct sum over vertices of C^{m_v}; E (x) H as the
    direct sum over edges of H_{s(e)}.
    """

    def __init__(self, graph: DirectedGraph, multiplicities: Mapping[str, int]):
        for v in graph.vertices:
            if v not in multiplicities:
                raise UnknownVertexError(f"no multiplicity for vertex {v}")
        for v, m in multiplicities.items():
            if v not in graph.vertices:
                raise UnknownVertexError(f"multiplicity for unknown vertex {v}")
            if int(m) < 1:
                raise ZeroMultiplicityError(f"vertex {v} has multiplicity {m}")
        self.graph = graph
        self.mult = {v: int(multiplicities[v]) for v in graph.vertices}

        self._vertex_offset: dict[str, int] = {}
        off = 0
        for v in graph.vertices:
            self._vertex_offset[v] = off
            off += self.mult[v]
        self.dim_H = off

        self._edge_offset: dict[str, int] = {}
        off = 0
        for e in graph.edges:
            self._edge_offset[e.name] = off
            off += self.mult[e.src]
        self.dim_EH = off

    def vertex_slice(self, v: str) -> slice:
        o = self._vertex_offset[v]
        return slice(o, o + self.mult[v])

    def edge_slice(self, name: str) -> slice:
        e = self.edge(name)
        o = self._edge_offset[name]
        return slice(o, o + self.mult[e.src])

    def edge(self, name: str) -> Edge:
        for e in self.graph.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def __repr__(self) -> str:
        return (
            f"CorrespondenceContext(|G0|={len(self.graph.vertices)}, "
            f"|G1|={len(self.graph.edges)}, dim_H={self.dim_H}, "
            f"dim_EH={self.dim_EH})"
        )


def build_context(
    graph: DirectedGraph, multiplicities: Mapping[str, int]
) -> CorrespondenceContext:
    return CorrespondenceContext(graph, multiplicities)


def sigma_op(ctx: CorrespondenceContext, a: Mapping[str, complex]) -> np.ndarray:
    """sigma(a): block-diagonal a(v) * I on each H_v."""
    M = np.zeros((ctx.dim_H, ctx.dim_H), dtype=complex)
    for v in ctx.graph.vertices:
        s = ctx.vertex_slice(v)
        M[s, s] = complex(a.get(v, 0)) * np.eye(ctx.mult[v])
    return M


def phi_tensor_op(ctx: CorrespondenceContext, a: Mapping[str, complex]) -> np.ndarray:
    """phi(a) (x) I: block-diagonal a(r(e)) * I on each edge block H_s(e)."""
    M = np.zeros((ctx.dim_EH, ctx.dim_EH), dtype=complex)
    for e in ctx.graph.edges:
        s = ctx.edge_slice(e.name)
        M[s, s] = complex(a.get(e.rng, 0)) * np.eye(ctx.mult[e.src])
    return M


def algebra_basis(ctx: CorrespondenceContext) -> list[dict[str, complex]]:
    """Indicator functions of vertices; a linear basis of A."""
    return [{v: 1.0 + 0j} for v in ctx.graph.vertices]


def commutant_basis(ctx: CorrespondenceContext) -> list[np.ndarray]:
    """Matrix-unit basis of sigma(A)' = sum_v B(H_v), dimension sum_v m_v^2."""
    out = []
    for v in ctx.graph.vertices:
        s = ctx.vertex_slice(v)
        m = ctx.mult[v]
        for i in range(m):
            for j in range(m):
                M = np.zeros((ctx.dim_H, ctx.dim_H), dtype=complex)
                M[s.start + i, s.start + j] = 1.0
                out.append(M)
    return out


def lift_commutant(ctx: CorrespondenceContext, c: np.ndarray) -> np.ndarray:
    """I_E (x) c on E (x) H: block c|_{H_s(e)} on each edge block."""
    M = np.zeros((ctx.dim_EH, ctx.dim_EH), dtype=complex)
    for e in ctx.graph.edges:
        es = ctx.edge_slice(e.name)
        vs = ctx.vertex_slice(e.src)
        M[es, es] = c[vs, vs]
    return M


def graph_from_json(obj: Mapping) -> tuple[DirectedGraph, dict[str, int]]:
    """Parse the graph JSON schema.

    Schema: {"vertices": ["v1", ...],
             "edges": [{"name": "e1", "src": "v1", "rng": "v1"}, ...],
             "multiplicities": {"v1": 2, ...}}
    """
    try:
        vertices = tuple(str(v) for v in obj["vertices"])
        edges = tuple(
            Edge(str(e["name"]), str(e["src"]), str(e["rng"])) for e in obj["edges"]
        )
        mult = {str(k): int(m) for k, m in obj["multiplicities"].items()}
    except (KeyError, TypeError) as exc:
        raise GraphSpecError(f"graph JSON missing or malformed field: {exc}") from exc
    return DirectedGraph(vertices, edges), mult


def load_graph(path: str) -> tuple[DirectedGraph, dict[str, int]]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    obj = json.loads(text)
    return graph_from_json(obj)
