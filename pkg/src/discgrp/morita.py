"""Desk-scale Morita equivalence of graph correspondences.

The source correspondence F lives over the vertex algebra B.  An equivalence
bimodule X is fixed by choosing a rank k_v per vertex, which makes the
companion algebra A the direct sum of the matrix algebras M_{k_v} and the
companion correspondence E the amplification of F by those ranks: the block
of E at edge e is the k_r(e) x k_s(e) amplification of the edge line.

With the canonical index ordering, the correspondence isomorphism W from
E (x)_A X onto X (x)_B F is the identity permutation of the shared basis
(e, i) with i < k_r(e); its reverse W' realizes the balanced contraction
back to F.  Transport of an intertwiner then tensors each edge block with
I_{k_r(e)}, and the reverse transport averages the diagonal copies, which
is exact on the whole target intertwining space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Protocol

import numpy as np

from . import intertwiners
from .correspondence import CorrespondenceContext
from .disc_group import DiscAutomorphism
from .linalg import DEFAULT_TOL, Tolerance, as_cmatrix, nullspace_basis, operator_norm


class RankZeroError(ValueError):
    pass


class BallMap(Protocol):
    def apply(self, point, tol: Tolerance = DEFAULT_TOL) -> np.ndarray: ...


class MoritaContext:
    """Equivalence bimodule data: ranks, induced spaces, and W."""

    def __init__(self, ctx_F: CorrespondenceContext, ranks: Mapping[str, int]):
        for v in ctx_F.graph.vertices:
            if int(ranks.get(v, 0)) < 1:
                raise RankZeroError(f"rank at vertex {v} must be >= 1")
        self.ctx = ctx_F
        self.ranks = {v: int(ranks[v]) for v in ctx_F.graph.vertices}

        self._xh_offset: dict[str, int] = {}
        off = 0
        for v in ctx_F.graph.vertices:
            self._xh_offset[v] = off
            off += self.ranks[v] * ctx_F.mult[v]
        self.dim_XH = off

        self._exh_offset: dict[str, int] = {}
        off = 0
        for e in ctx_F.graph.edges:
            self._exh_offset[e.name] = off
            off += self.ranks[e.rng] * ctx_F.mult[e.src]
        self.dim_EXH = off

        # Both E (x)_A X and X (x)_B F are ordered as the direct sum over
        # edges of C^{k_r(e)}, so W is the identity permutation.
        self.w_dim = sum(self.ranks[e.rng] for e in ctx_F.graph.edges)
        self.w_permutation = list(range(self.w_dim))

    def xh_slice(self, v: str) -> slice:
        o = self._xh_offset[v]
        return slice(o, o + self.ranks[v] * self.ctx.mult[v])

    def exh_slice(self, name: str) -> slice:
        e = self.ctx.edge(name)
        o = self._exh_offset[name]
        return slice(o, o + self.ranks[e.rng] * self.ctx.mult[e.src])

    def summary(self) -> dict:
        return {
            "ranks": dict(self.ranks),
            "dim_XH": self.dim_XH,
            "dim_EXH": self.dim_EXH,
            "W": self.w_permutation,
        }


def build_morita(
    ctx_F: CorrespondenceContext, ranks: Mapping[str, int]
) -> MoritaContext:
    return MoritaContext(ctx_F, ranks)


def induced_rep(mctx: MoritaContext, a: Mapping[str, complex]) -> np.ndarray:
    """The representation of the scalar part of A induced by X on X (x) H."""
    M = np.zeros((mctx.dim_XH, mctx.dim_XH), dtype=complex)
    for v in mctx.ctx.graph.vertices:
        s = mctx.xh_slice(v)
        M[s, s] = complex(a.get(v, 0)) * np.eye(s.stop - s.start)
    return M


def companion_algebra_units(
    mctx: MoritaContext,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs (sigma^X(x), phi_E(x) (x) I) for the matrix units x of the
    companion algebra A = sum_v M_{k_v}."""
    ctx = mctx.ctx
    out = []
    for v in ctx.graph.vertices:
        k = mctx.ranks[v]
        for p in range(k):
            for q in range(k):
                unit = np.zeros((k, k), dtype=complex)
                unit[p, q] = 1.0
                S = np.zeros((mctx.dim_XH, mctx.dim_XH), dtype=complex)
                s = mctx.xh_slice(v)
                S[s, s] = np.kron(unit, np.eye(ctx.mult[v]))
                P = np.zeros((mctx.dim_EXH, mctx.dim_EXH), dtype=complex)
                for e in ctx.graph.edges_with_range(v):
                    es = mctx.exh_slice(e.name)
                    P[es, es] = np.kron(unit, np.eye(ctx.mult[e.src]))
                out.append((S, P))
    return out


def is_target_intertwiner(
    mctx: MoritaContext, M, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Intertwining test for (E, sigma^X), over the full companion algebra."""
    A = as_cmatrix(M)
    if A.shape != (mctx.dim_XH, mctx.dim_EXH):
        raise ValueError(
            f"expected shape {(mctx.dim_XH, mctx.dim_EXH)}, got {A.shape}"
        )
    for S, P in companion_algebra_units(mctx):
        if operator_norm(A @ P - S @ A) > tol.abs_tol:
            return False
    return True


def transport(mctx: MoritaContext, eta_star) -> np.ndarray:
    """eta*^X = (I_X (x) eta*)(W (x) I_H): each edge block tensored with
    I_{k_r(e)}.  Isometric for the operator norm."""
    ctx = mctx.ctx
    es = as_cmatrix(eta_star)
    M = np.zeros((mctx.dim_XH, mctx.dim_EXH), dtype=complex)
    for e in ctx.graph.edges:
        B = es[ctx.vertex_slice(e.rng), ctx.edge_slice(e.name)]
        M[mctx.xh_slice(e.rng), mctx.exh_slice(e.name)] = np.kron(
            np.eye(mctx.ranks[e.rng]), B
        )
    return M


def untransport(mctx: MoritaContext, M) -> np.ndarray:
    """Reverse transport via W': contract the X legs by averaging the
    k_r(e) diagonal copies of each edge block.  Exact inverse of transport
    on the target intertwining space."""
    ctx = mctx.ctx
    A = as_cmatrix(M)
    out = np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex)
    for e in ctx.graph.edges:
        k = mctx.ranks[e.rng]
        mr, ms = ctx.mult[e.rng], ctx.mult[e.src]
        blk = A[mctx.xh_slice(e.rng), mctx.exh_slice(e.name)]
        acc = np.zeros((mr, ms), dtype=complex)
        for i in range(k):
            acc += blk[i * mr:(i + 1) * mr, i * ms:(i + 1) * ms]
        out[ctx.vertex_slice(e.rng), ctx.edge_slice(e.name)] = acc / k
    return out


def target_space_basis(
    mctx: MoritaContext, tol: Tolerance = DEFAULT_TOL
) -> list[np.ndarray]:
    """Basis of the target intertwining space solved directly from the
    intertwining constraints (independent of the transport map)."""
    n = mctx.dim_XH * mctx.dim_EXH
    if n == 0:
        return []
    units = companion_algebra_units(mctx)
    cols = []
    for idx in range(n):
        M = np.zeros(n, dtype=complex)
        M[idx] = 1.0
        M = M.reshape(mctx.dim_XH, mctx.dim_EXH)
        cols.append(np.concatenate([(M @ P - S @ M).ravel() for S, P in units]))
    L = np.column_stack(cols)
    return [x.reshape(mctx.dim_XH, mctx.dim_EXH) for x in nullspace_basis(L, tol)]


@dataclass(frozen=True)
class TransportedAutomorphism:
    """The image of a source-ball automorphism under the transport functor:
    acts on the target ball as transport . g . untransport."""

    mctx: MoritaContext
    source: BallMap

    def apply(self, point, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        return transport(
            self.mctx, self.source.apply(untransport(self.mctx, point), tol)
        )


@dataclass(frozen=True)
class PulledBackAutomorphism:
    """The image of a target-ball automorphism under the reverse functor:
    acts on the source ball as untransport . g . transport."""

    mctx: MoritaContext
    target: BallMap

    def apply(self, point, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        return untransport(
            self.mctx, self.target.apply(transport(self.mctx, point), tol)
        )


def functor_F(mctx: MoritaContext, g: BallMap) -> TransportedAutomorphism:
    return TransportedAutomorphism(mctx, g)


def functor_G(mctx: MoritaContext, g: BallMap) -> PulledBackAutomorphism:
    return PulledBackAutomorphism(mctx, g)


def naturality_defect(
    mctx: MoritaContext,
    g: DiscAutomorphism,
    eta1,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[float, float]:
    """Residuals of the two naturality squares of the category equivalence.

    The unit square compares the round trip of g(eta1*) with the pulled-back
    composite applied to the round trip of eta1*; the counit square does the
    mirrored comparison on the target side.
    """
    eta1 = as_cmatrix(eta1)

    def round_trip(p):
        return untransport(mctx, transport(mctx, p))

    eta2 = g.apply(eta1, tol)
    gf = functor_G(mctx, functor_F(mctx, g))
    eps_res = operator_norm(round_trip(eta2) - gf.apply(round_trip(eta1), tol))

    tg = functor_F(mctx, g)
    fg = functor_F(mctx, functor_G(mctx, tg))
    t1 = transport(mctx, eta1)
    lam_res = operator_norm(
        fg.apply(transport(mctx, untransport(mctx, t1)), tol) - tg.apply(t1, tol)
    )
    return eps_res, lam_res
