"""The intertwining space and its open unit ball.

An intertwiner is a matrix eta*: E (x) H -> H with
eta* (phi(a) (x) I) = sigma(a) eta* for every a.  Over a graph
correspondence this is equivalent to a block sparsity pattern: the (v, e)
block may be nonzero only when r(e) = v.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correspondence import CorrespondenceContext, algebra_basis, lift_commutant
from .correspondence import commutant_basis as _commutant_basis
from .correspondence import phi_tensor_op, sigma_op
from .linalg import DEFAULT_TOL, Tolerance, as_cmatrix, nullspace_basis, operator_norm


class ShapeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class IntertwinerPattern:
    """Boolean allowance over (vertex, edge) cells: allowed iff r(e) = v."""

    ctx: CorrespondenceContext

    def allowed(self, v: str, edge_name: str) -> bool:
        return self.ctx.edge(edge_name).rng == v

    def cells(self) -> list[tuple[str, str]]:
        """Allowed (vertex, edge) pairs, in block order."""
        return [(e.rng, e.name) for e in self.ctx.graph.edges]

    def mask(self) -> np.ndarray:
        M = np.zeros((self.ctx.dim_H, self.ctx.dim_EH), dtype=bool)
        for v, e in self.cells():
            M[self.ctx.vertex_slice(v), self.ctx.edge_slice(e)] = True
        return M

    @property
    def dim(self) -> int:
        """Complex dimension of the intertwining space."""
        c = self.ctx
        return sum(c.mult[e.rng] * c.mult[e.src] for e in c.graph.edges)


def pattern(ctx: CorrespondenceContext) -> IntertwinerPattern:
    return IntertwinerPattern(ctx)


def basis(ctx: CorrespondenceContext) -> list[np.ndarray]:
    """Matrix-unit basis of the intertwining space (orthonormal, Frobenius)."""
    mask = pattern(ctx).mask()
    out = []
    for i in range(ctx.dim_H):
        for j in range(ctx.dim_EH):
            if mask[i, j]:
                B = np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex)
                B[i, j] = 1.0
                out.append(B)
    return out


def is_intertwiner(
    ctx: CorrespondenceContext, M, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Check the relation M (phi(a) (x) I) = sigma(a) M on all indicators a."""
    A = as_cmatrix(M)
    if A.shape != (ctx.dim_H, ctx.dim_EH):
        raise ShapeMismatchError(
            f"expected shape {(ctx.dim_H, ctx.dim_EH)}, got {A.shape}"
        )
    for a in algebra_basis(ctx):
        res = A @ phi_tensor_op(ctx, a) - sigma_op(ctx, a) @ A
        if operator_norm(res) > tol.abs_tol:
            return False
    return True


def sample_disc(
    ctx: CorrespondenceContext,
    seed,
    radius_cap: float,
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Seeded point of the open ball with ||eta*|| <= radius_cap.

    Allowed blocks are filled with complex Gaussians and the whole matrix is
    rescaled to the cap.  `seed` may be an int or a numpy Generator.
    """
    if not 0 < radius_cap <= tol.radius_cap:
        raise ValueError(
            f"radius_cap must lie in (0, {tol.radius_cap}], got {radius_cap}"
        )
    rng = np.random.default_rng(seed)
    mask = pattern(ctx).mask()
    M = np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex)
    n = int(mask.sum())
    if n == 0:
        return M
    vals = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    M[mask] = vals
    return M * (radius_cap / (operator_norm(M) + 1e-15))


def center_basis(
    ctx: CorrespondenceContext, tol: Tolerance = DEFAULT_TOL
) -> list[np.ndarray]:
    """Basis of the central intertwiners.

    Solves the linear system c . eta* = eta* . (I_E (x) c) over the
    intertwining space, for every matrix unit c of sigma(A)'.  The solution
    is supported on loop edges with blocks that are scalar multiples of the
    identity.
    """
    b = basis(ctx)
    if not b:
        return []
    comm = _commutant_basis(ctx)
    cols = []
    for bk in b:
        rows = [
            (c @ bk - bk @ lift_commutant(ctx, c)).ravel() for c in comm
        ]
        cols.append(np.concatenate(rows) if rows else np.zeros(0, dtype=complex))
    L = np.column_stack(cols)
    coeffs = nullspace_basis(L, tol)
    out = []
    for x in coeffs:
        M = sum(x[k] * b[k] for k in range(len(b)))
        out.append(M)
    return out


def center_of_E(ctx: CorrespondenceContext) -> list[np.ndarray]:
    """Basis of the module center of E: indicators of loop edges."""
    edges = list(ctx.graph.edges)
    out = []
    for k, e in enumerate(edges):
        if e.src == e.rng:
            vec = np.zeros(len(edges), dtype=complex)
            vec[k] = 1.0
            out.append(vec)
    return out


def distance_to_span(M, span: list[np.ndarray]) -> float:
    """Frobenius distance of M to the linear span of the given matrices."""
    A = as_cmatrix(M)
    if not span:
        return float(np.linalg.norm(A))
    Q = np.column_stack([s.ravel() for s in span])
    x, *_ = np.linalg.lstsq(Q, A.ravel(), rcond=None)
    return float(np.linalg.norm(A.ravel() - Q @ x))


def to_blocks_json(ctx: CorrespondenceContext, M) -> dict:
    """Serialize an intertwiner as {"blocks": {"v,e": [[[re, im], ...], ...]}}."""
    A = as_cmatrix(M)
    blocks = {}
    for v, e in pattern(ctx).cells():
        B = A[ctx.vertex_slice(v), ctx.edge_slice(e)]
        blocks[f"{v},{e}"] = [
            [[float(z.real), float(z.imag)] for z in row] for row in B
        ]
    return {"blocks": blocks}


def from_blocks_json(ctx: CorrespondenceContext, obj: dict) -> np.ndarray:
    M = np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex)
    for key, rows in obj["blocks"].items():
        v, e = key.split(",")
        B = np.array([[complex(re, im) for re, im in row] for row in rows])
        M[ctx.vertex_slice(v), ctx.edge_slice(e)] = B
    return M
