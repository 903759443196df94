"""The automorphism group of the intertwiner unit ball.

Every biholomorphic automorphism g decomposes uniquely as g = omega . g_gamma
with omega a linear isometry eta* -> u eta* v* and g_gamma the Moebius
involution swapping 0 and gamma*.  Automorphisms are stored canonically as
the pair (omega, gamma*); composition and inversion go through the 2x2 block
matrix representation and re-canonicalize, which makes decomposition
uniqueness directly testable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intertwiners
from .correspondence import CorrespondenceContext
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_cmatrix,
    hermitian_inv_sqrt,
    hermitian_sqrt,
    operator_norm,
)


class SingularResolventError(ArithmeticError):
    """I - eta* gamma not invertible; signals an input outside the open ball."""


class GIsIdentityError(ValueError):
    pass


class HypothesesNotMetError(ValueError):
    pass


def defect_ops(
    gamma_star, tol: Tolerance = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(D_gamma, D_gamma^-1, D_gamma*, D_gamma*^-1) for a strict contraction.

    D_gamma = (I_H - gamma* gamma)^(1/2) on H and
    D_gamma* = (I_EH - gamma gamma*)^(1/2) on E (x) H, via eigendecomposition.
    """
    gs = as_cmatrix(gamma_star)
    g = gs.conj().T
    PH = np.eye(gs.shape[0], dtype=complex) - gs @ g
    PE = np.eye(gs.shape[1], dtype=complex) - g @ gs
    return (
        hermitian_sqrt(PH, tol),
        hermitian_inv_sqrt(PH, tol),
        hermitian_sqrt(PE, tol),
        hermitian_inv_sqrt(PE, tol),
    )


def moebius_apply(gamma_star, eta_star, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """g_gamma(eta*) = D_gamma (I - eta* gamma)^(-1) (gamma* - eta*) D_gamma*^(-1)."""
    gs = as_cmatrix(gamma_star)
    es = as_cmatrix(eta_star)
    Dg, _, _, Dgs_inv = defect_ops(gs, tol)
    resolvent = np.eye(gs.shape[0], dtype=complex) - es @ gs.conj().T
    if resolvent.size:
        smin = np.linalg.svd(resolvent, compute_uv=False)[-1]
        if smin <= tol.abs_tol:
            raise SingularResolventError(
                "I - eta* gamma is numerically singular; inputs are not "
                "strict contractions"
            )
    return Dg @ np.linalg.solve(resolvent, (gs - es)) @ Dgs_inv


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase normalization."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@dataclass(frozen=True)
class AdmissibleIsometry:
    """Linear isometry omega(eta*) = u eta* v*.

    u is a vertex-block-diagonal unitary on H; v* is a unitary on E (x) H
    whose (e_i, e_j) block vanishes unless r(e_i) = r(e_j), so that the
    intertwiner block pattern is preserved.
    """

    ctx: CorrespondenceContext
    u: np.ndarray
    vstar: np.ndarray

    def apply(self, eta_star) -> np.ndarray:
        return self.u @ as_cmatrix(eta_star) @ self.vstar

    def inverse(self) -> "AdmissibleIsometry":
        return AdmissibleIsometry(self.ctx, self.u.conj().T, self.vstar.conj().T)

    @classmethod
    def identity(cls, ctx: CorrespondenceContext) -> "AdmissibleIsometry":
        return cls(ctx, np.eye(ctx.dim_H, dtype=complex),
                   np.eye(ctx.dim_EH, dtype=complex))

    @classmethod
    def random(cls, ctx: CorrespondenceContext, rng) -> "AdmissibleIsometry":
        """Haar-random admissible isometry: per-vertex u blocks and a Haar
        unitary on each range class of edges."""
        rng = np.random.default_rng(rng)
        u = np.zeros((ctx.dim_H, ctx.dim_H), dtype=complex)
        for v in ctx.graph.vertices:
            s = ctx.vertex_slice(v)
            u[s, s] = haar_unitary(ctx.mult[v], rng)
        vstar = np.zeros((ctx.dim_EH, ctx.dim_EH), dtype=complex)
        for v in ctx.graph.vertices:
            cls_edges = ctx.graph.edges_with_range(v)
            if not cls_edges:
                continue
            sizes = [ctx.mult[e.src] for e in cls_edges]
            U = haar_unitary(sum(sizes), rng)
            row = 0
            for e_i, n_i in zip(cls_edges, sizes):
                col = 0
                for e_j, n_j in zip(cls_edges, sizes):
                    vstar[ctx.edge_slice(e_i.name), ctx.edge_slice(e_j.name)] = (
                        U[row:row + n_i, col:col + n_j]
                    )
                    col += n_j
                row += n_i
        return cls(ctx, u, vstar)


def admissibility_defect(ctx: CorrespondenceContext, u, vstar) -> float:
    """Max violation of the structure conditions on (u, v*).

    Covers: u unitary and vertex-block-diagonal; v* supported on range
    classes (condition 1); v* v = I on and off the diagonal (conditions 2
    and 3).
    """
    u = as_cmatrix(u)
    vstar = as_cmatrix(vstar)
    defect = operator_norm(u @ u.conj().T - np.eye(ctx.dim_H))
    off_u = u.copy()
    for v in ctx.graph.vertices:
        s = ctx.vertex_slice(v)
        off_u[s, s] = 0.0
    defect = max(defect, operator_norm(off_u))
    off_v = vstar.copy()
    for ei in ctx.graph.edges:
        for ej in ctx.graph.edges:
            if ei.rng == ej.rng:
                off_v[ctx.edge_slice(ei.name), ctx.edge_slice(ej.name)] = 0.0
    defect = max(defect, operator_norm(off_v))
    defect = max(
        defect, operator_norm(vstar @ vstar.conj().T - np.eye(ctx.dim_EH))
    )
    return defect


def preservation_defect(ctx: CorrespondenceContext, u, vstar) -> float:
    """Max off-pattern leakage of eta* -> u eta* v* over an intertwiner basis."""
    mask = intertwiners.pattern(ctx).mask()
    worst = 0.0
    for b in intertwiners.basis(ctx):
        out = as_cmatrix(u) @ b @ as_cmatrix(vstar)
        worst = max(worst, float(np.abs(out[~mask]).max()) if (~mask).any() else 0.0)
    return worst


@dataclass(frozen=True)
class DiscAutomorphism:
    """Canonical pair (omega, gamma*) representing g = omega . g_gamma.

    gamma* is the unique point mapped to 0; omega is the isometric part.
    """

    ctx: CorrespondenceContext
    omega: AdmissibleIsometry
    gamma_star: np.ndarray

    def apply(self, eta_star, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        return self.omega.apply(moebius_apply(self.gamma_star, eta_star, tol))

    @classmethod
    def identity(cls, ctx: CorrespondenceContext) -> "DiscAutomorphism":
        # id = (-id) . g_0, so the isometric part is u = -I, v* = I.
        w = AdmissibleIsometry(
            ctx, -np.eye(ctx.dim_H, dtype=complex), np.eye(ctx.dim_EH, dtype=complex)
        )
        return cls(ctx, w, np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex))

    @classmethod
    def moebius(cls, ctx: CorrespondenceContext, gamma_star) -> "DiscAutomorphism":
        return cls(ctx, AdmissibleIsometry.identity(ctx), as_cmatrix(gamma_star))

    @classmethod
    def from_isometry(cls, omega: AdmissibleIsometry) -> "DiscAutomorphism":
        ctx = omega.ctx
        return cls(ctx, omega, np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex))


def rep_blocks(
    ctx: CorrespondenceContext, gamma_star, u, vstar, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Assemble the 2x2 block matrix representing omega . g_gamma on
    homogeneous coordinates:

        [[D_g^-1 u*,    gamma* D_g*^-1 v*],
         [-gamma D_g^-1 u*,  -D_g*^-1 v*]]
    """
    gs = as_cmatrix(gamma_star)
    g = gs.conj().T
    _, Dg_inv, _, Dgs_inv = defect_ops(gs, tol)
    ustar = as_cmatrix(u).conj().T
    T = np.zeros((ctx.dim_H + ctx.dim_EH,) * 2, dtype=complex)
    h = ctx.dim_H
    T[:h, :h] = Dg_inv @ ustar
    T[:h, h:] = gs @ Dgs_inv @ vstar
    T[h:, :h] = -g @ Dg_inv @ ustar
    T[h:, h:] = -Dgs_inv @ vstar
    return T


def canonical_from_blocks(
    ctx: CorrespondenceContext, T, tol: Tolerance = DEFAULT_TOL
) -> DiscAutomorphism:
    """Recover the canonical (omega, gamma*) from a block matrix in the
    representation group.

    gamma = -A21 A11^-1, then u* = D_gamma A11 and v* = -D_gamma* A22.
    """
    T = as_cmatrix(T)
    h = ctx.dim_H
    A11, A22 = T[:h, :h], T[h:, h:]
    gamma = -T[h:, :h] @ np.linalg.inv(A11)
    gamma_star = gamma.conj().T
    Dg, _, Dgs, _ = defect_ops(gamma_star, tol)
    u = (Dg @ A11).conj().T
    vstar = -(Dgs @ A22)
    return DiscAutomorphism(
        ctx, AdmissibleIsometry(ctx, u, vstar), gamma_star
    )


def rep_matrix_of(g: DiscAutomorphism, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    return rep_blocks(g.ctx, g.gamma_star, g.omega.u, g.omega.vstar, tol)


def compose(
    g2: DiscAutomorphism, g1: DiscAutomorphism, tol: Tolerance = DEFAULT_TOL
) -> DiscAutomorphism:
    """Canonical form of g2 . g1 (g1 applied first).

    Composition corresponds to the reversed matrix product T_g1 T_g2 acting
    on homogeneous coordinates.
    """
    T = rep_matrix_of(g1, tol) @ rep_matrix_of(g2, tol)
    return canonical_from_blocks(g1.ctx, T, tol)


def inverse(g: DiscAutomorphism, tol: Tolerance = DEFAULT_TOL) -> DiscAutomorphism:
    """Canonical form of g^-1, assembled from the closed-form inverse blocks
    [[u D_g^-1, u gamma* D_g*^-1], [-v gamma D_g^-1, -v D_g*^-1]]."""
    gs = g.gamma_star
    _, Dg_inv, _, Dgs_inv = defect_ops(gs, tol)
    u = g.omega.u
    v = g.omega.vstar.conj().T
    h = g.ctx.dim_H
    T = np.zeros((h + g.ctx.dim_EH,) * 2, dtype=complex)
    T[:h, :h] = u @ Dg_inv
    T[:h, h:] = u @ gs @ Dgs_inv
    T[h:, :h] = -v @ gs.conj().T @ Dg_inv
    T[h:, h:] = -v @ Dgs_inv
    return canonical_from_blocks(g.ctx, T, tol)


def canonical_decomposition(
    ctx: CorrespondenceContext,
    factors: list[DiscAutomorphism],
    tol: Tolerance = DEFAULT_TOL,
) -> DiscAutomorphism:
    """Canonical (omega, gamma*) of a composite given as a list of factors,
    outermost first: factors [f1, f2, f3] denote f1 . f2 . f3."""
    if not factors:
        return DiscAutomorphism.identity(ctx)
    g = factors[-1]
    for f in reversed(factors[:-1]):
        g = compose(f, g, tol)
    return g


def omega_distance(
    ctx: CorrespondenceContext, w1: AdmissibleIsometry, w2: AdmissibleIsometry
) -> float:
    """Extensional distance of two isometric parts over an intertwiner basis.

    Distinct (u, v*) pairs may induce the same map, so equality is never
    decided by comparing the matrices themselves.
    """
    worst = 0.0
    for b in intertwiners.basis(ctx):
        worst = max(worst, operator_norm(w1.apply(b) - w2.apply(b)))
    return worst


def is_identity(g: DiscAutomorphism, tol: Tolerance = DEFAULT_TOL) -> bool:
    if operator_norm(g.gamma_star) > tol.abs_tol * max(1, g.ctx.dim_H):
        return False
    ident = DiscAutomorphism.identity(g.ctx)
    return omega_distance(g.ctx, g.omega, ident.omega) <= tol.abs_tol * max(
        1, g.ctx.dim_H
    )


def random_automorphism(
    ctx: CorrespondenceContext,
    rng,
    radius_cap: float = 0.6,
    tol: Tolerance = DEFAULT_TOL,
) -> DiscAutomorphism:
    rng = np.random.default_rng(rng)
    omega = AdmissibleIsometry.random(ctx, rng)
    if ctx.graph.edges:
        gamma_star = intertwiners.sample_disc(ctx, rng, radius_cap, tol)
    else:
        gamma_star = np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex)
    return DiscAutomorphism(ctx, omega, gamma_star)


def commutator_defect(
    g: DiscAutomorphism,
    h: DiscAutomorphism,
    eta_star,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """||(g.h)(eta*) - (h.g)(eta*)||."""
    return operator_norm(
        g.apply(h.apply(eta_star, tol), tol) - h.apply(g.apply(eta_star, tol), tol)
    )


def noncommuting_witness(
    g: DiscAutomorphism,
    rng=None,
    tol: Tolerance = DEFAULT_TOL,
    trials: int = 50,
) -> DiscAutomorphism:
    """An automorphism h failing to commute with g; exists whenever g != id.

    If g^-1(0) = gamma* is nonzero, h = g_0 = -id works.  Otherwise g fixes
    0 and moves some sampled point p*, and h = g_p works.
    """
    ctx = g.ctx
    rng = np.random.default_rng(rng)
    if operator_norm(g.gamma_star) > tol.abs_tol * max(1, ctx.dim_H):
        return DiscAutomorphism.moebius(
            ctx, np.zeros((ctx.dim_H, ctx.dim_EH), dtype=complex)
        )
    for _ in range(trials):
        p = intertwiners.sample_disc(ctx, rng, min(0.6, tol.radius_cap), tol)
        if operator_norm(g.apply(p, tol) - p) > 1e-6:
            return DiscAutomorphism.moebius(ctx, p)
    raise GIsIdentityError("g acts as the identity on all sampled points")


def implements_hardy_automorphism(
    ctx: CorrespondenceContext, g: DiscAutomorphism, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Membership test for the Hardy-algebra automorphism subgroup.

    Requires (a) gamma* central, and (b) the isometric part to act as
    eta* -> eta* (u_E (x) I_H) for a unitary u_E on edge space preserving
    the loop span.  u_E is recovered by least squares over the pairs of
    edges with equal source.
    """
    dim = max(1, ctx.dim_H + ctx.dim_EH)
    cb = intertwiners.center_basis(ctx, tol)
    if intertwiners.distance_to_span(g.gamma_star, cb) > dim * tol.abs_tol:
        return False

    edges = list(ctx.graph.edges)
    n_e = len(edges)
    if n_e == 0:
        return True
    unknowns = [
        (i, j)
        for i in range(n_e)
        for j in range(n_e)
        if edges[i].src == edges[j].src
    ]
    b_list = intertwiners.basis(ctx)
    rows = []
    rhs = []
    for b in b_list:
        cols = []
        for (i, j) in unknowns:
            coeff = np.zeros_like(b)
            coeff[:, ctx.edge_slice(edges[j].name)] = b[:, ctx.edge_slice(edges[i].name)]
            cols.append(coeff.ravel())
        rows.append(np.column_stack(cols))
        rhs.append(g.omega.apply(b).ravel())
    A = np.vstack(rows)
    y = np.concatenate(rhs)
    x, *_ = np.linalg.lstsq(A, y, rcond=None)
    if np.linalg.norm(A @ x - y) > dim * max(tol.abs_tol, 1e-9):
        return False
    uE = np.zeros((n_e, n_e), dtype=complex)
    for (i, j), val in zip(unknowns, x):
        uE[i, j] = val
    if operator_norm(uE.conj().T @ uE - np.eye(n_e)) > 1e-8 * dim:
        return False
    loop_idx = [k for k, e in enumerate(edges) if e.src == e.rng]
    P = np.zeros((n_e, n_e))
    for k in loop_idx:
        P[k, k] = 1.0
    leak = operator_norm((np.eye(n_e) - P) @ uE @ P)
    leak = max(leak, operator_norm((np.eye(n_e) - P) @ uE.conj().T @ P))
    return leak <= 1e-8 * dim


@dataclass(frozen=True)
class NormalityWitness:
    """Certificate that the Hardy-automorphism subgroup is not normal.

    kind is "center_breaking" (an admissible omega moving a central point
    off the central span) or "isometry_subgroup" (the loop-free case, where
    the subgroup equals the isometries and a Moebius conjugation moves 0).
    """

    kind: str
    omega: AdmissibleIsometry
    gamma_star: np.ndarray
    certificate: float


def normality_witness(
    ctx: CorrespondenceContext,
    rng=None,
    tol: Tolerance = DEFAULT_TOL,
    max_trials: int = 500,
) -> NormalityWitness | None:
    """Search for a non-normality witness; None means inconclusive.

    Raises HypothesesNotMetError when the instance cannot carry a witness
    of either kind (no edges, or loops with all multiplicities 1).
    """
    rng = np.random.default_rng(rng)
    if not ctx.graph.edges:
        raise HypothesesNotMetError("graph has no edges; the ball is {0}")
    loops = ctx.graph.loops()
    if not loops:
        gamma_star = intertwiners.sample_disc(ctx, rng, 0.5, tol)
        cert = operator_norm(moebius_apply(gamma_star, -gamma_star, tol))
        omega = AdmissibleIsometry.random(ctx, rng)
        if cert <= 1e-3:
            return None
        return NormalityWitness("isometry_subgroup", omega, gamma_star, cert)
    if all(m == 1 for m in ctx.mult.values()):
        raise HypothesesNotMetError(
            "all multiplicities are 1; no isometry can move the center"
        )
    cb = intertwiners.center_basis(ctx, tol)
    if not cb:
        raise HypothesesNotMetError("central intertwiner space is trivial")
    gamma_star = 0.5 * cb[0] / operator_norm(cb[0])
    for _ in range(max_trials):
        omega = AdmissibleIsometry.random(ctx, rng)
        dist = intertwiners.distance_to_span(omega.apply(gamma_star), cb)
        if dist > 1e-3:
            return NormalityWitness("center_breaking", omega, gamma_star, dist)
    return None
