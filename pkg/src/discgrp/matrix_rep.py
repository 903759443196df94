"""Homogeneous coordinates, the 2x2 block matrix representation, and
pseudo-unitarity certification.

A point eta* is written in homogeneous coordinates [U  eta*] with U
invertible in sigma(A)'; automorphisms act on such classes by right
multiplication with a block matrix T.  The classes of those matrices form a
group under the reversed product [T] * [S] = [S T], and the map sending an
automorphism to its class is an isomorphism onto it.  Every representing
matrix is kappa-pseudo-unitary for kappa = diag(I_H, -I_EH).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import disc_group
from .correspondence import CorrespondenceContext
from .disc_group import DiscAutomorphism, defect_ops
from .linalg import DEFAULT_TOL, Tolerance, as_cmatrix, operator_norm


class SingularUError(ValueError):
    pass


@dataclass(frozen=True)
class PPoint:
    """Homogeneous coordinates (U, eta*); the class is invariant under left
    multiplication by invertible commutant elements."""

    U: np.ndarray
    eta_star: np.ndarray


@dataclass(frozen=True)
class RepMatrix:
    ctx: CorrespondenceContext
    matrix: np.ndarray

    @property
    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        h = self.ctx.dim_H
        T = self.matrix
        return T[:h, :h], T[:h, h:], T[h:, :h], T[h:, h:]


@dataclass(frozen=True)
class RepClass:
    """A representation matrix considered up to the extensional equivalence
    of its isometric part, with the reversed (op-group) product convention:
    op_product(a, b) carries the matrix b.matrix @ a.matrix."""

    rep: RepMatrix


def kappa(ctx: CorrespondenceContext) -> np.ndarray:
    """Signature operator diag(I_H, -I_EH)."""
    d = np.concatenate([np.ones(ctx.dim_H), -np.ones(ctx.dim_EH)])
    return np.diag(d).astype(complex)


def homogeneous(ctx: CorrespondenceContext, eta_star) -> PPoint:
    return PPoint(np.eye(ctx.dim_H, dtype=complex), as_cmatrix(eta_star))


def canonicalize(p: PPoint, tol: Tolerance = DEFAULT_TOL) -> PPoint:
    """Representative (I_H, U^-1 eta*); idempotent."""
    U = as_cmatrix(p.U)
    smin = np.linalg.svd(U, compute_uv=False)[-1] if U.size else 0.0
    if U.size and smin <= tol.abs_tol:
        raise SingularUError("first homogeneous coordinate is singular")
    return PPoint(np.eye(U.shape[0], dtype=complex), np.linalg.solve(U, p.eta_star))


def rep_matrix(g: DiscAutomorphism, tol: Tolerance = DEFAULT_TOL) -> RepMatrix:
    """Block matrix of g = omega . g_gamma acting by right multiplication."""
    return RepMatrix(g.ctx, disc_group.rep_matrix_of(g, tol))


def act(p: PPoint, T: RepMatrix, tol: Tolerance = DEFAULT_TOL) -> PPoint:
    """Right-multiply the row [U  eta*] by T and canonicalize."""
    h = T.ctx.dim_H
    row = np.hstack([as_cmatrix(p.U), as_cmatrix(p.eta_star)])
    out = row @ T.matrix
    return canonicalize(PPoint(out[:, :h], out[:, h:]), tol)


def op_product(a: RepClass, b: RepClass) -> RepClass:
    """[a] * [b] = class of b.matrix @ a.matrix (reversed order)."""
    return RepClass(RepMatrix(a.rep.ctx, b.rep.matrix @ a.rep.matrix))


def identity_class(ctx: CorrespondenceContext) -> RepClass:
    n = ctx.dim_H + ctx.dim_EH
    return RepClass(RepMatrix(ctx, np.eye(n, dtype=complex)))


def rep_class(g: DiscAutomorphism, tol: Tolerance = DEFAULT_TOL) -> RepClass:
    return RepClass(rep_matrix(g, tol))


def rep_inverse(a: RepClass, tol: Tolerance = DEFAULT_TOL) -> RepClass:
    """Class inverse via the closed-form blocks
    [[u D_g^-1, u gamma* D_g*^-1], [-v gamma D_g^-1, -v D_g*^-1]]."""
    ctx = a.rep.ctx
    g = disc_group.canonical_from_blocks(ctx, a.rep.matrix, tol)
    gs = g.gamma_star
    _, Dg_inv, _, Dgs_inv = defect_ops(gs, tol)
    u = g.omega.u
    v = g.omega.vstar.conj().T
    h = ctx.dim_H
    T = np.zeros((h + ctx.dim_EH,) * 2, dtype=complex)
    T[:h, :h] = u @ Dg_inv
    T[:h, h:] = u @ gs @ Dgs_inv
    T[h:, :h] = -v @ gs.conj().T @ Dg_inv
    T[h:, h:] = -v @ Dgs_inv
    return RepClass(RepMatrix(ctx, T))


def rep_equal(a: RepClass, b: RepClass, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Class equality: same gamma* and the same induced isometry on a basis
    of the intertwining space (never matrix equality)."""
    ctx = a.rep.ctx
    ga = disc_group.canonical_from_blocks(ctx, a.rep.matrix, tol)
    gb = disc_group.canonical_from_blocks(ctx, b.rep.matrix, tol)
    scale = max(1, ctx.dim_H + ctx.dim_EH)
    if operator_norm(ga.gamma_star - gb.gamma_star) > tol.abs_tol * scale * 10:
        return False
    return disc_group.omega_distance(ctx, ga.omega, gb.omega) <= (
        tol.abs_tol * scale * 10
    )


def pseudo_unitary_defect(T: RepMatrix) -> float:
    """||T kappa T* - kappa||; zero exactly on the pseudo-unitary group."""
    k = kappa(T.ctx)
    return operator_norm(T.matrix @ k @ T.matrix.conj().T - k)


def neumann_identities_defect(
    gamma_star, tol: Tolerance = DEFAULT_TOL
) -> tuple[float, float, float, float]:
    """Residual norms of the four resolvent identities behind
    pseudo-unitarity, computed by functional calculus:

        (1)  D_g^-2 - gamma* D_g*^-2 gamma = I_H
        (2)  gamma D_g^-2 gamma* - D_g*^-2 = -I_EH
        (3)  -D_g^-2 gamma* + gamma* D_g*^-2 = 0
        (4)  -gamma D_g^-2 + D_g*^-2 gamma = 0
    """
    gs = as_cmatrix(gamma_star)
    g = gs.conj().T
    _, Dg_inv, _, Dgs_inv = defect_ops(gs, tol)
    Dg2 = Dg_inv @ Dg_inv
    Dgs2 = Dgs_inv @ Dgs_inv
    IH = np.eye(gs.shape[0], dtype=complex)
    IE = np.eye(gs.shape[1], dtype=complex)
    return (
        operator_norm(Dg2 - gs @ Dgs2 @ g - IH),
        operator_norm(g @ Dg2 @ gs - Dgs2 + IE),
        operator_norm(-Dg2 @ gs + gs @ Dgs2),
        operator_norm(-g @ Dg2 + Dgs2 @ g),
    )


def neumann_series_cross_check(
    gamma_star, order: int = 200
) -> tuple[float, float]:
    """Optional series route: truncated sum of (gamma* gamma)^n against the
    functional-calculus D_g^-2 and D_g*^-2.  Truncation error is of order
    ||gamma||^(2 order), so this degrades near the boundary."""
    gs = as_cmatrix(gamma_star)
    g = gs.conj().T
    _, Dg_inv, _, Dgs_inv = defect_ops(gs)
    SH = np.eye(gs.shape[0], dtype=complex)
    SE = np.eye(gs.shape[1], dtype=complex)
    PH = gs @ g
    PE = g @ gs
    termH, termE = np.eye(gs.shape[0], dtype=complex), np.eye(gs.shape[1], dtype=complex)
    for _ in range(order):
        termH = termH @ PH
        termE = termE @ PE
        SH = SH + termH
        SE = SE + termE
    return (
        operator_norm(SH - Dg_inv @ Dg_inv),
        operator_norm(SE - Dgs_inv @ Dgs_inv),
    )


def hardy_form_rep_matrix(
    ctx: CorrespondenceContext, gamma_star, u_tensor, tol: Tolerance = DEFAULT_TOL
) -> RepMatrix:
    """Matrix of eta* -> g_gamma(eta*) (u_E (x) I_H) for a Hardy-form
    automorphism, with u_tensor the dilated unitary on E (x) H."""
    gs = as_cmatrix(gamma_star)
    _, Dg_inv, _, Dgs_inv = defect_ops(gs, tol)
    h = ctx.dim_H
    T = np.zeros((h + ctx.dim_EH,) * 2, dtype=complex)
    T[:h, :h] = Dg_inv
    T[:h, h:] = gs @ Dgs_inv @ u_tensor
    T[h:, :h] = -gs.conj().T @ Dg_inv
    T[h:, h:] = -Dgs_inv @ u_tensor
    return RepMatrix(ctx, T)
