"""Dense complex matrix kernel: Hermitian square roots, operator norms,
nullspaces, and the tolerance policy shared by the whole package.

All matrices are plain complex ``numpy.ndarray`` values.  Functions here are
pure and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NotHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not."""


class NotPositiveDefiniteError(ValueError):
    """Raised when a Hermitian matrix has eigenvalues at or below tolerance.

    For defect operators this signals a contraction with norm >= 1, i.e. a
    point outside the open unit ball.
    """


@dataclass(frozen=True)
class Tolerance:
    """Global numerical policy.

    abs_tol is the absolute residual tolerance; boundary_margin is the
    margin delta used for every "strictly inside the unit ball" check, which
    reads ||gamma|| <= 1 - delta.  An open ball has no numerical meaning
    without such a margin.
    """

    abs_tol: float = 1e-10
    boundary_margin: float = 0.05

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not 0 < self.boundary_margin < 1:
            raise ValueError("boundary_margin must lie in (0, 1)")

    @property
    def radius_cap(self) -> float:
        return 1.0 - self.boundary_margin


DEFAULT_TOL = Tolerance()


def as_cmatrix(M) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting NaN/Inf entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {A.shape}")
    if A.size and not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def operator_norm(M) -> float:
    """Largest singular value of M; 0.0 for empty matrices."""
    A = as_cmatrix(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def is_hermitian(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    A = as_cmatrix(M)
    if A.shape[0] != A.shape[1]:
        return False
    return operator_norm(A - A.conj().T) <= tol.abs_tol * max(1, A.shape[0])


def _hermitian_eig(P, tol: Tolerance) -> tuple[np.ndarray, np.ndarray]:
    A = as_cmatrix(P)
    if not is_hermitian(A, tol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh(A)


def hermitian_sqrt(P, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Positive square root of a Hermitian positive semidefinite matrix.

    Negative eigenvalues (roundoff below zero) are clamped at 0 before the
    scalar square root is applied.
    """
    w, V = _hermitian_eig(P, tol)
    if w.size and w.min() < -tol.abs_tol * max(1, w.size):
        raise NotPositiveDefiniteError(
            f"matrix has eigenvalue {w.min():.3e} below zero"
        )
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.conj().T


def hermitian_inv_sqrt(P, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """P^(-1/2) for Hermitian positive definite P, via eigendecomposition."""
    w, V = _hermitian_eig(P, tol)
    if w.size == 0:
        return np.zeros((0, 0), dtype=complex)
    if w.min() <= tol.abs_tol:
        raise NotPositiveDefiniteError(
            f"smallest eigenvalue {w.min():.3e} is not above tolerance"
        )
    return (V / np.sqrt(w)) @ V.conj().T


def nullspace_basis(L, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical kernel of L.

    A direction x counts as kernel when ||Lx|| <= abs_tol * ||L|| * ||x||.
    Returns an empty list for an injective map.
    """
    A = as_cmatrix(L)
    if A.shape[1] == 0:
        return []
    if A.size == 0 or operator_norm(A) == 0.0:
        return [np.eye(A.shape[1], dtype=complex)[:, j] for j in range(A.shape[1])]
    _, s, Vh = np.linalg.svd(A)
    cutoff = tol.abs_tol * s[0]
    rank = int(np.sum(s > cutoff))
    return [Vh[j].conj() for j in range(rank, A.shape[1])]
