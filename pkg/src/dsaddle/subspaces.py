"""Rank-revealing subspace computations.

Kernels, ranges, kernel intersections, direct sums and definiteness
classification, all driven by the single rank policy in
:mod:`dsaddle.tolerances`.  Kernel and range bases come from a full SVD, so
they are orthonormal by construction; the trivial subspace is represented
explicitly as a basis with zero columns, never as ``None``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .tolerances import ToleranceConfig, resolve


def _as_matrix(M, name="matrix"):
    """Coerce to a 2-d float array and reject non-finite entries."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {A.shape}")
    if A.size and not np.isfinite(A).all():
        raise ValueError(f"{name} contains non-finite entries")
    return A


def rank_threshold(sigma_max, shape, tol: ToleranceConfig | None = None):
    """Cutoff below which singular values count as zero."""
    tol = resolve(tol)
    return tol.rank_rtol * max(shape[0], shape[1], 1) * sigma_max


def matrix_rank(M, tol: ToleranceConfig | None = None) -> int:
    M = _as_matrix(M)
    if min(M.shape) == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > rank_threshold(s[0], M.shape, tol)))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis of a subspace of R^d, stored column-wise.

    ``basis`` has shape (ambient_dim, dim); dim == 0 encodes the trivial
    subspace {0}.
    """

    basis: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float)
        if B.ndim != 2:
            raise ValueError("basis must be a 2-d array of column vectors")
        object.__setattr__(self, "basis", B)
        B.setflags(write=False)
        if B.shape[1] > B.shape[0]:
            raise ValueError("more basis columns than ambient dimensions")
        if B.shape[1]:
            gram = B.T @ B
            if not np.allclose(gram, np.eye(B.shape[1]), atol=1e-8):
                raise ValueError("basis columns are not orthonormal")

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0

    @classmethod
    def trivial(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(np.zeros((ambient_dim, 0)))

    @classmethod
    def from_spanning(cls, columns, tol: ToleranceConfig | None = None) -> "SubspaceBasis":
        """Orthonormal basis of the column span of an arbitrary matrix."""
        return range_basis(columns, tol)


class Definiteness(Enum):
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE = "positive_semidefinite"
    INDEFINITE = "indefinite"
    NOT_SYMMETRIC = "not_symmetric"

    @property
    def is_psd(self) -> bool:
        """True for the two nonnegative tags (definite implies semidefinite)."""
        return self in (Definiteness.POSITIVE_DEFINITE, Definiteness.POSITIVE_SEMIDEFINITE)


def kernel_basis(M, tol: ToleranceConfig | None = None) -> SubspaceBasis:
    """Orthonormal basis of ker(M) for a d2 x d1 matrix M.

    The kernel dimension is d1 - rank(M) under the global rank policy; empty
    and zero matrices are legal (a zero matrix has a full kernel).
    """
    M = _as_matrix(M)
    d2, d1 = M.shape
    if d1 == 0:
        return SubspaceBasis.trivial(0)
    if d2 == 0:
        return SubspaceBasis(np.eye(d1))
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > rank_threshold(s[0], M.shape, tol))) if s.size else 0
    return SubspaceBasis(vh[rank:].T.copy())


def range_basis(M, tol: ToleranceConfig | None = None) -> SubspaceBasis:
    """Orthonormal basis of ran(M) (the column space)."""
    M = _as_matrix(M)
    d2, d1 = M.shape
    if d1 == 0 or d2 == 0:
        return SubspaceBasis.trivial(d2)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(s > rank_threshold(s[0], M.shape, tol))) if s.size else 0
    return SubspaceBasis(u[:, :rank].copy())


def nullity(M, tol: ToleranceConfig | None = None) -> int:
    """dim ker(M); satisfies rank(M) + nullity(M) = column count."""
    return kernel_basis(M, tol).dim


def intersection_kernels(mats, tol: ToleranceConfig | None = None) -> SubspaceBasis:
    """Basis of the intersection of the kernels of several matrices.

    All matrices must have the same column count; the intersection is the
    kernel of the vertically stacked matrix, so one rank policy governs the
    whole decision.
    """
    mats = [_as_matrix(M, f"matrix {i}") for i, M in enumerate(mats)]
    if not mats:
        raise ValueError("need at least one matrix")
    d1 = mats[0].shape[1]
    for i, M in enumerate(mats[1:], start=1):
        if M.shape[1] != d1:
            raise ValueError(
                f"column count mismatch: matrix 0 has {d1} columns, "
                f"matrix {i} has {M.shape[1]}"
            )
    return kernel_basis(np.vstack(mats), tol)


def range_intersection_trivial(Bmat, Ct, tol: ToleranceConfig | None = None):
    """Decide whether ran(B) and ran(C^T) intersect only in {0}.

    Both arguments must have the same number of rows (they map into the same
    space).  Returns ``(True, None)`` when rank([B | C^T]) = rank(B) +
    rank(C^T); otherwise ``(False, w)`` with a unit vector w lying in both
    ranges.
    """
    Bmat = _as_matrix(Bmat, "first matrix")
    Ct = _as_matrix(Ct, "second matrix")
    if Bmat.shape[0] != Ct.shape[0]:
        raise ValueError(
            f"row count mismatch: {Bmat.shape[0]} vs {Ct.shape[0]}"
        )
    rank_b = matrix_rank(Bmat, tol)
    rank_c = matrix_rank(Ct, tol)
    stacked_rank = matrix_rank(np.hstack([Bmat, Ct]), tol)
    if stacked_rank == rank_b + rank_c:
        return True, None

    # A shared direction exists; recover one from the kernel of the stacked
    # orthonormal range bases.  U_b a = U_c b with (a, b) != 0 forces both
    # sides nonzero because the bases have independent columns.
    Ub = range_basis(Bmat, tol).basis
    Uc = range_basis(Ct, tol).basis
    null = kernel_basis(np.hstack([Ub, -Uc]), tol)
    if null.is_trivial:
        raise RuntimeError("rank tests disagree on range intersection; "
                           "input is too close to the rank threshold")
    coeff = null.basis[:, 0]
    w = Ub @ coeff[: Ub.shape[1]]
    return False, w / np.linalg.norm(w)


def is_direct_sum(U: SubspaceBasis, W: SubspaceBasis, tol: ToleranceConfig | None = None) -> bool:
    """True when span(U) + span(W) is direct and fills the ambient space."""
    if U.ambient_dim != W.ambient_dim:
        raise ValueError(
            f"ambient dimension mismatch: {U.ambient_dim} vs {W.ambient_dim}"
        )
    d = U.ambient_dim
    if U.dim + W.dim != d:
        return False
    if U.dim == 0 or W.dim == 0:
        return True
    return matrix_rank(np.hstack([U.basis, W.basis]), tol) == d


def classify_definiteness(M, tol: ToleranceConfig | None = None) -> Definiteness:
    """Strongest true tag among PD, PSD, indefinite, not-symmetric.

    The zero matrix classifies positive semidefinite; an empty matrix is
    vacuously positive definite.
    """
    tol = resolve(tol)
    M = _as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"definiteness needs a square matrix, got {M.shape}")
    if M.shape[0] == 0:
        return Definiteness.POSITIVE_DEFINITE
    norm = np.linalg.norm(M, "fro")
    if np.linalg.norm(M - M.T, "fro") > tol.sym_rtol * norm:
        return Definiteness.NOT_SYMMETRIC
    eigs = np.linalg.eigvalsh(0.5 * (M + M.T))
    scale = float(np.max(np.abs(eigs)))
    lam_min = float(eigs[0])
    if lam_min > tol.psd_rtol * scale:
        return Definiteness.POSITIVE_DEFINITE
    if lam_min >= -tol.psd_rtol * scale:
        return Definiteness.POSITIVE_SEMIDEFINITE
    return Definiteness.INDEFINITE
