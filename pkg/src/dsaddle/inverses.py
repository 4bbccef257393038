"""Constructive machinery for systems with a maximally rank-deficient
leading block: the reduced-Hessian projector, the identities it satisfies,
a block factorization of the congruence-transformed matrix, and explicit
closed-form inverses, together with nullity bounds on the middle block of
the inverse.

All identity helpers return relative residuals and raise
:class:`~dsaddle.errors.PreconditionError` when their hypotheses fail, so a
violated hypothesis can never masquerade as a small number.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .core import BlockSystem, assemble, congruence_transform, \
    default_alpha, lambda_max_sym, _validate_alpha
from .errors import PreconditionError
from .invertibility import is_nonsingular, oracle_invertible
from .subspaces import SubspaceBasis, _as_matrix, classify_definiteness, \
    intersection_kernels, is_direct_sum, kernel_basis, matrix_rank, nullity, \
    range_intersection_trivial
from .tolerances import ToleranceConfig, resolve


# ---------------------------------------------------------------------------
# reduced-Hessian projector and its identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedHessianProjector:
    """V = Z (Z^T A Z)^{-1} Z^T for an orthonormal kernel basis Z of B.

    V is symmetric positive semidefinite, satisfies V B^T = 0, and does not
    depend on which orthonormal basis of ker(B) is used.  Z^T A Z is the
    reduced Hessian familiar from null-space methods.
    """

    V: np.ndarray
    Z: SubspaceBasis

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        V.setflags(write=False)
        object.__setattr__(self, "V", V)


def _projector_from_basis(A, Z: SubspaceBasis, tol: ToleranceConfig):
    if Z.dim == 0:
        return np.zeros((A.shape[0], A.shape[0]))
    H = Z.basis.T @ A @ Z.basis
    if not is_nonsingular(H, tol):
        raise PreconditionError(
            "reduced Hessian Z^T A Z is numerically singular; "
            "ker(A) and ker(B) must intersect trivially with A semidefinite"
        )
    V = Z.basis @ sla.solve(H, Z.basis.T, assume_a="sym")
    return 0.5 * (V + V.T)


def reduced_hessian_projector(A, B, tol: ToleranceConfig | None = None) -> ReducedHessianProjector:
    """Build the projector from the blocks A and B.

    Requires A positive semidefinite and ker(A) ∩ ker(B) = {0}, which
    together make the reduced Hessian positive definite.  With a trivial
    kernel of B the projector is the zero matrix.
    """
    tol = resolve(tol)
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    if not classify_definiteness(A, tol).is_psd:
        raise PreconditionError("A must be positive semidefinite")
    if not intersection_kernels([A, B], tol).is_trivial:
        raise PreconditionError("ker(A) and ker(B) must intersect only in {0}")
    Z = kernel_basis(B, tol)
    return ReducedHessianProjector(_projector_from_basis(A, Z, tol), Z)


def inner_inverse_residual(A, proj: ReducedHessianProjector,
                           tol: ToleranceConfig | None = None) -> float:
    """Relative residual of the inner-inverse identity A = A V A.

    Holds when A is positive semidefinite and ker(A) (+) ker(B) spans the
    whole space (the maximally rank-deficient setting); both hypotheses are
    enforced.
    """
    tol = resolve(tol)
    A = _as_matrix(A, "A")
    if not classify_definiteness(A, tol).is_psd:
        raise PreconditionError("A must be positive semidefinite")
    if not is_direct_sum(kernel_basis(A, tol), proj.Z, tol):
        raise PreconditionError(
            "ker(A) and ker(B) must form a direct sum of the whole space "
            "(this pins null(A) to the number of rows of B)"
        )
    norm = np.linalg.norm(A, "fro")
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(A - A @ proj.V @ A, "fro") / norm)


def weight_recovery_residual(A, B, W, tol: ToleranceConfig | None = None) -> float:
    """Residual of the weight-recovery identity B (A + B^T W^{-1} B)^{-1} B^T = W.

    For A positive semidefinite with null(A) equal to the row count of B,
    ker(A) ∩ ker(B) = {0}, and any invertible W, the completed matrix
    A + B^T W^{-1} B is invertible and compressing its inverse by B recovers
    W exactly.
    """
    tol = resolve(tol)
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    W = _as_matrix(W, "W")
    m = B.shape[0]
    if W.shape != (m, m):
        raise ValueError(f"W must be {m} x {m}, got {W.shape}")
    if nullity(A, tol) != m:
        raise PreconditionError(
            f"null(A) = {nullity(A, tol)} must equal the row count m = {m} of B"
        )
    if not intersection_kernels([A, B], tol).is_trivial:
        raise PreconditionError("ker(A) and ker(B) must intersect only in {0}")
    if not is_nonsingular(W, tol):
        raise PreconditionError("W must be invertible")
    X = A + B.T @ np.linalg.solve(W, B)
    if not is_nonsingular(X, tol):
        raise PreconditionError(
            "A + B^T W^{-1} B is numerically singular; hypotheses do not hold"
        )
    recovered = B @ np.linalg.solve(X, B.T)
    return float(np.linalg.norm(recovered - W, "fro") / np.linalg.norm(W, "fro"))


def projector_complement_residual(B, Z: SubspaceBasis,
                                  tol: ToleranceConfig | None = None) -> float:
    """Residual of B^T (B B^T)^{-1} B = I - Z Z^T for full-row-rank B.

    Z must be an orthonormal basis of ker(B); both the rank of B and the
    kernel property of Z are enforced.
    """
    tol = resolve(tol)
    B = _as_matrix(B, "B")
    m, n = B.shape
    if matrix_rank(B, tol) != m:
        raise PreconditionError("B must have full row rank")
    if Z.ambient_dim != n or Z.dim != n - m:
        raise PreconditionError("Z does not have the dimensions of ker(B)")
    if Z.dim and np.linalg.norm(B @ Z.basis, 2) > tol.residual_rtol * np.linalg.norm(B, 2):
        raise PreconditionError("Z is not a kernel basis of B")
    gram = sla.cho_factor(B @ B.T)
    row_proj = B.T @ sla.cho_solve(gram, B)
    complement = np.eye(n) - Z.basis @ Z.basis.T
    return float(np.linalg.norm(row_proj - complement, 2))


def reduced_projector_residual(A, proj: ReducedHessianProjector,
                               tol: ToleranceConfig | None = None) -> float:
    """Residual of Z Z^T A V = Z Z^T, the fixed-point property of V on ker(B)."""
    tol = resolve(tol)
    A = _as_matrix(A, "A")
    V_check = _projector_from_basis(A, proj.Z, tol)
    scale = max(np.linalg.norm(proj.V, 2), 1e-300)
    if np.linalg.norm(V_check - proj.V, 2) > tol.residual_rtol * max(scale, 1.0):
        raise PreconditionError("projector was not built from this A")
    if proj.Z.dim == 0:
        return 0.0
    ZZt = proj.Z.basis @ proj.Z.basis.T
    return float(np.linalg.norm(ZZt @ A @ proj.V - ZZt, 2))


# ---------------------------------------------------------------------------
# transformed Schur complement and block factorization
# ---------------------------------------------------------------------------

def transformed_schur_complement(sys: BlockSystem, alpha: float,
                                 tol: ToleranceConfig | None = None) -> np.ndarray:
    """Schur complement of the congruence-transformed matrix.

    With M = 2I - alpha D, returns the (m+p) square matrix

        [[-(1/alpha) M^{-1},  M^{-1} C^T        ],
         [ C M^{-1},          E - alpha C M^{-1} C^T]].

    Under the hypotheses A, D positive semidefinite, the three necessary
    kernel conditions, and null(A) = m, this matrix is invertible exactly
    when the full system is; the equivalence holds for every admissible
    alpha in (0, 2/lambda_max(D)).
    """
    tol = resolve(tol)
    _validate_alpha(sys, alpha)
    m, p = sys.m, sys.p
    M = 2.0 * np.eye(m) - alpha * sys.D
    if not is_nonsingular(M, tol):
        raise PreconditionError("2I - alpha D is numerically singular; "
                                "alpha is too close to the interval boundary")
    Minv = sla.solve(M, np.eye(m), assume_a="sym")
    Minv = 0.5 * (Minv + Minv.T)
    S = np.zeros((m + p, m + p))
    S[:m, :m] = -(1.0 / alpha) * Minv
    S[:m, m:] = Minv @ sys.C.T
    S[m:, :m] = sys.C @ Minv
    S[m:, m:] = sys.E - alpha * sys.C @ Minv @ sys.C.T
    return S


@dataclass(frozen=True)
class TransformedFactorization:
    """Block L * mid * L^T factorization of the transformed matrix at alpha = 1.

    ``a_tilde`` is A + B^T (2I - D) B, ``b_one`` is B - D B, ``L`` is unit
    lower block triangular and ``mid`` is blockdiag(a_tilde, -(2I-D)^{-1}, E).
    The middle factor carries the rank: rank(mid) equals the rank of the
    transformed matrix and of the original system.
    """

    a_tilde: np.ndarray
    b_one: np.ndarray
    L: np.ndarray
    mid: np.ndarray
    dims: tuple[int, int, int]

    def reconstruct(self) -> np.ndarray:
        return self.L @ self.mid @ self.L.T


def factorize_transformed(sys: BlockSystem, tol: ToleranceConfig | None = None) -> TransformedFactorization:
    """Factor the alpha = 1 congruence transform of the system.

    Hypotheses (enforced): A positive semidefinite, null(A) = m,
    ker(A) ∩ ker(B) = {0}, and lambda_max(D) < 2.  E may be singular; its
    rank deficiency then shows up in the middle factor.
    """
    tol = resolve(tol)
    n, m, p = sys.dims
    if not classify_definiteness(sys.A, tol).is_psd:
        raise PreconditionError("A must be positive semidefinite")
    if nullity(sys.A, tol) != m:
        raise PreconditionError(
            f"null(A) = {nullity(sys.A, tol)} must equal m = {m}"
        )
    if not intersection_kernels([sys.A, sys.B], tol).is_trivial:
        raise PreconditionError("ker(A) and ker(B) must intersect only in {0}")
    lam = lambda_max_sym(sys.D)
    if not lam < 2.0:
        raise PreconditionError(
            f"lambda_max(D) = {lam!r} must be below 2; "
            "rescale the middle block first"
        )

    M = 2.0 * np.eye(m) - sys.D
    a_tilde = sys.A + sys.B.T @ M @ sys.B
    a_tilde = 0.5 * (a_tilde + a_tilde.T)
    if not is_nonsingular(a_tilde, tol):
        raise PreconditionError("A + B^T (2I - D) B is numerically singular; "
                                "hypotheses do not hold")
    b_one = sys.B - sys.D @ sys.B

    factor = sla.cho_factor(a_tilde)
    L21 = sla.cho_solve(factor, b_one.T).T
    L31 = sla.cho_solve(factor, (sys.C @ sys.B).T).T

    ell = sys.ell
    L = np.eye(ell)
    L[n:n + m, :n] = L21
    L[n + m:, :n] = L31
    L[n + m:, n:n + m] = -sys.C

    Minv = sla.solve(M, np.eye(m), assume_a="pos")
    mid = np.zeros((ell, ell))
    mid[:n, :n] = a_tilde
    mid[n:n + m, n:n + m] = -0.5 * (Minv + Minv.T)
    mid[n + m:, n + m:] = sys.E
    return TransformedFactorization(a_tilde, b_one, L, mid, sys.dims)


# ---------------------------------------------------------------------------
# explicit inverses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InverseBlocks:
    """Symmetric 3 x 3 block partition of an inverse.

    Only the upper blocks are stored; the assembled matrix mirrors them, so
    the result is symmetric by construction.
    """

    z11: np.ndarray
    z12: np.ndarray
    z13: np.ndarray
    z22: np.ndarray
    z23: np.ndarray
    z33: np.ndarray
    dims: tuple[int, int, int]

    @classmethod
    def from_full(cls, M, dims) -> "InverseBlocks":
        M = _as_matrix(M, "inverse")
        n, m, p = dims
        if M.shape != (n + m + p, n + m + p):
            raise ValueError(f"matrix shape {M.shape} does not match dims {dims}")
        sym = lambda X: 0.5 * (X + X.T)
        return cls(
            z11=sym(M[:n, :n]),
            z12=M[:n, n:n + m].copy(),
            z13=M[:n, n + m:].copy(),
            z22=sym(M[n:n + m, n:n + m]),
            z23=M[n:n + m, n + m:].copy(),
            z33=sym(M[n + m:, n + m:]),
            dims=(int(n), int(m), int(p)),
        )

    @property
    def full(self) -> np.ndarray:
        n, m, p = self.dims
        X = np.zeros((n + m + p, n + m + p))
        X[:n, :n] = self.z11
        X[:n, n:n + m] = self.z12
        X[:n, n + m:] = self.z13
        X[n:n + m, :n] = self.z12.T
        X[n:n + m, n:n + m] = self.z22
        X[n:n + m, n + m:] = self.z23
        X[n + m:, :n] = self.z13.T
        X[n + m:, n:n + m] = self.z23.T
        X[n + m:, n + m:] = self.z33
        return X

    def blocks(self) -> dict:
        return {"Z11": self.z11, "Z12": self.z12, "Z13": self.z13,
                "Z22": self.z22, "Z23": self.z23, "Z33": self.z33}


@dataclass(frozen=True)
class TwoBlockInverse:
    """Inverse of the 2 x 2 block matrix [[A, B^T], [B, -D]].

    The trailing block is exactly zero by construction.
    """

    x11: np.ndarray
    x12: np.ndarray
    x22: np.ndarray
    dims: tuple[int, int]

    @property
    def full(self) -> np.ndarray:
        n, m = self.dims
        X = np.zeros((n + m, n + m))
        X[:n, :n] = self.x11
        X[:n, n:] = self.x12
        X[n:, :n] = self.x12.T
        X[n:, n:] = self.x22
        return X


def _maximally_deficient_projector(A, B, m, tol):
    """Shared hypothesis check for the explicit inverse formulas."""
    if not classify_definiteness(A, tol).is_psd:
        raise PreconditionError("A must be positive semidefinite")
    null_a = nullity(A, tol)
    if null_a != m:
        raise PreconditionError(f"null(A) = {null_a} must equal m = {m}")
    Z = kernel_basis(B, tol)
    if not is_direct_sum(kernel_basis(A, tol), Z, tol):
        raise PreconditionError(
            "ker(A) and ker(B) must form a direct sum of the whole space"
        )
    return ReducedHessianProjector(_projector_from_basis(A, Z, tol), Z)


def two_block_inverse(A, B, D, tol: ToleranceConfig | None = None) -> TwoBlockInverse:
    """Closed-form inverse of [[A, B^T], [B, -D]].

    Hypotheses: A positive semidefinite, null(A) = m, and
    ker(A) (+) ker(B) = R^n.  With V the reduced-Hessian projector and
    R = (B B^T)^{-1} B (I - A V), the inverse is

        [[R^T D R + V,  R^T],
         [R,            0  ]].

    Solves with a Cholesky factorization of B B^T are used throughout; the
    Gram matrix is never inverted explicitly.
    """
    tol = resolve(tol)
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    D = _as_matrix(D, "D")
    m, n = B.shape
    if A.shape != (n, n):
        raise ValueError(f"A must be {n} x {n}, got {A.shape}")
    if D.shape != (m, m):
        raise ValueError(f"D must be {m} x {m}, got {D.shape}")
    proj = _maximally_deficient_projector(A, B, m, tol)
    gram = sla.cho_factor(B @ B.T)
    R = sla.cho_solve(gram, B @ (np.eye(n) - A @ proj.V))
    x11 = R.T @ D @ R + proj.V
    return TwoBlockInverse(0.5 * (x11 + x11.T), R.T.copy(), np.zeros((m, m)), (n, m))


def three_block_inverse(sys: BlockSystem, tol: ToleranceConfig | None = None) -> InverseBlocks:
    """Closed-form inverse of the full system for nonsingular E.

    Hypotheses: A positive semidefinite, null(A) = m,
    ker(A) (+) ker(B) = R^n, and E nonsingular; D is unrestricted.  The
    middle diagonal block and its coupling to E are exactly zero:

        [[T,   R^T, S^T   ],
         [R,   0,   0     ],      T = R^T (D + C^T E^{-1} C) R + V
         [S,   0,   E^{-1}]],     R = (B B^T)^{-1} B (I - A V),  S = -E^{-1} C R
    """
    tol = resolve(tol)
    n, m, p = sys.dims
    if not is_nonsingular(sys.E, tol):
        raise PreconditionError("E must be nonsingular for the explicit inverse")
    proj = _maximally_deficient_projector(sys.A, sys.B, m, tol)
    gram = sla.cho_factor(sys.B @ sys.B.T)
    R = sla.cho_solve(gram, sys.B @ (np.eye(n) - sys.A @ proj.V))
    Einv = sla.solve(sys.E, np.eye(p), assume_a="sym")
    Einv = 0.5 * (Einv + Einv.T)
    T = R.T @ (sys.D + sys.C.T @ Einv @ sys.C) @ R + proj.V
    S = -Einv @ (sys.C @ R)
    return InverseBlocks(
        z11=0.5 * (T + T.T),
        z12=R.T.copy(),
        z13=S.T.copy(),
        z22=np.zeros((m, m)),
        z23=np.zeros((m, p)),
        z33=Einv,
        dims=sys.dims,
    )


def inverse_via_factorization(sys: BlockSystem, tol: ToleranceConfig | None = None) -> InverseBlocks:
    """Inverse assembled from the alpha = 1 factorization.

    Inverts the three factors of :func:`factorize_transformed` directly
    (the unit triangular factor by block back-substitution, the middle one
    blockwise) and maps the result back through the congruence, so

        K^{-1} = W (L^{-T} mid^{-1} L^{-1}) W^T.

    Requires the factorization hypotheses plus nonsingular E.
    """
    tol = resolve(tol)
    fact = factorize_transformed(sys, tol)
    n, m, p = sys.dims
    if not is_nonsingular(sys.E, tol):
        raise PreconditionError("E must be nonsingular to invert the factorization")

    L21 = fact.L[n:n + m, :n]
    L31 = fact.L[n + m:, :n]
    L32 = fact.L[n + m:, n:n + m]
    Linv = np.eye(sys.ell)
    Linv[n:n + m, :n] = -L21
    Linv[n + m:, :n] = L32 @ L21 - L31
    Linv[n + m:, n:n + m] = -L32

    factor = sla.cho_factor(fact.a_tilde)
    a_tilde_inv = sla.cho_solve(factor, np.eye(n))
    Einv = sla.solve(sys.E, np.eye(p), assume_a="sym")
    midinv = np.zeros((sys.ell, sys.ell))
    midinv[:n, :n] = 0.5 * (a_tilde_inv + a_tilde_inv.T)
    midinv[n:n + m, n:n + m] = -(2.0 * np.eye(m) - sys.D)
    midinv[n + m:, n + m:] = 0.5 * (Einv + Einv.T)

    Kt_inv = Linv.T @ midinv @ Linv
    _, W = congruence_transform(sys, 1.0, tol)
    K_inv = W.matrix @ Kt_inv @ W.matrix.T
    return InverseBlocks.from_full(K_inv, sys.dims)


def dense_inverse_blocks(sys: BlockSystem) -> InverseBlocks:
    """Reference inverse by dense LU of the assembled matrix."""
    K = assemble(sys).matrix
    return InverseBlocks.from_full(np.linalg.inv(K), sys.dims)


# ---------------------------------------------------------------------------
# nullity bounds on the middle block of the inverse
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NullityBoundReport:
    """Checked nullity bounds for the middle diagonal block of the inverse.

    For an invertible system, null(Z22) always lies between
    min(max(null(A), null(E)), m) and null(A) + null(E); when the ranges of
    B and C^T meet only in {0} the lower bound sharpens to
    min(null(A) + null(E), m).  With nonsingular E the bounds collapse to
    min(null(A), m) <= null(Z22) <= null(A), and the null(A) = m corner
    forces Z22 = 0.
    """

    null_a: int
    null_e: int
    null_z22: int
    m: int
    lower_bound: int
    upper_bound: int
    eq_base_holds: bool
    range_disjoint: bool
    refined_lower: int | None
    eq_refined_holds: bool | None
    remark_holds: bool | None
    corner_expected: bool
    corner_zero_ok: bool | None
    z22_norm: float
    inverse_norm: float

    @property
    def satisfied(self) -> bool:
        return (self.eq_base_holds
                and self.eq_refined_holds in (None, True)
                and self.remark_holds in (None, True)
                and self.corner_zero_ok in (None, True))

    def to_dict(self):
        return {
            "null_a": self.null_a, "null_e": self.null_e,
            "null_z22": self.null_z22, "m": self.m,
            "lower_bound": self.lower_bound, "upper_bound": self.upper_bound,
            "eq_base_holds": self.eq_base_holds,
            "range_disjoint": self.range_disjoint,
            "refined_lower": self.refined_lower,
            "eq_refined_holds": self.eq_refined_holds,
            "remark_holds": self.remark_holds,
            "corner_expected": self.corner_expected,
            "corner_zero_ok": self.corner_zero_ok,
            "z22_norm": self.z22_norm, "inverse_norm": self.inverse_norm,
            "satisfied": self.satisfied,
        }


def z22_nullity_bounds(sys: BlockSystem, inv: InverseBlocks,
                       tol: ToleranceConfig | None = None) -> NullityBoundReport:
    """Verify the nullity bounds of the middle inverse block.

    ``inv`` may come from any constructor or from dense inversion.  The
    nullity of Z22 follows the global rank policy measured against its own
    largest singular value, except that a block vanishing relative to the
    whole inverse counts as nullity m.
    """
    tol = resolve(tol)
    if not oracle_invertible(sys, tol):
        raise PreconditionError("nullity bounds apply to invertible systems only")
    null_a = nullity(sys.A, tol)
    null_e = nullity(sys.E, tol)
    m = sys.m

    full = inv.full
    inverse_norm = float(np.linalg.norm(full, 2))
    z22_norm = float(np.linalg.norm(inv.z22, 2)) if inv.z22.size else 0.0
    if z22_norm <= tol.rank_rtol * max(m, 1) * inverse_norm:
        null_z22 = m
    else:
        null_z22 = m - matrix_rank(inv.z22, tol)

    lower = min(max(null_a, null_e), m)
    upper = null_a + null_e
    eq_base = lower <= null_z22 <= upper

    range_disjoint, _ = range_intersection_trivial(sys.B, sys.C.T, tol)
    refined = min(null_a + null_e, m) if range_disjoint else None
    eq_refined = (refined <= null_z22) if range_disjoint else None

    remark = None
    if null_e == 0:
        remark = min(null_a, m) <= null_z22 <= null_a
    corner = (null_a == m and null_e == 0)
    corner_ok = (z22_norm <= tol.rank_rtol * inverse_norm) if corner else None

    return NullityBoundReport(
        null_a=null_a, null_e=null_e, null_z22=null_z22, m=m,
        lower_bound=lower, upper_bound=upper, eq_base_holds=eq_base,
        range_disjoint=bool(range_disjoint), refined_lower=refined,
        eq_refined_holds=eq_refined, remark_holds=remark,
        corner_expected=corner, corner_zero_ok=corner_ok,
        z22_norm=z22_norm, inverse_norm=inverse_norm,
    )


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------

def verify_identities(sys: BlockSystem, tol: ToleranceConfig | None = None,
                      alpha: float | None = None) -> list[dict]:
    """Recompute every identity on one system and report residuals.

    Returns a list of entries {"id", "status", ...} where status is "ok"
    (residual within ``residual_rtol``), "failed", or "skipped" with a
    reason when the identity's hypotheses do not hold for this system.
    """
    tol = resolve(tol)
    if alpha is None:
        alpha = default_alpha(sys)
    _validate_alpha(sys, alpha)
    entries = []

    def residual_entry(name, fn):
        try:
            res = fn()
        except PreconditionError as exc:
            entries.append({"id": name, "status": "skipped", "reason": str(exc)})
            return
        status = "ok" if res <= tol.residual_rtol else "failed"
        entries.append({"id": name, "status": status, "residual": float(res)})

    def weight_recovery():
        M = 2.0 * np.eye(sys.m) - alpha * sys.D
        W = (1.0 / alpha) * sla.solve(M, np.eye(sys.m), assume_a="sym")
        return weight_recovery_residual(sys.A, sys.B, 0.5 * (W + W.T), tol)

    def inner_inverse():
        proj = reduced_hessian_projector(sys.A, sys.B, tol)
        return inner_inverse_residual(sys.A, proj, tol)

    def projector_complement():
        Z = kernel_basis(sys.B, tol)
        return projector_complement_residual(sys.B, Z, tol)

    def reduced_projector():
        proj = reduced_hessian_projector(sys.A, sys.B, tol)
        return reduced_projector_residual(sys.A, proj, tol)

    def congruence():
        Kt, W = congruence_transform(sys, alpha, tol)
        K = assemble(sys).matrix
        return float(np.linalg.norm(W.matrix.T @ K @ W.matrix - Kt.matrix, 2)
                     / max(np.linalg.norm(Kt.matrix, 2), 1e-300))

    residual_entry("weight_recovery", weight_recovery)
    residual_entry("inner_inverse", inner_inverse)
    residual_entry("projector_complement", projector_complement)
    residual_entry("reduced_projector", reduced_projector)
    residual_entry("congruence", congruence)

    try:
        if not oracle_invertible(sys, tol):
            raise PreconditionError("nullity bounds apply to invertible systems only")
        bounds = z22_nullity_bounds(sys, dense_inverse_blocks(sys), tol)
        entries.append({"id": "nullity_bounds",
                        "status": "ok" if bounds.satisfied else "failed",
                        "detail": bounds.to_dict()})
    except PreconditionError as exc:
        entries.append({"id": "nullity_bounds", "status": "skipped", "reason": str(exc)})
    return entries
