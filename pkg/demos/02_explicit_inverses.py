"""Closed-form inverses when the leading block is maximally rank deficient.

With null(A) = m and ker(A) (+) ker(B) = R^n, the inverse of the full system
has a fixed sparsity pattern: the middle diagonal block and its coupling to
the third group vanish identically.  Two independent constructions are
compared against dense inversion:

  * the explicit formula built from the reduced-Hessian projector
    V = Z (Z^T A Z)^{-1} Z^T, and
  * a triangular factorization of the congruence-transformed matrix.
"""

import numpy as np

from dsaddle import (
    BlockSystem,
    assemble,
    congruence_transform,
    dense_inverse_blocks,
    factorize_transformed,
    inverse_via_factorization,
    reduced_hessian_projector,
    three_block_inverse,
    two_block_inverse,
)

np.set_printoptions(precision=4, suppress=True)

sys = BlockSystem(
    A=np.diag([0.0, 1.0]), B=np.array([[1.0, 0.0]]),
    C=np.array([[1.0]]), E=np.array([[2.0]]))
K = assemble(sys).matrix
print("K =")
print(K)

# The projector behind every formula
proj = reduced_hessian_projector(sys.A, sys.B)
print("\nreduced-Hessian projector V =")
print(proj.V)
print("V annihilates B^T:", np.linalg.norm(proj.V @ sys.B.T) < 1e-14)

# Explicit three-block inverse
inv = three_block_inverse(sys)
print("\nthree-block inverse =")
print(inv.full)
print("middle block is exactly zero:", not inv.z22.any() and not inv.z23.any())
print("||K X - I|| =", np.linalg.norm(K @ inv.full - np.eye(4), 2))

# Same inverse through the congruence factorization
Kt, W = congruence_transform(sys, alpha=1.0)
fact = factorize_transformed(sys)
print("\ncongruence-transformed matrix K~ =")
print(Kt.matrix)
print("factor reconstruction error:",
      np.linalg.norm(fact.reconstruct() - Kt.matrix, 2))
via_fact = inverse_via_factorization(sys)
print("factorization route agrees with the formula:",
      np.allclose(via_fact.full, inv.full, atol=1e-12))

# Both agree with plain dense inversion
dense = dense_inverse_blocks(sys)
print("dense oracle agrees:", np.allclose(dense.full, inv.full, atol=1e-12))

# The two-block special case [[A, B^T], [B, -D]] works the same way and its
# trailing block is zero too.
tb = two_block_inverse(np.diag([0.0, 1.0]), np.array([[1.0, 0.0]]),
                       np.array([[3.0]]))
print("\ntwo-block inverse of [[A, B^T], [B, -D]] with D = 3:")
print(tb.full)

# D is unrestricted in the three-block formula: make it indefinite.
wild = BlockSystem(
    A=np.diag([0.0, 0.0, 2.0]), B=np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
    C=np.array([[0.5, -1.0]]), D=np.array([[-1.0, 0.5], [0.5, 0.3]]),
    E=np.array([[1.5]]))
X = three_block_inverse(wild).full
Kw = assemble(wild).matrix
print("\nindefinite D example: ||K X - I|| =",
      np.linalg.norm(Kw @ X - np.eye(wild.ell), 2))
