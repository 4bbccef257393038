"""How singular A and E imprint themselves on the inverse.

For an invertible system the middle diagonal block Z22 of the inverse obeys

    min(max(null(A), null(E)), m)  <=  null(Z22)  <=  null(A) + null(E),

and the lower bound sharpens to min(null(A) + null(E), m) when ran(B) and
ran(C^T) meet only in {0}.  This script sweeps prescribed nullities with the
instance generator and tabulates the observed null(Z22).
"""

from dsaddle import (
    GeneratorSpec,
    dense_inverse_blocks,
    gen_instance,
    oracle_invertible,
    z22_nullity_bounds,
)

d = 5
print(f"square sweep with n = m = p = {d}, disjoint ranges requested\n")
print(f"{'null(A)':>8} {'null(E)':>8} {'lower':>6} {'null(Z22)':>10} {'upper':>6}")

for a in range(d + 1):
    for e in range(d + 1 - a):
        rank_b = a + (d - a - e) // 2
        spec = GeneratorSpec(n=d, m=d, p=d, null_a=a, null_e=e,
                             rank_b=rank_b, rank_c=d - rank_b,
                             require_r=True, seed=a * 10 + e)
        sys, cert = gen_instance(spec)
        bounds = z22_nullity_bounds(sys, dense_inverse_blocks(sys))
        lo = bounds.refined_lower if bounds.range_disjoint else bounds.lower_bound
        print(f"{a:>8} {e:>8} {lo:>6} {bounds.null_z22:>10} "
              f"{bounds.upper_bound:>6}")
        assert bounds.satisfied

print("\nWith disjoint ranges the nullity is pinned: null(Z22) = "
      "null(A) + null(E) whenever that sum is at most m.")

# The corner null(A) = m, null(E) = 0 kills the block entirely.
spec = GeneratorSpec(n=d, m=d, p=d, null_a=d, rank_b=d, rank_c=0, seed=1)
sys, _ = gen_instance(spec)
bounds = z22_nullity_bounds(sys, dense_inverse_blocks(sys))
print(f"\ncorner null(A) = m: ||Z22|| / ||K^-1|| = "
      f"{bounds.z22_norm / bounds.inverse_norm:.2e} (exact zero in theory)")

# Beyond the feasible triangle there is nothing to tabulate: whenever
# null(A) + null(E) > m the system cannot be invertible at all.
spec = GeneratorSpec(n=4, m=4, p=4, null_a=3, null_e=3, seed=0)
sys, _ = gen_instance(spec)
print("null(A) + null(E) > m forces singularity:",
      not oracle_invertible(sys))
