#!/usr/bin/env python3
"""Show that T is a vertex of the linear relaxation.

Membership is checked row by row against the labeled constraint system;
vertexhood is the standard basic-feasible-point test: the constraint
columns indexed by the support of T must be linearly independent.
"""

from tensorhull import (
    build_phi_constraints,
    build_T,
    induced_marginals,
    parse_permutation,
    phi_contains,
    phi_support_rank,
)

n = 4
sigma = parse_permutation("(3 4)", n)
system = build_phi_constraints(n)
print(f"constraint system for n={n}: {system.nrows} rows x {system.ncols} "
      f"columns ({2 * n * n} global sums + 4 families of {(n - 1) * n * n})")

t = build_T(n, sigma)
check = phi_contains(t, system)
print(f"T in the relaxation: {check.ok} "
      f"({len(check.violations)} violated rows)")

rank, size = phi_support_rank(t, system)
print(f"support size {size}, support-column rank {rank} -> vertex: "
      f"{rank == size}")

alpha, beta = induced_marginals(t, n)
print("\ninduced marginals (both are the uniform doubly stochastic matrix):")
for row in alpha.data:
    print("  " + " ".join(str(v) for v in row))

# contrast: the sigma=identity transfer matrix is a member but no vertex
t_id = build_T(n, parse_permutation("identity", n))
rank, size = phi_support_rank(t_id, system)
print(f"\nsigma=identity: support rank {rank} < size {size} -> vertex: "
      f"{rank == size}")
