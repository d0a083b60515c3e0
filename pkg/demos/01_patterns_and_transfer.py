#!/usr/bin/env python3
"""Walk through the basic constructions for n=4, sigma=(3 4).

Builds the two circulant variable patterns, the 16x16 transfer matrix that
averages matching cells, and checks the structural properties directly.
"""

from tensorhull import (
    build_A,
    build_B,
    build_T,
    block_structure_report,
    parse_permutation,
    verify_transfer_identity,
)

n = 4
sigma = parse_permutation("(3 4)", n)
print(f"sigma = {sigma.cycle_string()}  (image {sigma.image_string()})")

a = build_A(n)
b = build_B(n, sigma)
print("\npattern A (plain circulant, entries are variable indices):")
for row in a.entry:
    print("  " + " ".join(f"x{v}" for v in row))
print("\npattern B (first row permuted by sigma, then shifted):")
for row in b.entry:
    print("  " + " ".join(f"x{v}" for v in row))

t = build_T(n, sigma)
print(f"\ntransfer matrix T: {t.rows}x{t.cols}, "
      f"{sum(1 for r in t.data for v in r if v)} entries equal to 1/{n}")
for row in t.data:
    print("  " + " ".join("1/4" if v else ".  " for v in row))

print("\ntransfer identity (each variable's cells in A = T applied to its "
      "cells in B):", verify_transfer_identity(t, n, sigma))
report = block_structure_report(t, n)
print("every index slice is 1/n times a permutation matrix:", report.ok)
