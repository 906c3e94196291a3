"""Why the parameter bound needs both a square root and a square.

Shrinking slopes: the norm of the realization goes to 0 like 1/n while every
parameter vector needs length at least n^(-1/2).  Staircases: the norm grows
like n while the output bias is forced to be n.  Any single exponent other
than the ones used in the bound loses against one of the two families.

    python demos/exponent_range.py
"""
from reluparam.counterexamples import SHRINKING_SLOPE, STAIRCASE, divergence_report

print("shrinking slope, exponent 0.75")
print(f"{'n':>6} {'lower bound':>12} {'norm':>12} {'ratio':>10}")
for row in divergence_report(SHRINKING_SLOPE, [1, 4, 16, 64, 256, 1024], [0.75]):
    print(f"{row.n:>6} {row.lower_bound:>12.5g} {row.norm:>12.5g} {row.ratios['ratio@0.75']:>10.4g}")

print("\nstaircase (h = 3), exponent 0.9")
print(f"{'n':>6} {'lower bound':>12} {'norm':>12} {'ratio':>10}")
for row in divergence_report(STAIRCASE, [1, 10, 100, 1000, 10000], [0.9], h=3):
    print(f"{row.n:>6} {row.lower_bound:>12.5g} {row.norm:>12.5g} {row.ratios['ratio@0.9']:>10.4g}")

print("\nBoth ratio columns grow without bound.")
