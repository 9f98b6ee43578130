"""Fixed points of the tree recursion on both sides of the uniqueness transition.

Run with ``python demos/02_tree_recursion.py``. Writes ``regime_scan.csv``
in the working directory.
"""
from indhard import classify, find_roots, regime_scan, tree_map
from indhard.uniqueness import hardness_threshold, rows_to_csv

k, b = 3, 1

# At small degree there is a single fixed point and |T'| < 1 there.
small = classify(k, b, 3)
print("delta=3:", small.regime, [float(r) for r in small.roots], "T'(Qx) =", float(small.slope.mid()))

# At the degree bound the two-step map picks up two more fixed points, and T
# swaps them: T(Q-) = Q+, T(Q+) = Q-.
delta = hardness_threshold(k, b)
big = classify(k, b, delta)
print(f"delta={delta}:", big.regime, [float(r) for r in big.roots])
p = big.params
print("T(Q-) =", float(tree_map(big.q_minus.mid, p)), " T(Q+) =", float(tree_map(big.q_plus.mid, p)))

# One-step fixed point alone, for comparison with the middle root.
print("fixed point of T:", float(find_roots("g", k, b, delta - 1).roots[0]))

# Sweep delta to see where the regime flips for this (k, b).
rows = regime_scan([k], b, range(3, 30))
flip = next(r.delta for r in rows if r.regime == "NonUnique")
print("first non-unique delta for k=3, b=1:", flip, "(bound used for hardness:", delta, ")")

with open("regime_scan.csv", "w") as fh:
    fh.write(rows_to_csv(rows))
print("wrote regime_scan.csv with", len(rows), "rows")
