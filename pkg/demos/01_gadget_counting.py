"""Build the hypergraph gadget for a small graph and check the counting identity.

Run with ``python demos/01_gadget_counting.py``.
"""
from collections import Counter

from indhard import (
    ReductionParams,
    build_gadget,
    classify_independent_set,
    count_independent_sets,
    enumerate_independent_sets,
    gen_complete,
    hypergraph_spin_params,
    is_k_uniform,
    max_degree,
    overlap,
    partition_function,
    verify_identity,
)
from indhard.formats import format_gadget_map

# K4 is 3-regular. With k=7 and b=3 every vertex becomes a block of 3
# hypergraph vertices and every edge gets one private filler vertex.
g = gen_complete(4)
params = ReductionParams(k=7, b=3)
h, gmap = build_gadget(g, params)
print(f"{h.vertex_count} vertices, {len(h.edges)} hyperedges")
print("7-uniform:", is_k_uniform(h, 7), " max degree:", max_degree(h), " overlap:", overlap(h))
print(format_gadget_map(gmap))

# Exact count of independent sets, and the matching spin-system partition function
# (beta=1, gamma=1/2, lambda=7 for this (k, b)).
spin = hypergraph_spin_params(7, 3)
z = partition_function(g, spin)
n_ind = count_independent_sets(h)
print("spin params:", spin)
print("|I(H)| =", n_ind, "   2^(|E|(k-2b)) Z =", 2 ** (len(g.edges) * 1) * z)

# Every independent set falls into the class sigma given by which blocks it fills.
classes = Counter(classify_independent_set(s, gmap) for s in enumerate_independent_sets(h))
for sigma in sorted(classes)[:5]:
    print(sigma, classes[sigma])
print("...", len(classes), "non-empty classes")

# verify_identity does all of the above and compares each class to its product formula.
rep = verify_identity(g, params)
print("identity holds:", rep.counting_ok, " decomposition holds:", rep.decomposition_ok)
