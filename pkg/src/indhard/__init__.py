"""Counting independent sets in bounded-overlap hypergraphs via 2-spin systems.

Exact tools for the gadget reduction (construction, brute-force counts, the
class decomposition of independent sets) and certified numerics for the
tree recursion whose non-uniqueness drives the hardness regime.
"""

from .errors import (
    AssignmentSizeMismatch,
    BracketFailure,
    GenerationFailure,
    IndhardError,
    InstanceTooLarge,
    InvalidParameters,
    ParseError,
    PrecisionExhausted,
)
from .hypergraph import (
    Graph,
    Hypergraph,
    condition,
    count_independent_sets,
    enumerate_independent_sets,
    is_k_uniform,
    max_degree,
    overlap,
)
from .instances import GenSpec, gen_complete, gen_cycle, gen_random_regular, generate
from .reduction import (
    GadgetMap,
    IdentityReport,
    ReductionParams,
    build_gadget,
    class_size_formula,
    classify_independent_set,
    verify_identity,
)
from .spin import (
    ConfigStats,
    SpinParams,
    config_stats,
    hypergraph_spin_params,
    partition_function,
    weight,
)
from .uniqueness import (
    FixedPointReport,
    RecursionParams,
    classify,
    exp_sandwich_check,
    f_fn,
    find_fixed_points,
    find_roots,
    g_fn,
    h_fn,
    regime_scan,
    tree_map,
    verify_analytic_lemma,
)

__version__ = "0.1.0"
