"""Gadget construction from graphs to k-uniform hypergraphs of overlap b.

Each graph vertex ``v`` becomes a block ``B_v`` of ``b`` hypergraph vertices,
and each graph edge ``{u, v}`` becomes the hyperedge ``B_u + B_v + F_uv``
where ``F_uv`` is a private set of ``k - 2b`` filler vertices.

Independent sets of the gadget split into classes indexed by spin
assignments: ``sigma(v) = 1`` exactly when the whole block ``B_v`` is chosen.
A class has ``(2^(k-2b) - 1)^m11 * (2^(k-2b))^(|E| - m11) * (2^b - 1)^n0``
members, which sums to ``2^(|E|(k-2b)) * Z(G)`` for the spin system of
:func:`indhard.spin.hypergraph_spin_params`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidParameters
from .hypergraph import (
    DEFAULT_MAX_VERTICES,
    Graph,
    Hypergraph,
    condition,
    count_independent_sets,
    enumerate_independent_sets,
    _check_cap,
)
from .spin import (
    assignments,
    check_kb,
    config_stats,
    hypergraph_spin_params,
    partition_function,
    weight,
)

# Above this many independent sets, class sizes are counted per class
# instead of by enumerating and classifying every set.
ENUMERATION_LIMIT = 200_000


@dataclass(frozen=True)
class ReductionParams:
    k: int
    b: int

    def __post_init__(self):
        check_kb(self.k, self.b)

    @property
    def fillers_per_edge(self) -> int:
        return self.k - 2 * self.b


@dataclass(frozen=True)
class GadgetMap:
    """Which hypergraph vertices came from which graph vertex or edge.

    ``blocks[v]`` is ``B_v``; ``fillers[i]`` belongs to graph edge ``edges[i]``.
    """

    blocks: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    fillers: tuple[tuple[int, ...], ...]

    def vertex_count(self) -> int:
        return sum(map(len, self.blocks)) + sum(map(len, self.fillers))


def build_gadget(g: Graph, params: ReductionParams) -> tuple[Hypergraph, GadgetMap]:
    if not isinstance(params, ReductionParams):
        raise InvalidParameters("params must be a ReductionParams")
    k, b = params.k, params.b
    nfill = params.fillers_per_edge
    n, m = g.vertex_count, len(g.edges)
    # Blocks first by graph vertex, then fillers by graph edge.
    blocks = tuple(tuple(range(v * b, (v + 1) * b)) for v in range(n))
    base = n * b
    fillers = tuple(tuple(range(base + i * nfill, base + (i + 1) * nfill)) for i in range(m))
    hedges = tuple(blocks[u] + blocks[v] + fillers[i] for i, (u, v) in enumerate(g.edges))
    h = Hypergraph(base + m * nfill, hedges)
    assert len(h.edges) == m and all(len(e) == k for e in h.edges)
    return h, GadgetMap(blocks, g.edges, fillers)


def classify_independent_set(ind: Iterable[int], gmap: GadgetMap) -> tuple[int, ...]:
    chosen = set(ind)
    return tuple(int(all(x in chosen for x in block)) for block in gmap.blocks)


def class_size_formula(sigma: Sequence[int], g: Graph, params: ReductionParams) -> int:
    """Number of gadget independent sets whose class is ``sigma``."""
    stats = config_stats(g, sigma)
    c = 2**params.fillers_per_edge
    m = len(g.edges)
    return (c - 1) ** stats.m11 * c ** (m - stats.m11) * (2**params.b - 1) ** stats.n0


def class_members_hypergraph(h: Hypergraph, gmap: GadgetMap, sigma: Sequence[int]):
    """Residual hypergraph whose independent sets are exactly the class of sigma.

    Blocks with spin 1 are forced in; blocks with spin 0 get an extra
    hyperedge forbidding the full block. ``None`` if the class is empty.
    """
    extra = tuple(gmap.blocks[v] for v, s in enumerate(sigma) if s == 0 and gmap.blocks[v])
    forced = [x for v, s in enumerate(sigma) if s == 1 for x in gmap.blocks[v]]
    return condition(Hypergraph(h.vertex_count, h.edges + extra), include=forced)


@dataclass
class ClassRow:
    sigma: tuple[int, ...]
    observed: int
    formula: int
    scaled_weight: Fraction

    @property
    def ok(self) -> bool:
        return self.observed == self.formula == self.scaled_weight


@dataclass
class IdentityReport:
    k: int
    b: int
    lhs: int
    rhs: Fraction
    z: Fraction
    scale: int
    rows: list[ClassRow] = field(default_factory=list)
    method: str = "enumerate"
    regular_degree: int | None = None

    @property
    def class_total(self) -> int:
        return sum(r.observed for r in self.rows)

    @property
    def counting_ok(self) -> bool:
        return self.lhs == self.rhs

    @property
    def decomposition_ok(self) -> bool:
        return self.class_total == self.lhs and all(r.ok for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.counting_ok and self.decomposition_ok

    @property
    def regular(self) -> bool:
        return self.regular_degree is not None


def verify_identity(
    g: Graph,
    params: ReductionParams,
    max_vertices: int | None = None,
    method: str = "auto",
    workers: int = 1,
) -> IdentityReport:
    """Check the counting identity and the per-class decomposition exactly.

    ``method`` chooses how class sizes are observed: ``"enumerate"`` lists
    every independent set and classifies it, ``"condition"`` counts each class
    separately on a residual hypergraph, ``"auto"`` enumerates when the total
    is at most :data:`ENUMERATION_LIMIT`.
    """
    if method not in ("auto", "enumerate", "condition"):
        raise InvalidParameters(f"unknown method {method!r}")
    h, gmap = build_gadget(g, params)
    cap = DEFAULT_MAX_VERTICES if max_vertices is None else max_vertices
    _check_cap(h, cap)
    spin = hypergraph_spin_params(params.k, params.b)
    lhs = count_independent_sets(h, cap, workers=workers)
    z = partition_function(g, spin, workers=workers)
    scale = 2 ** (len(g.edges) * params.fillers_per_edge)
    if method == "auto":
        method = "enumerate" if lhs <= ENUMERATION_LIMIT else "condition"

    if method == "enumerate":
        observed = Counter(
            classify_independent_set(s, gmap) for s in enumerate_independent_sets(h, cap)
        )
        get = lambda sigma: observed.get(sigma, 0)  # noqa: E731
    else:

        def get(sigma):
            residual = class_members_hypergraph(h, gmap, sigma)
            return 0 if residual is None else count_independent_sets(residual, cap)

    rows = []
    for sigma in assignments(g.vertex_count):
        rows.append(
            ClassRow(
                sigma=sigma,
                observed=get(sigma),
                formula=class_size_formula(sigma, g, params),
                scaled_weight=scale * weight(spin, config_stats(g, sigma)),
            )
        )
    return IdentityReport(
        k=params.k,
        b=params.b,
        lhs=lhs,
        rhs=scale * z,
        z=z,
        scale=scale,
        rows=rows,
        method=method,
        regular_degree=g.regular_degree(),
    )
