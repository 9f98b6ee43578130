"""Graphs, hypergraphs, structural validators and an exact independent-set counter.

The counter is a plain backtracking search. It is the ground truth that the
reduction checks are measured against, so it deliberately avoids anything
cleverer than two rules:

* a branch that puts every member of some hyperedge "in" is dead;
* a vertex whose hyperedges all already contain an "out" vertex is free and
  contributes a factor of two without branching.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import InstanceTooLarge, InvalidParameters

DEFAULT_MAX_VERTICES = 30


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0 .. vertex_count - 1``.

    Edges are stored canonically as ``(u, v)`` with ``u < v``, in the order
    given. Self-loops and repeated edges are rejected.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InvalidParameters("vertex_count must be non-negative")
        canon = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidParameters(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InvalidParameters(f"edge ({u}, {v}) out of range")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise InvalidParameters(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        object.__setattr__(self, "edges", tuple(canon))

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def regular_degree(self) -> int | None:
        """The common degree if the graph is regular, else None."""
        deg = set(self.degrees())
        if len(deg) > 1:
            return None
        return deg.pop() if deg else 0

    def as_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.vertex_count, self.edges)

    def disjoint_union(self, other: Graph) -> Graph:
        shift = self.vertex_count
        moved = [(u + shift, v + shift) for u, v in other.edges]
        return Graph(self.vertex_count + other.vertex_count, self.edges + tuple(moved))

    def relabel(self, perm: Sequence[int]) -> Graph:
        return Graph(self.vertex_count, tuple((perm[u], perm[v]) for u, v in self.edges))


@dataclass(frozen=True)
class Hypergraph:
    """Hypergraph with hyperedges stored as strictly increasing id tuples."""

    vertex_count: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InvalidParameters("vertex_count must be non-negative")
        canon = []
        seen = set()
        for e in self.edges:
            s = tuple(sorted(int(x) for x in e))
            if len(set(s)) != len(s):
                raise InvalidParameters(f"hyperedge {tuple(e)} repeats a vertex")
            if s and not (0 <= s[0] and s[-1] < self.vertex_count):
                raise InvalidParameters(f"hyperedge {s} out of range")
            if s in seen:
                raise InvalidParameters(f"duplicate hyperedge {s}")
            seen.add(s)
            canon.append(s)
        object.__setattr__(self, "edges", tuple(canon))

    def incidence(self) -> list[list[int]]:
        """For every vertex, the indices of the hyperedges containing it."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, e in enumerate(self.edges):
            for x in e:
                inc[x].append(i)
        return inc

    def add_isolated(self, count: int = 1) -> Hypergraph:
        return Hypergraph(self.vertex_count + count, self.edges)

    def add_edge(self, edge: Iterable[int]) -> Hypergraph:
        return Hypergraph(self.vertex_count, self.edges + (tuple(edge),))

    def relabel(self, perm: Sequence[int]) -> Hypergraph:
        return Hypergraph(self.vertex_count, tuple(tuple(perm[x] for x in e) for e in self.edges))


def max_degree(h: Hypergraph) -> int:
    return max((len(es) for es in h.incidence()), default=0)


def overlap(h: Hypergraph) -> int:
    """Largest intersection size over pairs of distinct hyperedges."""
    best = 0
    sets = [frozenset(e) for e in h.edges]
    for a, b in itertools.combinations(sets, 2):
        best = max(best, len(a & b))
    return best


def is_k_uniform(h: Hypergraph, k: int) -> bool:
    return all(len(e) == k for e in h.edges)


def _check_cap(h: Hypergraph, max_vertices: int | None):
    cap = DEFAULT_MAX_VERTICES if max_vertices is None else max_vertices
    if h.vertex_count > cap:
        raise InstanceTooLarge(
            f"{h.vertex_count} vertices exceeds the exhaustive-search cap of {cap}"
        )


def condition(h: Hypergraph, include: Iterable[int] = (), exclude: Iterable[int] = ()):
    """Fix some vertices in or out and return the residual hypergraph.

    The fixed vertices are deleted and the remaining ones relabelled in
    increasing order. Returns ``None`` when the forced "in" vertices already
    cover a hyperedge, i.e. no independent set extends the partial choice.
    Independent sets of the result correspond one-to-one with independent
    sets of ``h`` that agree with the partial choice.
    """
    inc = set(include)
    exc = set(exclude)
    if inc & exc:
        raise InvalidParameters("a vertex cannot be both included and excluded")
    keep = [x for x in range(h.vertex_count) if x not in inc and x not in exc]
    new_id = {x: i for i, x in enumerate(keep)}
    edges = set()
    for e in h.edges:
        if any(x in exc for x in e):
            continue
        rest = tuple(new_id[x] for x in e if x not in inc)
        if not rest:
            return None
        edges.add(rest)
    # Two edges may collapse to the same residual edge; one copy constrains the same.
    return Hypergraph(len(keep), tuple(sorted(edges)))


def _backtrack_count(n: int, edges: Sequence[Sequence[int]]) -> int:
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, e in enumerate(edges):
        for x in e:
            inc[x].append(i)
    alive = [True] * len(edges)
    need = [len(e) for e in edges]
    if any(m == 0 for m in need):
        return 0

    def rec(v: int) -> int:
        factor = 1
        while v < n and not any(alive[i] for i in inc[v]):
            factor *= 2
            v += 1
        if v == n:
            return factor

        # v out
        killed = [i for i in inc[v] if alive[i]]
        for i in killed:
            alive[i] = False
        total = rec(v + 1)
        for i in killed:
            alive[i] = True

        # v in
        live = [i for i in inc[v] if alive[i]]
        for i in live:
            need[i] -= 1
        if all(need[i] > 0 for i in live):
            total += rec(v + 1)
        for i in live:
            need[i] += 1
        return factor * total

    return rec(0)


def _count_residual(h: Hypergraph | None) -> int:
    if h is None:
        return 0
    return _backtrack_count(h.vertex_count, h.edges)


def count_independent_sets(
    h: Hypergraph, max_vertices: int | None = None, workers: int = 1
) -> int:
    """Exact number of subsets of the vertices containing no whole hyperedge.

    With ``workers > 1`` the search tree is split on the choices for the
    first few vertices and the subtrees are counted in separate processes;
    the total does not depend on the worker count.
    """
    _check_cap(h, max_vertices)
    if workers <= 1 or h.vertex_count < 4:
        return _backtrack_count(h.vertex_count, h.edges)
    split = min(h.vertex_count, max(1, (workers - 1).bit_length() + 2))
    parts = []
    for mask in range(1 << split):
        chosen = [v for v in range(split) if mask >> v & 1]
        dropped = [v for v in range(split) if not mask >> v & 1]
        parts.append(condition(h, chosen, dropped))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_count_residual, parts))


def enumerate_independent_sets(
    h: Hypergraph, max_vertices: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Yield every independent set once, as a sorted tuple.

    Sets come out in increasing order of their inclusion bitmask, where
    vertex ``i`` is bit ``i``.
    """
    _check_cap(h, max_vertices)
    n = h.vertex_count
    inc = h.incidence()
    need = [len(e) for e in h.edges]
    if any(m == 0 for m in need):
        return
    chosen: list[int] = []

    # Deciding the highest vertex first, "out" before "in", walks masks in order.
    def rec(v: int) -> Iterator[tuple[int, ...]]:
        if v < 0:
            yield tuple(reversed(chosen))
            return
        yield from rec(v - 1)
        for i in inc[v]:
            need[i] -= 1
        if all(need[i] > 0 for i in inc[v]):
            chosen.append(v)
            yield from rec(v - 1)
            chosen.pop()
        for i in inc[v]:
            need[i] += 1

    yield from rec(n - 1)
