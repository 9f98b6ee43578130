"""Exact-rational 2-spin systems on graphs.

A configuration assigns each vertex a spin in {0, 1}. Its weight is
``lam**n0 * beta**m00 * gamma**m11`` where ``n0`` counts 0-vertices and
``m00``/``m11`` count edges whose endpoints are both 0/both 1.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import AssignmentSizeMismatch, InstanceTooLarge, InvalidParameters
from .hypergraph import Graph

DEFAULT_MAX_SPIN_VERTICES = 24


@dataclass(frozen=True)
class SpinParams:
    beta: Fraction
    gamma: Fraction
    lam: Fraction

    def __post_init__(self):
        for name in ("beta", "gamma", "lam"):
            val = Fraction(getattr(self, name))
            if val < 0:
                raise InvalidParameters(f"{name} must be non-negative")
            object.__setattr__(self, name, val)

    @property
    def antiferromagnetic(self) -> bool:
        return self.beta * self.gamma < 1

    @property
    def interaction(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return ((self.beta, Fraction(1)), (Fraction(1), self.gamma))

    @property
    def field(self) -> tuple[Fraction, Fraction]:
        return (self.lam, Fraction(1))


@dataclass(frozen=True)
class ConfigStats:
    n0: int
    m00: int
    m11: int


def check_kb(k: int, b: int):
    if not (isinstance(k, int) and isinstance(b, int)):
        raise InvalidParameters("k and b must be integers")
    if k < 2 or b < 1 or 2 * b > k:
        raise InvalidParameters(f"need k >= 2 and 1 <= b <= k/2, got k={k}, b={b}")


def hypergraph_spin_params(k: int, b: int) -> SpinParams:
    """Spin system matched to independent sets of the (k, b) gadget:
    beta = 1, gamma = 1 - 2**-(k-2b), lambda = 2**b - 1."""
    check_kb(k, b)
    p = SpinParams(Fraction(1), 1 - Fraction(1, 2 ** (k - 2 * b)), Fraction(2**b - 1))
    assert p.antiferromagnetic
    return p


def config_stats(g: Graph, sigma: Sequence[int]) -> ConfigStats:
    if len(sigma) != g.vertex_count:
        raise AssignmentSizeMismatch(
            f"assignment has {len(sigma)} spins for {g.vertex_count} vertices"
        )
    if any(s not in (0, 1) for s in sigma):
        raise InvalidParameters("spins must be 0 or 1")
    n0 = sum(1 for s in sigma if s == 0)
    m00 = m11 = 0
    for u, v in g.edges:
        if sigma[u] == sigma[v]:
            if sigma[u] == 0:
                m00 += 1
            else:
                m11 += 1
    return ConfigStats(n0, m00, m11)


def weight(params: SpinParams, stats: ConfigStats) -> Fraction:
    # Fraction(0) ** 0 == 1, which is the convention needed when gamma = 0.
    return params.lam**stats.n0 * params.beta**stats.m00 * params.gamma**stats.m11


def _z_chunk(args) -> Fraction:
    g, params, lo, hi = args
    n = g.vertex_count
    total = Fraction(0)
    for mask in range(lo, hi):
        sigma = [mask >> v & 1 for v in range(n)]
        total += weight(params, config_stats(g, sigma))
    return total


def partition_function(
    g: Graph, params: SpinParams, max_vertices: int | None = None, workers: int = 1
) -> Fraction:
    """Exact sum of weights over all 2**n configurations."""
    cap = DEFAULT_MAX_SPIN_VERTICES if max_vertices is None else max_vertices
    if g.vertex_count > cap:
        raise InstanceTooLarge(f"{g.vertex_count} vertices exceeds the cap of {cap}")
    size = 1 << g.vertex_count
    if workers <= 1:
        return _z_chunk((g, params, 0, size))
    step = -(-size // workers)
    chunks = [(g, params, lo, min(size, lo + step)) for lo in range(0, size, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_z_chunk, chunks), Fraction(0))


def assignments(n: int):
    """All spin assignments on n vertices, vertex i being bit i of the index."""
    for mask in range(1 << n):
        yield tuple(mask >> v & 1 for v in range(n))
