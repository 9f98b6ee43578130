"""Graph families used as reduction inputs: cycles, cliques, random regular graphs.

Random regular graphs come from the pairing (configuration) model with
rejection of self-loops and multi-edges. Randomness is drawn from SplitMix64
so that a seed gives the same graph on every platform and in any other
implementation of the same generator:

    state <- state + 0x9E3779B97F4A7C15            (mod 2^64)
    z <- (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB
    output z ^ (z >> 31)

Integers below ``bound`` are drawn by rejecting outputs >= the largest
multiple of ``bound`` not exceeding 2^64 and reducing modulo ``bound``. The
stub list ``[0]*d + [1]*d + ...`` is shuffled with a descending Fisher-Yates
pass (``j = below(i + 1)`` for ``i = len-1 .. 1``) and paired consecutively.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GenerationFailure, InvalidParameters
from .hypergraph import Graph

MASK64 = (1 << 64) - 1
MAX_RETRIES = 10_000


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            r = self.next()
            if r < limit:
                return r % bound

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    degree: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.family not in ("cycle", "complete", "random_regular"):
            raise InvalidParameters(f"unknown family {self.family!r}")
        if self.family == "random_regular":
            if self.degree is None:
                raise InvalidParameters("random_regular needs a degree")
            _check_regular(self.n, self.degree)


def _check_regular(n: int, degree: int):
    if degree < 0 or degree >= n:
        raise InvalidParameters(f"need 0 <= degree < n, got degree={degree}, n={n}")
    if (n * degree) % 2:
        raise InvalidParameters(f"n * degree must be even, got {n} * {degree}")


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParameters("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def gen_complete(n: int) -> Graph:
    if n < 2:
        raise InvalidParameters("a complete graph needs at least 2 vertices")
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def gen_random_regular(n: int, degree: int, seed: int) -> Graph:
    _check_regular(n, degree)
    rng = SplitMix64(seed)
    for _ in range(MAX_RETRIES):
        stubs = [v for v in range(n) for _ in range(degree)]
        rng.shuffle(stubs)
        edges = set()
        for u, v in zip(stubs[::2], stubs[1::2]):
            e = (min(u, v), max(u, v))
            if u == v or e in edges:
                break
            edges.add(e)
        else:
            return Graph(n, tuple(sorted(edges)))
    raise GenerationFailure(f"no simple {degree}-regular graph on {n} vertices after {MAX_RETRIES} tries")


def generate(spec: GenSpec) -> Graph:
    if spec.family == "cycle":
        return gen_cycle(spec.n)
    if spec.family == "complete":
        return gen_complete(spec.n)
    return gen_random_regular(spec.n, spec.degree, spec.seed)
