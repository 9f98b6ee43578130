"""Plain-text formats for graphs, hypergraphs and gadget maps.

Graph edge list::

    n m
    u v        (m lines)

Hypergraph::

    n m
    s v1 ... vs    (m lines)

Gadget map sidecar::

    block v id1 ... idb
    filler u v id1 ... id(k-2b)

All ids are 0-based decimals. Blank lines and lines starting with ``#`` are
ignored on input.
"""

from __future__ import annotations

from .errors import IndhardError, ParseError
from .hypergraph import Graph, Hypergraph


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line.split())
    return out


def _ints(tokens: list[str], where: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"{where}: expected integers, got {' '.join(tokens)!r}") from None


def _header(rows: list[list[str]]) -> tuple[int, int]:
    if not rows:
        raise ParseError("empty input")
    head = _ints(rows[0], "header")
    if len(head) != 2 or min(head) < 0:
        raise ParseError("header must be 'n m' with non-negative integers")
    n, m = head
    if len(rows) - 1 != m:
        raise ParseError(f"header declares {m} edges, found {len(rows) - 1}")
    return n, m


def parse_graph(text: str) -> Graph:
    rows = _lines(text)
    n, _ = _header(rows)
    edges = []
    for lineno, row in enumerate(rows[1:], start=2):
        uv = _ints(row, f"edge line {lineno}")
        if len(uv) != 2:
            raise ParseError(f"edge line {lineno}: expected 'u v'")
        edges.append(tuple(uv))
    try:
        return Graph(n, tuple(edges))
    except IndhardError as exc:
        raise ParseError(str(exc)) from None


def parse_hypergraph(text: str) -> Hypergraph:
    rows = _lines(text)
    n, _ = _header(rows)
    edges = []
    for lineno, row in enumerate(rows[1:], start=2):
        vals = _ints(row, f"hyperedge line {lineno}")
        if not vals or vals[0] != len(vals) - 1:
            raise ParseError(f"hyperedge line {lineno}: size prefix does not match")
        edges.append(tuple(vals[1:]))
    try:
        return Hypergraph(n, tuple(edges))
    except IndhardError as exc:
        raise ParseError(str(exc)) from None


def format_graph(g: Graph) -> str:
    lines = [f"{g.vertex_count} {len(g.edges)}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"{h.vertex_count} {len(h.edges)}"]
    lines += [" ".join(map(str, (len(e),) + e)) for e in h.edges]
    return "\n".join(lines) + "\n"


def format_gadget_map(gmap) -> str:
    lines = []
    for v, block in enumerate(gmap.blocks):
        lines.append(" ".join(map(str, ("block", v) + tuple(block))))
    for (u, v), fill in zip(gmap.edges, gmap.fillers):
        lines.append(" ".join(map(str, ("filler", u, v) + tuple(fill))))
    return "\n".join(lines) + "\n"


def parse_gadget_map(text: str):
    from .reduction import GadgetMap

    blocks: dict[int, tuple[int, ...]] = {}
    fillers = []
    for lineno, row in enumerate(_lines(text), start=1):
        kind, rest = row[0], _ints(row[1:], f"map line {lineno}")
        if kind == "block" and rest:
            blocks[rest[0]] = tuple(rest[1:])
        elif kind == "filler" and len(rest) >= 2:
            fillers.append(((rest[0], rest[1]), tuple(rest[2:])))
        else:
            raise ParseError(f"map line {lineno}: unknown record {row[0]!r}")
    if sorted(blocks) != list(range(len(blocks))):
        raise ParseError("block records must cover vertices 0..n-1")
    return GadgetMap(
        blocks=tuple(blocks[v] for v in range(len(blocks))),
        edges=tuple(e for e, _ in fillers),
        fillers=tuple(f for _, f in fillers),
    )
