"""Canonical graph representation, stream models, and exact counting oracles.

Everything downstream (estimators, oracles, the experiment harness) speaks in
terms of the immutable :class:`Graph` defined here, its two stream views
(:func:`adjacency_stream`, :func:`arbitrary_stream`), and the exact counts that
serve as ground truth.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import IO, NamedTuple

__all__ = [
    "Edge",
    "Graph",
    "VertexOrder",
    "AdjBlock",
    "ArbitraryEdge",
    "LoadedGraph",
    "EdgeListParseError",
    "canonical_edge",
    "load_edge_list",
    "exact_triangle_count",
    "per_edge_triangle_count",
    "r_count",
    "r_counts",
    "wedge_count",
    "exact_four_cycle_count",
    "exact_four_cycle_count_enumeration",
    "per_edge_four_cycle_count",
    "adjacency_stream",
    "arbitrary_stream",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "complete_bipartite_graph",
    "petersen_graph",
    "empty_graph",
    "gnp_random_graph",
]

# An undirected edge in canonical form: (lo, hi) with lo < hi.
Edge = tuple[int, int]


class EdgeListParseError(ValueError):
    """Raised when an edge-list file cannot be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


def canonical_edge(u: int, v: int) -> Edge:
    """Return the canonical (sorted) form of an undirected edge."""
    if u == v:
        raise ValueError(f"self-loop {u}-{v} has no canonical edge form")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph over dense vertex ids [0, n).

    Edges are stored canonically (lo < hi); adjacency lists are sorted.
    Instances are safe to share read-only across concurrent trials.
    """

    __slots__ = ("n", "_edges", "_adj", "_adj_sets", "_edge_set")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canon: set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop {u}-{v} not allowed in a simple graph")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            canon.add(canonical_edge(u, v))
        self.n = n
        self._edges: tuple[Edge, ...] = tuple(sorted(canon))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self._edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._adj_sets = tuple(frozenset(a) for a in self._adj)
        self._edge_set = frozenset(self._edges)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._adj_sets[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return canonical_edge(u, v) in self._edge_set

    def __contains__(self, edge: tuple[int, int]) -> bool:
        return self.has_edge(*edge)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class LoadedGraph:
    """Result of ingesting an edge-list file.

    Original vertex labels are kept for reporting only; all graph operations
    use the dense remapped ids.
    """

    graph: Graph
    labels: tuple[str, ...]
    timestamps: dict[Edge, float] | None
    duplicates_dropped: int
    self_loops_dropped: int


def load_edge_list(source: str | bytes | IO) -> LoadedGraph:
    """Parse whitespace-separated ``u v [timestamp]`` lines into a Graph.

    Lines starting with ``#`` are comments.  Duplicate edges and self-loops
    are dropped (counted in the returned report).  Vertex labels of arbitrary
    form are remapped to dense ids in first-appearance order.  When a third
    column is present it is kept as the edge's timestamp (first occurrence
    wins for duplicates).
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
        lines = text.splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        lines = raw.splitlines()

    label_ids: dict[str, int] = {}
    labels: list[str] = []
    edges: set[Edge] = set()
    timestamps: dict[Edge, float] = {}
    saw_timestamp = False
    duplicates = 0
    self_loops = 0
    saw_edge_line = False

    def vertex_id(label: str) -> int:
        vid = label_ids.get(label)
        if vid is None:
            vid = len(labels)
            label_ids[label] = vid
            labels.append(label)
        return vid

    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) not in (2, 3):
            raise EdgeListParseError(
                f"expected 'u v' or 'u v t', got {stripped!r}", line_no
            )
        saw_edge_line = True
        u, v = vertex_id(parts[0]), vertex_id(parts[1])
        if u == v:
            self_loops += 1
            continue
        edge = canonical_edge(u, v)
        if len(parts) == 3:
            saw_timestamp = True
            try:
                ts = float(parts[2])
            except ValueError as exc:
                raise EdgeListParseError(f"bad timestamp {parts[2]!r}", line_no) from exc
        else:
            ts = None
        if edge in edges:
            duplicates += 1
            continue
        edges.add(edge)
        if ts is not None:
            timestamps[edge] = ts

    if not saw_edge_line:
        raise EdgeListParseError("no edges found in input")

    graph = Graph(len(labels), edges)
    return LoadedGraph(
        graph=graph,
        labels=tuple(labels),
        timestamps=timestamps if saw_timestamp else None,
        duplicates_dropped=duplicates,
        self_loops_dropped=self_loops,
    )


# ---------------------------------------------------------------------------
# Exact counting oracles
# ---------------------------------------------------------------------------


def exact_triangle_count(g: Graph) -> int:
    """Exact number of unordered vertex triples forming triangles."""
    total = 0
    for u, v in g.edges:
        total += len(g.neighbor_set(u) & g.neighbor_set(v))
    # Every triangle is counted once per edge.
    return total // 3


def per_edge_triangle_count(g: Graph) -> dict[Edge, int]:
    """Map each edge to the number of triangles containing it.

    The values sum to three times the triangle count.
    """
    return {
        (u, v): len(g.neighbor_set(u) & g.neighbor_set(v)) for u, v in g.edges
    }


@dataclass(frozen=True)
class VertexOrder:
    """Arrival order of vertices in the adjacency-list model.

    ``order[k]`` is the vertex arriving k-th; ``rank[v]`` its position.
    """

    order: tuple[int, ...]
    rank: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.order)
        rank = [-1] * n
        for pos, v in enumerate(self.order):
            if not (0 <= v < n) or rank[v] != -1:
                raise ValueError("order must be a permutation of [0, n)")
            rank[v] = pos
        object.__setattr__(self, "rank", tuple(rank))

    @classmethod
    def identity(cls, n: int) -> "VertexOrder":
        return cls(tuple(range(n)))

    @classmethod
    def shuffled(cls, n: int, rng) -> "VertexOrder":
        perm = list(range(n))
        rng.shuffle(perm)
        return cls(tuple(perm))

    def __len__(self) -> int:
        return len(self.order)


def r_count(g: Graph, order: VertexOrder, x: int, y: int) -> int:
    """Triangles (x, z, y) whose middle vertex z arrives strictly between.

    Follows the oriented convention: if y arrives before x the count is zero.
    """
    if not g.has_edge(x, y):
        raise ValueError(f"edge {x}-{y} not in graph")
    rx, ry = order.rank[x], order.rank[y]
    if ry < rx:
        return 0
    rank = order.rank
    common = g.neighbor_set(x) & g.neighbor_set(y)
    return sum(1 for z in common if rx < rank[z] < ry)


def r_counts(g: Graph, order: VertexOrder) -> dict[Edge, int]:
    """Per-edge middle-vertex triangle counts, earlier endpoint first.

    Summed over all edges this equals the exact triangle count.
    """
    rank = order.rank
    out: dict[Edge, int] = {}
    for u, v in g.edges:
        x, y = (u, v) if rank[u] < rank[v] else (v, u)
        out[(u, v)] = r_count(g, order, x, y)
    return out


def wedge_count(g: Graph, u: int, v: int) -> int:
    """Number of common neighbors of two distinct vertices."""
    if u == v:
        raise ValueError("wedge endpoints must be distinct")
    return len(g.neighbor_set(u) & g.neighbor_set(v))


def exact_four_cycle_count(g: Graph) -> int:
    """Exact number of simple 4-cycles via the common-neighbor formula.

    Each 4-cycle has two diagonal pairs, and a pair (u, v) with q common
    neighbors is the diagonal of C(q, 2) cycles, so the sum over unordered
    pairs of C(q, 2) double-counts.
    """
    pair_wedges: dict[tuple[int, int], int] = {}
    for w in range(g.n):
        nbrs = g.neighbors(w)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                key = (nbrs[i], nbrs[j])
                pair_wedges[key] = pair_wedges.get(key, 0) + 1
    total = sum(q * (q - 1) // 2 for q in pair_wedges.values())
    assert total % 2 == 0
    return total // 2


def exact_four_cycle_count_enumeration(g: Graph) -> int:
    """Brute-force 4-cycle count by enumerating vertex 4-subsets.

    Exponential in spirit; intended for tiny graphs, as an independent check
    of :func:`exact_four_cycle_count`.
    """
    count = 0
    for quad in itertools.combinations(range(g.n), 4):
        a, b, c, d = quad
        # Three ways to split a 4-set into two diagonal pairs.
        for (p, q), (r, s) in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            # p,q opposite and r,s opposite: cycle p-r-q-s-p.
            if (
                g.has_edge(p, r)
                and g.has_edge(r, q)
                and g.has_edge(q, s)
                and g.has_edge(s, p)
            ):
                count += 1
    return count


def per_edge_four_cycle_count(g: Graph) -> dict[Edge, int]:
    """Map each edge to the number of simple 4-cycles containing it.

    A cycle u-v-w-z-u containing edge uv determines (w, z) uniquely (w is
    v's other cycle neighbor, z is u's), so no deduplication is needed.
    """
    counts: dict[Edge, int] = {}
    for u, v in g.edges:
        total = 0
        for w in g.neighbors(v):
            if w == u:
                continue
            for z in g.neighbor_set(w) & g.neighbor_set(u):
                if z != v and z != w:
                    total += 1
        counts[(u, v)] = total
    return counts


# ---------------------------------------------------------------------------
# Stream models
# ---------------------------------------------------------------------------


class AdjBlock(NamedTuple):
    """One adjacency-list arrival: a vertex together with all its neighbors."""

    vertex: int
    neighbors: tuple[int, ...]


class ArbitraryEdge(NamedTuple):
    """One arbitrary-order arrival: a canonical edge and its stream position."""

    edge: Edge
    index: int


def adjacency_stream(g: Graph, order: VertexOrder) -> Iterator[AdjBlock]:
    """Adjacency-list stream: one block per vertex in arrival order.

    Each undirected edge appears in exactly two blocks.
    """
    if len(order) != g.n:
        raise ValueError("order length must equal the vertex count")
    for v in order.order:
        yield AdjBlock(v, g.neighbors(v))


def arbitrary_stream(
    g: Graph,
    rng=None,
    explicit_order: Sequence[Edge] | None = None,
) -> Iterator[ArbitraryEdge]:
    """Arbitrary-order stream: each canonical edge exactly once.

    The order is a seeded uniform permutation from ``rng``, or the explicit
    caller-supplied sequence; with neither, canonical sorted order.
    """
    if explicit_order is not None:
        edges = [canonical_edge(u, v) for u, v in explicit_order]
        if sorted(edges) != sorted(g.edges):
            raise ValueError("explicit order must cover each edge exactly once")
    else:
        edges = list(g.edges)
        if rng is not None:
            rng.shuffle(edges)
    for idx, e in enumerate(edges):
        yield ArbitraryEdge(e, idx)


# ---------------------------------------------------------------------------
# Small graph families (test corpus and synthetic instances)
# ---------------------------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n, [])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def gnp_random_graph(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi G(n, p) sample from the given generator."""
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.bernoulli(p)
    ]
    return Graph(n, edges)
