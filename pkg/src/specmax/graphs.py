"""Simple undirected graphs with positive edge lengths.

Vertices are labeled ``1..n``.  Edges are stored canonically as ``(u, v)``
with ``u < v``, sorted lexicographically.  A :class:`LengthFunction` assigns a
positive length to every edge; from it the vertex weight ``m0(u)`` (sum of
incident lengths) and edge weight ``m1(uv) = 1/length`` are derived.  All
types are immutable after construction.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

__all__ = [
    "Edge",
    "GraphError",
    "Graph",
    "LengthFunction",
    "FujiwaraWeights",
    "canonical_edge",
    "build_graph",
    "cycle_graph",
    "path_graph",
    "length_function",
    "uniform_lengths",
    "fujiwara_weights",
    "normalize_lengths",
    "find_cycle",
    "distance_to_cycle",
]

Edge = tuple[int, int]


class GraphError(ValueError):
    """Structurally invalid graph, edge, vertex, or length data."""


def canonical_edge(u: int, v: int) -> Edge:
    """Return the unordered pair ``{u, v}`` as ``(min, max)``."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: vertex count plus canonical sorted edge list.

    Loops and duplicate edges are rejected at construction.  Disconnected
    graphs may be built (and queried via :meth:`is_connected`); spectral
    operations reject them.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be >= 1, got {self.n}")
        seen: set[Edge] = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop edge ({u}, {v}) is not allowed")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(
                    f"edge ({u}, {v}) out of vertex range 1..{self.n}"
                )
            if u > v:
                raise GraphError(f"edge ({u}, {v}) is not canonical (u < v)")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if tuple(sorted(self.edges)) != self.edges:
            raise GraphError("edge list is not sorted")

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {u: [] for u in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {u: tuple(sorted(nb)) for u, nb in adj.items()}

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in set(self.edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = {1}
        stack = [1]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def is_cycle(self) -> bool:
        """True when the graph is a single cycle (connected, all degrees 2)."""
        return (
            self.n >= 3
            and self.edge_count == self.n
            and self.is_connected()
            and all(self.degree(u) == 2 for u in range(1, self.n + 1))
        )


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Validate and canonicalize an edge list into a :class:`Graph`.

    Pairs are canonicalized to ``u < v`` and sorted.  Loops, duplicate pairs
    (after canonicalization), and out-of-range vertices raise
    :class:`GraphError`.
    """
    canon = []
    for u, v in edges:
        if u == v:
            raise GraphError(f"loop edge ({u}, {v}) is not allowed")
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"edge ({u}, {v}) out of vertex range 1..{n}")
        canon.append(canonical_edge(u, v))
    dupes = {e for e in canon if canon.count(e) > 1}
    if dupes:
        raise GraphError(f"duplicate edge {sorted(dupes)[0]}")
    return Graph(n, tuple(sorted(canon)))


def cycle_graph(n: int) -> Graph:
    """The cycle on vertices ``1..n``: edges ``(i, i+1)`` plus ``(1, n)``."""
    if n < 3:
        raise GraphError(f"a cycle needs at least 3 vertices, got {n}")
    return build_graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def path_graph(n: int) -> Graph:
    """The path ``1 - 2 - ... - n``."""
    if n < 2:
        raise GraphError(f"a path needs at least 2 vertices, got {n}")
    return build_graph(n, [(i, i + 1) for i in range(1, n)])


@dataclass(frozen=True)
class LengthFunction:
    """Positive length per canonical edge."""

    lengths: Mapping[Edge, float]

    def __post_init__(self):
        clean: dict[Edge, float] = {}
        for (u, v), val in self.lengths.items():
            e = canonical_edge(int(u), int(v))
            val = float(val)
            if not val > 0.0:
                raise GraphError(f"length of edge {e} must be positive, got {val}")
            if e in clean:
                raise GraphError(f"duplicate length entry for edge {e}")
            clean[e] = val
        object.__setattr__(self, "lengths", dict(sorted(clean.items())))

    def of(self, u: int, v: int) -> float:
        e = canonical_edge(u, v)
        try:
            return self.lengths[e]
        except KeyError:
            raise GraphError(f"no length assigned to edge {e}") from None

    def total(self) -> float:
        return sum(self.lengths.values())

    def scaled(self, c: float) -> "LengthFunction":
        if not c > 0.0:
            raise GraphError(f"scale factor must be positive, got {c}")
        return LengthFunction({e: c * l for e, l in self.lengths.items()})

    def items(self):
        return self.lengths.items()


def length_function(g: Graph, values) -> LengthFunction:
    """Build a :class:`LengthFunction` covering exactly the edges of ``g``.

    ``values`` is either a single positive number (uniform) or a mapping
    from edges to lengths; coverage is checked both ways.
    """
    if isinstance(values, (int, float)):
        return LengthFunction({e: float(values) for e in g.edges})
    lf = LengthFunction(dict(values))
    missing = [e for e in g.edges if e not in lf.lengths]
    if missing:
        raise GraphError(f"missing length for edge {missing[0]}")
    extra = [e for e in lf.lengths if e not in set(g.edges)]
    if extra:
        raise GraphError(f"length given for non-edge {extra[0]}")
    return lf


def uniform_lengths(g: Graph, value: float = 1.0) -> LengthFunction:
    return length_function(g, value)


@dataclass(frozen=True)
class FujiwaraWeights:
    """Vertex weights ``m0`` and edge weights ``m1`` induced by lengths.

    ``m0(u)`` is the sum of lengths of edges at ``u``; ``m1(uv)`` is the
    reciprocal length.  ``total_m0`` equals twice the total length.
    """

    m0: tuple[float, ...]
    m1: Mapping[Edge, float]
    total_m0: float

    def m0_of(self, u: int) -> float:
        return self.m0[u - 1]

    def m1_of(self, u: int, v: int) -> float:
        return self.m1[canonical_edge(u, v)]


def fujiwara_weights(g: Graph, l: LengthFunction) -> FujiwaraWeights:
    """Compute the induced vertex/edge weights of ``(g, l)``."""
    m0 = [0.0] * g.n
    m1: dict[Edge, float] = {}
    for e in g.edges:
        val = l.of(*e)
        u, v = e
        m0[u - 1] += val
        m0[v - 1] += val
        m1[e] = 1.0 / val
    return FujiwaraWeights(tuple(m0), m1, sum(m0))


def normalize_lengths(l: LengthFunction) -> LengthFunction:
    """Rescale so that twice the total length (= total ``m0``) equals 1."""
    return l.scaled(1.0 / (2.0 * l.total()))


def _bfs_parents(g: Graph, root: int):
    dist = {root: 0}
    parent = {root: 0}
    queue = deque([root])
    closures = []
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y == parent[x]:
                continue
            if y in dist:
                closures.append((x, y, dist[x] + dist[y] + 1))
            else:
                dist[y] = dist[x] + 1
                parent[y] = x
                queue.append(y)
    return dist, parent, closures


def _path_to_root(parent: Mapping[int, int], x: int) -> list[int]:
    path = [x]
    while parent[path[-1]] != 0:
        path.append(parent[path[-1]])
    return path


def find_cycle(g: Graph) -> tuple[int, ...] | None:
    """A shortest cycle of ``g``, or ``None`` for forests.

    Among the shortest cycles reachable by the per-vertex BFS scan, the one
    with the lexicographically smallest sorted vertex set is returned, as an
    ordered vertex sequence starting at its smallest vertex and continuing
    toward the smaller neighbor.
    """
    girth = None
    raw = []
    for root in range(1, g.n + 1):
        dist, parent, closures = _bfs_parents(g, root)
        for x, y, clen in closures:
            raw.append((clen, root, x, y, dict(parent)))
            if girth is None or clen < girth:
                girth = clen
    if girth is None:
        return None
    best: tuple[int, ...] | None = None
    best_cycle: list[int] | None = None
    for clen, root, x, y, parent in raw:
        if clen != girth:
            continue
        px = _path_to_root(parent, x)  # x .. root
        py = _path_to_root(parent, y)  # y .. root
        cycle = px[::-1] + py[:-1]  # root .. x, y .. (root excluded)
        if len(set(cycle)) != clen:
            continue  # closure walk is not a simple cycle of girth length
        key = tuple(sorted(cycle))
        if best is None or key < best:
            best = key
            best_cycle = cycle
    assert best_cycle is not None
    return _orient_cycle(best_cycle)


def _orient_cycle(cycle: list[int]) -> tuple[int, ...]:
    k = len(cycle)
    i = cycle.index(min(cycle))
    rotated = cycle[i:] + cycle[:i]
    if rotated[1] > rotated[-1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def distance_to_cycle(g: Graph, cycle: Iterable[int]) -> dict[int, int]:
    """Edge-count BFS distance from each vertex to the nearest cycle vertex."""
    sources = list(cycle)
    for c in sources:
        if not (1 <= c <= g.n):
            raise GraphError(f"cycle vertex {c} not in graph with n={g.n}")
    dist = {c: 0 for c in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if len(dist) != g.n:
        raise GraphError("graph is disconnected: some vertices cannot reach the cycle")
    return dist
