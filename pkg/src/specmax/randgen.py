"""Seeded random graph/length instances for property suites and evidence runs."""
from __future__ import annotations

import numpy as np

from .graphs import Graph, LengthFunction, build_graph, find_cycle

__all__ = ["random_connected_graph", "random_cyclic_graph", "random_lengths"]


def random_connected_graph(rng: np.random.Generator, n: int, p: float = 0.45) -> Graph:
    """Erdos-Renyi style graph on ``1..n`` resampled until connected."""
    while True:
        edges = [
            (u, v)
            for u in range(1, n + 1)
            for v in range(u + 1, n + 1)
            if rng.random() < p
        ]
        if len(edges) < n - 1:
            continue
        g = build_graph(n, edges)
        if g.is_connected():
            return g


def random_cyclic_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    """Connected random graph containing at least one cycle."""
    while True:
        g = random_connected_graph(rng, n, p)
        if find_cycle(g) is not None:
            return g


def random_lengths(
    rng: np.random.Generator, g: Graph, lo: float = 0.1, hi: float = 10.0
) -> LengthFunction:
    """Log-uniform lengths in ``[lo, hi]`` on the edges of ``g``."""
    vals = np.exp(rng.uniform(np.log(lo), np.log(hi), size=g.edge_count))
    return LengthFunction({e: float(v) for e, v in zip(g.edges, vals)})
