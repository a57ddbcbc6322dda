"""Canonical-path congestion and its universal lower bound.

Given a path for every ordered vertex pair, the congestion of an edge is the
length-weighted traffic through it, normalized by n and the edge weight; the
maximum over edges lower-bounds comparison constants for the exclusion
chain.  Whatever the paths, the congestion is at least
2 * mean squared hop distance / average weighted degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph, all_pairs_distances, graph_stats


@dataclass(frozen=True)
class PathFamily:
    """One edge-id path per ordered vertex pair; diagonal paths are empty."""

    n: int
    paths: dict

    def length(self, x: int, y: int) -> int:
        return len(self.paths[(x, y)])


def make_path_family(g: WeightedGraph, paths: dict) -> PathFamily:
    """Validate a caller-supplied family: every pair present, every path a
    chain of incident edges from x to y, never shorter than the hop distance."""
    dist = all_pairs_distances(g)
    for x in range(g.n):
        for y in range(g.n):
            try:
                path = paths[(x, y)]
            except KeyError:
                raise ValueError(f"missing path for pair ({x}, {y})") from None
            cur = x
            for eid in path:
                u, v = g.endpoints(eid)
                if cur == u:
                    cur = v
                elif cur == v:
                    cur = u
                else:
                    raise ValueError(f"path for ({x}, {y}) breaks at edge {eid}")
            if cur != y:
                raise ValueError(f"path for ({x}, {y}) ends at {cur}")
            if len(path) < dist[x, y]:
                raise ValueError(f"path for ({x}, {y}) shorter than the hop distance")
    return PathFamily(g.n, {k: tuple(v) for k, v in paths.items()})


def default_paths(g: WeightedGraph) -> PathFamily:
    """Shortest paths with a deterministic tie-break (lowest next-vertex id)."""
    return _shortest_paths(g, rng=None)


def random_shortest_paths(g: WeightedGraph, seed: int = 0) -> PathFamily:
    """Shortest paths with uniformly random tie-breaking (for robustness sweeps)."""
    return _shortest_paths(g, rng=np.random.default_rng(seed))


def _shortest_paths(g: WeightedGraph, rng) -> PathFamily:
    dist = all_pairs_distances(g)
    paths = {}
    for x in range(g.n):
        for y in range(g.n):
            if x == y:
                paths[(x, y)] = ()
                continue
            cur = x
            trail = []
            while cur != y:
                options = [(v, eid) for v, eid, _ in g.adjacency[cur]
                           if dist[v, y] == dist[cur, y] - 1]
                options.sort()
                v, eid = options[0] if rng is None else options[rng.integers(len(options))]
                trail.append(eid)
                cur = v
            paths[(x, y)] = tuple(trail)
    return PathFamily(g.n, paths)


def phi(g: WeightedGraph, paths: PathFamily) -> float:
    """Congestion max over edges of sum over ordered pairs of
    path_length * 1{edge on path} / (n * edge_weight)."""
    load = np.zeros(g.m)
    for (x, y), trail in paths.paths.items():
        ell = len(trail)
        if ell == 0:
            continue
        for eid in trail:
            load[eid] += ell
    per_edge = load / (g.n * g.weights())
    return float(per_edge.max())


def phi_lower_bound(g: WeightedGraph) -> float:
    """2 * mean squared distance / average weighted degree (path-free bound)."""
    stats = graph_stats(g)
    return 2.0 * stats.mean_square_distance / stats.avg_weighted_degree
