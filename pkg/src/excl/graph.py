"""Weighted graphs: container, standard generators, metrics and text I/O.

Vertices are dense integers ``0..n-1``.  Graphs are immutable once built and
always connected; every other module in the package consumes this type.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraph, GenerationFailed, InvalidEdge
from .rng import substream

#: Dense all-pairs distance matrices above this vertex count are refused.
DISTANCE_CAP = 20000

_RETRY_BUDGET = 100


@dataclass(frozen=True)
class WeightedGraph:
    """Connected weighted graph on vertices ``0..n-1``.

    Attributes
    ----------
    n : int
        Vertex count.
    edges : tuple of (u, v, w)
        Canonical edge list with ``u < v`` and ``w > 0``.
    adjacency : tuple of tuples of (neighbor, edge_id, weight)
        Incidence lists, one per vertex.
    total_weight : float
        Sum of all edge weights.
    """

    n: int
    edges: tuple
    adjacency: tuple
    total_weight: float

    @property
    def m(self) -> int:
        return len(self.edges)

    def endpoints(self, edge_id: int) -> tuple:
        u, v, _ = self.edges[edge_id]
        return u, v

    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.edges], dtype=float)

    def edge_index(self) -> dict:
        """Map frozen endpoint pairs to edge ids."""
        return {frozenset((u, v)): i for i, (u, v, _) in enumerate(self.edges)}

    def degree_weight(self, v: int) -> float:
        """Total weight incident to `v` (the jump rate of a walker sitting there)."""
        return sum(w for _, _, w in self.adjacency[v])

    def __repr__(self) -> str:  # keep reprs short; edge lists can be long
        return f"WeightedGraph(n={self.n}, m={self.m}, W={self.total_weight:g})"


def build_graph(n: int, edge_list) -> WeightedGraph:
    """Validate an edge list and assemble a connected :class:`WeightedGraph`.

    Raises
    ------
    InvalidEdge
        On self-loops, duplicate pairs, nonpositive weights or bad vertex ids.
    DisconnectedGraph
        If the graph is not connected (isolated vertices included).
    """
    if n < 1:
        raise InvalidEdge(f"vertex count must be positive, got {n}")
    seen = set()
    edges = []
    for u, v, w in edge_list:
        u, v, w = int(u), int(v), float(w)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidEdge(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise InvalidEdge(f"self-loop at vertex {u}")
        if w <= 0 or not np.isfinite(w):
            raise InvalidEdge(f"edge ({u},{v}) has nonpositive weight {w}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InvalidEdge(f"duplicate edge {{{u},{v}}}")
        seen.add(key)
        edges.append((key[0], key[1], w))

    adjacency = [[] for _ in range(n)]
    for eid, (u, v, w) in enumerate(edges):
        adjacency[u].append((v, eid, w))
        adjacency[v].append((u, eid, w))

    # connectivity check; rejects isolated vertices as a side effect
    reached = _bfs_reach(n, adjacency, 0)
    if reached < n:
        raise DisconnectedGraph(f"only {reached} of {n} vertices reachable from 0")

    return WeightedGraph(
        n=n,
        edges=tuple(edges),
        adjacency=tuple(tuple(a) for a in adjacency),
        total_weight=float(sum(w for _, _, w in edges)),
    )


def _bfs_reach(n, adjacency, start):
    seen = bytearray(n)
    seen[start] = 1
    queue = deque([start])
    count = 1
    while queue:
        u = queue.popleft()
        for v, _, _ in adjacency[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                queue.append(v)
    return count


# ---------------------------------------------------------------------------
# Generators.  All weights are 1; randomized kinds are deterministic in
# (params, seed) and relabel their surviving component canonically by sorted
# original vertex id.
# ---------------------------------------------------------------------------

def path_graph(n: int) -> WeightedGraph:
    if n < 2:
        raise InvalidEdge("path needs at least 2 vertices")
    return build_graph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def cycle_graph(n: int) -> WeightedGraph:
    if n < 3:
        raise InvalidEdge("cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def complete_graph(n: int) -> WeightedGraph:
    if n < 2:
        raise InvalidEdge("complete graph needs at least 2 vertices")
    return build_graph(n, [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)])


def torus_graph(d: int, L: int) -> WeightedGraph:
    """Discrete torus (Z/LZ)^d with nearest-neighbor edges.

    For L = 2 the +1 and -1 neighbors coincide and the edge appears once.
    """
    if d < 1 or L < 2:
        raise InvalidEdge("torus needs d >= 1 and L >= 2")
    n = L**d
    pairs = set()
    for vid in range(n):
        coords = _torus_coords(vid, d, L)
        for axis in range(d):
            nb = list(coords)
            nb[axis] = (nb[axis] + 1) % L
            uid = _torus_id(nb, L)
            if uid != vid:
                pairs.add((min(vid, uid), max(vid, uid)))
    return build_graph(n, [(u, v, 1.0) for u, v in sorted(pairs)])


def _torus_coords(vid, d, L):
    coords = []
    for _ in range(d):
        coords.append(vid % L)
        vid //= L
    return coords


def _torus_id(coords, L):
    vid = 0
    for c in reversed(coords):
        vid = vid * L + c
    return vid


def erdos_renyi_giant(n: int, c: float, seed: int) -> WeightedGraph:
    """Largest component of G(n, c/n), relabelled to 0..size-1.

    Retries with fresh randomness (attempt index mixed into the seed) until
    the largest component has at least two vertices.
    """
    if n < 2:
        raise InvalidEdge("need n >= 2")
    p = c / n
    for attempt in range(_RETRY_BUDGET):
        rng = substream(seed, attempt)
        edges = _gnp_edges(n, p, rng)
        comp = _largest_component(n, edges)
        if len(comp) >= 2:
            return _relabel(comp, edges)
    raise GenerationFailed(f"no giant component of size >= 2 in {_RETRY_BUDGET} attempts")


def _gnp_edges(n, p, rng):
    """All G(n,p) edges, sampled in lexicographic pair order."""
    draws = rng.random(n * (n - 1) // 2)
    edges = []
    idx = 0
    for u in range(n):
        for v in range(u + 1, n):
            if draws[idx] < p:
                edges.append((u, v))
            idx += 1
    return edges


def random_regular_graph(n: int, d: int, seed: int) -> WeightedGraph:
    """Random d-regular simple connected graph via the configuration model."""
    if n * d % 2 != 0 or not (0 < d < n):
        raise InvalidEdge(f"infeasible degree sequence n={n}, d={d}")
    for attempt in range(_RETRY_BUDGET * 10):
        rng = substream(seed, attempt)
        stubs = rng.permutation(np.repeat(np.arange(n), d))
        pairs = stubs.reshape(-1, 2)
        edges = set()
        ok = True
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if not ok:
            continue
        adjacency = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(edges):
            adjacency[u].append((v, eid, 1.0))
            adjacency[v].append((u, eid, 1.0))
        if _bfs_reach(n, adjacency, 0) == n:
            return build_graph(n, [(u, v, 1.0) for u, v in sorted(edges)])
    raise GenerationFailed(f"no simple connected {d}-regular pairing found")


def percolation_torus(d: int, L: int, p: float, seed: int) -> WeightedGraph:
    """Largest component of bond percolation on (Z/LZ)^d, relabelled.

    Each torus edge is kept independently with probability `p`; among maximal
    components, ties break toward the one containing the smallest vertex id.
    """
    base = torus_graph(d, L)
    base_pairs = [(u, v) for u, v, _ in base.edges]
    for attempt in range(_RETRY_BUDGET):
        rng = substream(seed, attempt)
        keep = rng.random(len(base_pairs)) < p
        edges = [uv for uv, k in zip(base_pairs, keep) if k]
        comp = _largest_component(base.n, edges)
        if len(comp) >= 2:
            return _relabel(comp, edges)
    raise GenerationFailed(f"no percolation component of size >= 2 in {_RETRY_BUDGET} attempts")


def _largest_component(n, edges):
    """Vertex set of the largest component; ties -> smallest contained id."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = bytearray(n)
    best = []
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = 1
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    comp.append(v)
                    queue.append(v)
        if len(comp) > len(best):  # first-found wins ties: scan order = id order
            best = comp
    return sorted(best)


def _relabel(component, edges):
    remap = {old: new for new, old in enumerate(component)}
    inside = [(remap[u], remap[v], 1.0) for u, v in edges if u in remap and v in remap]
    return build_graph(len(component), inside)


_GENERATORS = {
    "path": (path_graph, (int,), False),
    "cycle": (cycle_graph, (int,), False),
    "complete": (complete_graph, (int,), False),
    "torus": (torus_graph, (int, int), False),
    "erdos_renyi_giant": (erdos_renyi_giant, (int, float), True),
    "random_regular": (random_regular_graph, (int, int), True),
    "percolation_torus": (percolation_torus, (int, int, float), True),
}


def generate_graph(spec: str, seed: int = 0) -> WeightedGraph:
    """Dispatch a generator from a text spec like ``"cycle:4"``.

    Specs are ``kind:p1,p2,...``; random kinds additionally consume `seed`.
    Known kinds: path:n, cycle:n, complete:n, torus:d,L,
    erdos_renyi_giant:n,c, random_regular:n,d, percolation_torus:d,L,p.
    """
    kind, _, rest = spec.partition(":")
    if kind not in _GENERATORS:
        raise InvalidEdge(f"unknown graph kind {kind!r}")
    fn, sig, randomized = _GENERATORS[kind]
    raw = [s for s in rest.split(",") if s] if rest else []
    if len(raw) != len(sig):
        raise InvalidEdge(f"{kind} expects {len(sig)} parameters, got {len(raw)}")
    args = [t(s) for t, s in zip(sig, raw)]
    if randomized:
        args.append(seed)
    return fn(*args)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def all_pairs_distances(g: WeightedGraph) -> np.ndarray:
    """Hop-count distance matrix (weights ignored), via BFS from each vertex."""
    if g.n > DISTANCE_CAP:
        raise InvalidEdge(f"distance matrix refused for n={g.n} > {DISTANCE_CAP}")
    neighbors = [[v for v, _, _ in g.adjacency[u]] for u in range(g.n)]
    dist = np.full((g.n, g.n), -1, dtype=np.int32)
    for s in range(g.n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for v in neighbors[u]:
                if row[v] < 0:
                    row[v] = du
                    queue.append(v)
    return dist


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    total_weight: float
    avg_weighted_degree: float
    mean_square_distance: float


def graph_stats(g: WeightedGraph) -> GraphStats:
    """Summary statistics used by the congestion lower bound.

    ``avg_weighted_degree`` is ``2 W / n``; ``mean_square_distance`` averages
    the squared hop distance over all ordered vertex pairs, diagonal included.
    """
    dist = all_pairs_distances(g).astype(float)
    return GraphStats(
        n=g.n,
        m=g.m,
        total_weight=g.total_weight,
        avg_weighted_degree=2.0 * g.total_weight / g.n,
        mean_square_distance=float(np.mean(dist**2)),
    )


# ---------------------------------------------------------------------------
# Text format: first line "n m", then one "u v w" line per edge.  Weights are
# written with repr() so any float round-trips exactly.
# ---------------------------------------------------------------------------

def graph_to_text(g: WeightedGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v} {w!r}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> WeightedGraph:
    rows = [ln for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise InvalidEdge("empty graph text")
    head = rows[0].split()
    if len(head) != 2:
        raise InvalidEdge(f"bad header line {rows[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(rows) - 1 != m:
        raise InvalidEdge(f"expected {m} edge lines, found {len(rows) - 1}")
    edges = []
    for ln in rows[1:]:
        u, v, w = ln.split()
        edges.append((int(u), int(v), float(w)))
    return build_graph(n, edges)
