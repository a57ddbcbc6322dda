"""Shared-randomness graphical construction.

A realized marked Poisson process (event times, edge marks and, in the
modified variant, fair coin marks at doubled rate) drives every coupled
process in the package: composing the edge transpositions over a time window
yields a vertex permutation whose action on vertices, vertex sets and vertex
tuples realizes the single walker, the exclusion process and the interchange
process from the same noise.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import IntervalOutOfRange
from .graph import WeightedGraph
from .rng import generator


@dataclass(frozen=True)
class EventStream:
    """Realized marked Poisson process on (0, horizon].

    `rate` is the total edge weight W for a standard stream and 2W for a
    modified one; `coin_marks` is present exactly in the modified case.
    `edge_endpoints[e]` are the endpoints of edge id e in the source graph.
    """

    horizon: float
    rate: float
    times: np.ndarray
    edge_marks: np.ndarray
    coin_marks: np.ndarray | None
    seed: int
    n: int
    edge_endpoints: tuple

    @property
    def modified(self) -> bool:
        return self.coin_marks is not None

    @property
    def size(self) -> int:
        return len(self.times)

    def window(self, t: float, u: float):
        """Index range of events with time in (t, u]."""
        if not (0 <= t <= u <= self.horizon):
            raise IntervalOutOfRange(f"(t, u] = ({t}, {u}] not within [0, {self.horizon}]")
        times = self.times
        return bisect_right(times, t), bisect_right(times, u)


def sample_stream(g: WeightedGraph, horizon: float, modified: bool = False,
                  seed: int = 0) -> EventStream:
    """Sample the event stream for `g` on (0, horizon].

    Event times are cumulative exponential gaps at rate W (2W if modified);
    each event carries an edge mark distributed proportionally to weight, and
    modified streams add independent fair coins.  Deterministic in
    (g, horizon, modified, seed).
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    total = g.total_weight
    rate = 2.0 * total if modified else total
    rng = generator(seed)

    times = []
    t = 0.0
    block = max(16, int(rate * horizon * 1.2) + 16)
    done = False
    while not done:
        for gap in rng.exponential(1.0 / rate, size=block):
            t += gap
            if t > horizon:
                done = True
                break
            times.append(t)
    times = np.array(times)

    cumw = np.cumsum(g.weights())
    edge_marks = np.searchsorted(cumw, rng.random(len(times)) * total, side="right")
    edge_marks = np.minimum(edge_marks, g.m - 1).astype(np.int64)
    coin_marks = rng.integers(0, 2, size=len(times)).astype(np.int8) if modified else None
    return EventStream(float(horizon), float(rate), times, edge_marks, coin_marks,
                       int(seed), g.n, tuple((u, v) for u, v, _ in g.edges))


@dataclass(frozen=True)
class VertexPermutation:
    """Bijection of 0..n-1, lifted pointwise to sets and coordinatewise to tuples."""

    forward: np.ndarray

    @classmethod
    def identity(cls, n: int) -> "VertexPermutation":
        return cls(np.arange(n))

    def __call__(self, v: int) -> int:
        return int(self.forward[v])

    def apply(self, state):
        """Apply to a vertex (int), a vertex set, or a vertex tuple."""
        if isinstance(state, (int, np.integer)):
            return int(self.forward[state])
        if isinstance(state, frozenset):
            return frozenset(int(self.forward[v]) for v in state)
        if isinstance(state, set):
            return {int(self.forward[v]) for v in state}
        if isinstance(state, tuple):
            return tuple(int(self.forward[v]) for v in state)
        raise TypeError(f"cannot apply permutation to {type(state).__name__}")

    def is_identity(self) -> bool:
        return bool(np.all(self.forward == np.arange(len(self.forward))))

    def inverse(self) -> "VertexPermutation":
        inv = np.empty_like(self.forward)
        inv[self.forward] = np.arange(len(self.forward))
        return VertexPermutation(inv)

    def then(self, later: "VertexPermutation") -> "VertexPermutation":
        """Composition `later after self` (self acts first in time)."""
        return VertexPermutation(later.forward[self.forward])


def interval_map(stream: EventStream, t: float, u: float,
                 respect_coins: bool = False) -> VertexPermutation:
    """Compose the transpositions of all events with time in (t, u].

    Events are composed in time order; an empty window gives the identity.
    With `respect_coins` (modified streams only) an event applies its edge
    transposition when its coin is 1 and the identity otherwise; without it
    every event applies its transposition.
    """
    if respect_coins and not stream.modified:
        raise ValueError("respect_coins requires a modified stream")
    lo, hi = stream.window(t, u)
    n = stream.n
    fwd = list(range(n))
    inv = list(range(n))
    endpoints = stream.edge_endpoints
    marks = stream.edge_marks
    coins = stream.coin_marks
    for i in range(lo, hi):
        if respect_coins and not coins[i]:
            continue
        a, b = endpoints[marks[i]]
        va, vb = inv[a], inv[b]
        fwd[va], fwd[vb] = b, a
        inv[a], inv[b] = vb, va
    return VertexPermutation(np.array(fwd))


def apply_interval(stream: EventStream, state, t: float, u: float,
                   respect_coins: bool = False):
    """Carry a vertex, vertex set or vertex tuple through the window (t, u].

    Walks the events once and touches only the affected positions, so the
    cost is O(number of events), independent of the graph size.
    """
    if respect_coins and not stream.modified:
        raise ValueError("respect_coins requires a modified stream")
    lo, hi = stream.window(t, u)
    endpoints = stream.edge_endpoints
    marks = stream.edge_marks
    coins = stream.coin_marks

    def active_events():
        for i in range(lo, hi):
            if respect_coins and not coins[i]:
                continue
            yield endpoints[marks[i]]

    if isinstance(state, (int, np.integer)):
        pos = int(state)
        for a, b in active_events():
            if pos == a:
                pos = b
            elif pos == b:
                pos = a
        return pos

    if isinstance(state, (set, frozenset)):
        members = set(state)
        for a, b in active_events():
            ina, inb = a in members, b in members
            if ina != inb:
                members.symmetric_difference_update((a, b))
        return frozenset(members) if isinstance(state, frozenset) else members

    if isinstance(state, tuple):
        where = {v: i for i, v in enumerate(state)}
        if len(where) != len(state):
            raise ValueError("tuple state must have distinct coordinates")
        out = list(state)
        for a, b in active_events():
            ia, ib = where.get(a), where.get(b)
            if ia is not None:
                out[ia] = b
                where[b] = ia
            else:
                where.pop(b, None)
            if ib is not None:
                out[ib] = a
                where[a] = ib
            else:
                where.pop(a, None)
        return tuple(out)

    raise TypeError(f"cannot evolve state of type {type(state).__name__}")


# ---------------------------------------------------------------------------
# Meeting times and the two-particle coupling
# ---------------------------------------------------------------------------

def sample_meeting_time(g: WeightedGraph, x, cap: float, seed: int = 0) -> float:
    """First coincidence time of two independent walkers from x = (x1, x2).

    Returns math.inf when the walkers have not met by `cap`.  The product
    chain is simulated on a single merged clock of rate 2W: each event picks
    a walker fairly and an edge proportionally to weight, and moves the
    walker only if it sits on an endpoint, which reproduces two independent
    realizations of the single-particle walk exactly.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    p1, p2 = int(x[0]), int(x[1])
    if p1 == p2:
        return 0.0
    rng = generator(seed)
    total = g.total_weight
    cumw = np.cumsum(g.weights())
    endpoints = [(u, v) for u, v, _ in g.edges]
    t = 0.0
    block = 256
    while True:
        gaps = rng.exponential(0.5 / total, size=block)
        walkers = rng.random(block)
        eids = np.searchsorted(cumw, rng.random(block) * total, side="right")
        eids = np.minimum(eids, g.m - 1)
        for i in range(block):
            t += gaps[i]
            if t > cap:
                return math.inf
            a, b = endpoints[eids[i]]
            if walkers[i] < 0.5:
                if p1 == a:
                    p1 = b
                elif p1 == b:
                    p1 = a
            else:
                if p2 == a:
                    p2 = b
                elif p2 == b:
                    p2 = a
            if p1 == p2:
                return t


@dataclass(frozen=True)
class CoupledTrajectories:
    """Jump-time records of the coupled (interchange, independent-pair) chain."""

    times: tuple
    ip_states: tuple
    rw_states: tuple
    first_divergence_time: float | None
    horizon: float

    def _state_at(self, states, t):
        if not (0 <= t <= self.horizon):
            raise IntervalOutOfRange(f"t={t} outside [0, {self.horizon}]")
        return states[bisect_right(self.times, t) - 1]

    def ip_at(self, t: float):
        return self._state_at(self.ip_states, t)

    def rw_at(self, t: float):
        return self._state_at(self.rw_states, t)


def coupled_pair(g: WeightedGraph, x, horizon: float, seed: int = 0) -> CoupledTrajectories:
    """Run the diagonal coupling of IP(2, G) and RW(2, G) from x.

    While the two coordinates agree they move together along edges meeting
    the pair in one vertex; the edge joining the pair fires two competing
    transitions, each of which lands the independent pair on the diagonal
    while the interchange pair either swaps or stays.  After that first
    divergence both marginals evolve independently.  Marginally the first
    component is IP(2, G) and the second is RW(2, G).
    """
    x = (int(x[0]), int(x[1]))
    if x[0] == x[1]:
        raise ValueError("start must be a pair of distinct vertices")
    rng = generator(seed)
    eindex = g.edge_index()

    ip = x
    rw = x
    t = 0.0
    times = [0.0]
    ip_states = [ip]
    rw_states = [rw]
    diverged_at = None

    while True:
        moves = []  # (rate, new_ip, new_rw, is_divergence)
        if ip == rw:
            a, b = ip
            pair_eid = eindex.get(frozenset((a, b)))
            for v, eid, w in g.adjacency[a]:
                if v != b:
                    moves.append((w, (v, b), (v, b), False))
            for v, eid, w in g.adjacency[b]:
                if v != a:
                    moves.append((w, (a, v), (a, v), False))
            if pair_eid is not None:
                w = g.edges[pair_eid][2]
                moves.append((w, (b, a), (a, a), True))
                moves.append((w, ip, (b, b), True))
        else:
            ia, ib = ip
            for v, eid, w in g.adjacency[ia]:
                moves.append((w, (v, ib) if v != ib else (ib, ia), None, False))
            for v, eid, w in g.adjacency[ib]:
                if v != ia:  # the shared edge already swaps via ia's list
                    moves.append((w, (ia, v), None, False))
            ra, rb = rw
            for v, eid, w in g.adjacency[ra]:
                moves.append((w, None, (v, rb), False))
            for v, eid, w in g.adjacency[rb]:
                moves.append((w, None, (ra, v), False))

        rates = np.array([mv[0] for mv in moves])
        total = rates.sum()
        t += rng.exponential(1.0 / total)
        if t > horizon:
            break
        pick = np.searchsorted(np.cumsum(rates), rng.random() * total, side="right")
        pick = min(pick, len(moves) - 1)
        _, new_ip, new_rw, diverging = moves[pick]
        if new_ip is not None:
            ip = new_ip
        if new_rw is not None:
            rw = new_rw
        if diverging and diverged_at is None:
            diverged_at = t
        times.append(t)
        ip_states.append(ip)
        rw_states.append(rw)

    return CoupledTrajectories(tuple(times), tuple(ip_states), tuple(rw_states),
                               diverged_at, float(horizon))


# ---------------------------------------------------------------------------
# Stream dump format: header "rate horizon count", then one line per event
# "time edge_id coin" with coin in {0, 1, -}.
# ---------------------------------------------------------------------------

def stream_to_text(stream: EventStream) -> str:
    lines = [f"{float(stream.rate)!r} {float(stream.horizon)!r} {stream.size}"]
    for i in range(stream.size):
        coin = "-" if stream.coin_marks is None else str(int(stream.coin_marks[i]))
        lines.append(f"{float(stream.times[i])!r} {int(stream.edge_marks[i])} {coin}")
    return "\n".join(lines) + "\n"


def stream_from_text(text: str, g: WeightedGraph) -> EventStream:
    rows = [ln for ln in text.splitlines() if ln.strip()]
    rate_s, horizon_s, count_s = rows[0].split()
    count = int(count_s)
    times = np.empty(count)
    marks = np.empty(count, dtype=np.int64)
    coins = np.empty(count, dtype=np.int8)
    modified = None
    for i, ln in enumerate(rows[1:]):
        t_s, e_s, c_s = ln.split()
        times[i] = float(t_s)
        marks[i] = int(e_s)
        has_coin = c_s != "-"
        if modified is None:
            modified = has_coin
        elif modified != has_coin:
            raise ValueError("mixed coin/no-coin event lines")
        coins[i] = int(c_s) if has_coin else 0
    if modified is None:
        modified = float(rate_s) == 2.0 * g.total_weight
    return EventStream(float(horizon_s), float(rate_s), times, marks,
                       coins if modified else None, seed=-1, n=g.n,
                       edge_endpoints=tuple((u, v) for u, v, _ in g.edges))
