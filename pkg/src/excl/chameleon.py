"""Chameleon process: a color-partition chain driven by the modified stream.

The vertex set splits into black (an ordered tuple tracking the leading
particles), red, pink and white.  Phases of length T alternate between
constant-color (coin-gated transpositions move every class) and
color-changing (a red-white edge event turns both endpoints pink while the
pink count is below min(red, white), ignoring its coin).  At every boundary
2kT, including k = 0 and the trivial case min(red, white) = 0, a fair coin
turns all pink vertices red or white ("depinking").  The total ink
|red| + |pink|/2 changes only at depinkings and encodes the conditional law
of one extra interchange particle given the black ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AbsorptionCapExceeded, InvalidTuple
from .event_stream import EventStream
from .graph import WeightedGraph
from .rng import generator, substream

BLACK, RED, PINK, WHITE = 0, 1, 2, 3


@dataclass(frozen=True)
class ChameleonState:
    """Partition of the vertices into an ordered black tuple and three color sets."""

    black: tuple
    red: frozenset
    pink: frozenset
    white: frozenset
    n: int

    @property
    def k(self) -> int:
        """Particle count of the associated interchange process."""
        return len(self.black) + 1

    @property
    def capacity(self) -> int:
        """Number of non-black vertices (the maximal total ink)."""
        return self.n - len(self.black)


def chameleon_state(black, red, pink, white, n: int) -> ChameleonState:
    """Validate and build a state; the four classes must partition 0..n-1."""
    black = tuple(int(v) for v in black)
    red, pink, white = frozenset(map(int, red)), frozenset(map(int, pink)), frozenset(map(int, white))
    if len(set(black)) != len(black):
        raise InvalidTuple("black tuple has repeated vertices")
    classes = [set(black), red, pink, white]
    union = set().union(*classes)
    if union != set(range(n)) or sum(len(c) for c in classes) != n:
        raise InvalidTuple("black/red/pink/white do not partition the vertex set")
    if len(black) >= n:
        raise InvalidTuple("at least one vertex must be non-black")
    return ChameleonState(black, red, pink, white, n)


def init_chameleon(g: WeightedGraph, x) -> ChameleonState:
    """Standard start for a k-tuple x: black = x[:-1], red = {x[-1]}, rest white."""
    x = tuple(int(v) for v in x)
    if len(set(x)) != len(x) or not all(0 <= v < g.n for v in x):
        raise InvalidTuple(f"{x} is not a tuple of distinct vertices of the graph")
    if not (1 <= len(x) <= g.n - 1):
        raise InvalidTuple("need 1 <= k <= n-1 particles")
    black = x[:-1]
    red = frozenset((x[-1],))
    white = frozenset(range(g.n)) - set(black) - red
    return ChameleonState(black, red, frozenset(), white, g.n)


def total_ink(state: ChameleonState) -> float:
    return len(state.red) + 0.5 * len(state.pink)


def ink_at(state: ChameleonState, v: int) -> float:
    if v in state.red:
        return 1.0
    if v in state.pink:
        return 0.5
    return 0.0


@dataclass
class ChameleonTrace:
    """Everything recorded from one run.

    boundary_states[i] is the state at time i*T (after any boundary update);
    hat_states[j] is the state just before the boundary 2(j+1)T and
    hat_inks[j] the total ink just after it.  ink_path starts at the ink
    after the time-0 boundary and appends after every depinking.
    """

    T: float
    initial: ChameleonState
    fill: str
    fill_time: float | None
    rounds: int
    ink_path: list
    depinking_times: list
    depinking_coins: list
    pinkening_log: list
    hat_counts: list
    hat_inks: list
    boundary_states: list = field(default_factory=list)
    hat_states: list = field(default_factory=list)
    sampled: dict = field(default_factory=dict)
    events: list | None = None


def run_chameleon(g: WeightedGraph, s0: ChameleonState, T: float,
                  phases: int | None = None, until_absorbed: bool = False,
                  cap_rounds: int = 10**6, seed: int = 0, rng=None,
                  sample_times=(), record_boundaries: bool = True,
                  record_events: bool = False,
                  pinkening_cap: bool = True) -> ChameleonTrace:
    """Simulate the chameleon process started from `s0`.

    Stopping is either a fixed number of phases (each of length T; boundary
    updates happen after every second phase) or `until_absorbed`, which runs
    until depinking leaves no red or no white vertex (continuing as needed to
    reach any later `sample_times`) and raises AbsorptionCapExceeded beyond
    `cap_rounds` rounds.  Events are drawn lazily one phase at a time at rate
    2W, so no horizon is fixed up front.

    `pinkening_cap=False` drops the |pink| < min(|red|, |white|) requirement
    for a pinkening (the red-decay variant); everything else is unchanged.
    """
    if T <= 0:
        raise ValueError("phase length T must be positive")
    if (phases is None) == (not until_absorbed):
        raise ValueError("specify exactly one of phases= or until_absorbed=True")
    if phases is not None and phases < 0:
        raise ValueError("phases must be nonnegative")
    sample_times = sorted(float(s) for s in sample_times)
    if sample_times and phases is not None and sample_times[-1] > phases * T + 1e-12:
        raise ValueError("sample times must lie within the simulated horizon")
    rng = rng if rng is not None else generator(seed)

    n = g.n
    color = [BLACK] * n
    zpos = [-1] * n
    z = list(s0.black)
    for i, v in enumerate(z):
        zpos[v] = i
    for v in s0.red:
        color[v] = RED
    for v in s0.pink:
        color[v] = PINK
    for v in s0.white:
        color[v] = WHITE
    n_red, n_pink, n_white = len(s0.red), len(s0.pink), len(s0.white)

    rate = 2.0 * g.total_weight
    weights = g.weights()
    cumw = np.cumsum(weights)
    total_w = g.total_weight
    endpoints = [(u, v) for u, v, _ in g.edges]

    trace = ChameleonTrace(
        T=float(T), initial=s0, fill="running", fill_time=None, rounds=0,
        ink_path=[], depinking_times=[], depinking_coins=[], pinkening_log=[],
        hat_counts=[], hat_inks=[],
        events=[] if record_events else None,
    )

    def snapshot() -> ChameleonState:
        red, pink, white = [], [], []
        for v in range(n):
            c = color[v]
            if c == RED:
                red.append(v)
            elif c == PINK:
                pink.append(v)
            elif c == WHITE:
                white.append(v)
        return ChameleonState(tuple(z), frozenset(red), frozenset(pink), frozenset(white), n)

    def depink_boundary(now: float, round_idx: int) -> None:
        nonlocal n_red, n_pink, n_white
        if round_idx > 0:
            trace.hat_counts.append((n_red, n_pink, n_white))
            if record_boundaries:
                trace.hat_states.append(snapshot())
        if n_pink >= (n_red if n_red < n_white else n_white):
            coin = int(rng.integers(0, 2))
            target = RED if coin else WHITE
            if n_pink:
                for v in range(n):
                    if color[v] == PINK:
                        color[v] = target
            if coin:
                n_red += n_pink
            else:
                n_white += n_pink
            n_pink = 0
            trace.depinking_times.append(now)
            trace.depinking_coins.append(coin)
            trace.ink_path.append(float(n_red))
            if trace.fill == "running":
                if n_red == 0:
                    trace.fill = "emptied"
                    trace.fill_time = now
                elif n_white == 0:
                    trace.fill = "filled"
                    trace.fill_time = now
        if round_idx > 0:
            trace.hat_inks.append(n_red + 0.5 * n_pink)

    # pending state samples, consumed in time order
    pending = list(sample_times)

    def flush_samples(limit: float, inclusive: bool) -> None:
        while pending and (pending[0] < limit or (inclusive and pending[0] <= limit)):
            trace.sampled[pending[0]] = snapshot()
            pending.pop(0)

    # time-0 boundary (Box rule applies at every 2kT including k = 0)
    depink_boundary(0.0, 0)
    if not trace.ink_path:
        trace.ink_path.append(n_red + 0.5 * n_pink)
    if record_boundaries:
        trace.boundary_states.append(snapshot())
    flush_samples(0.0, inclusive=True)

    phase = 0
    while True:
        if until_absorbed:
            if trace.fill != "running" and not pending:
                break
            if trace.rounds >= cap_rounds:
                raise AbsorptionCapExceeded(f"no absorption within {cap_rounds} rounds")
        elif phase >= phases:
            break

        t0 = phase * T
        t1 = (phase + 1) * T
        color_changing = (phase % 2 == 1)
        count = int(rng.poisson(rate * T))
        if count:
            times = (t0 + T * np.sort(rng.random(count))).tolist()
            eids = np.minimum(
                np.searchsorted(cumw, rng.random(count) * total_w, side="right"),
                g.m - 1).tolist()
            coins = rng.integers(0, 2, size=count).tolist()
        else:
            times, eids, coins = [], [], []

        for i in range(count):
            tau = times[i]
            eid = eids[i]
            if pending:
                flush_samples(tau, inclusive=False)
            if record_events:
                trace.events.append((tau, eid, coins[i]))
            a, b = endpoints[eid]
            ca = color[a]
            cb = color[b]
            if (color_changing
                    and ((ca == RED and cb == WHITE) or (ca == WHITE and cb == RED))
                    and (not pinkening_cap
                         or n_pink < (n_red if n_red < n_white else n_white))):
                color[a] = PINK
                color[b] = PINK
                n_red -= 1
                n_white -= 1
                n_pink += 2
                trace.pinkening_log.append((tau, a if ca == RED else b, b if ca == RED else a))
            elif coins[i]:
                color[a], color[b] = cb, ca
                pa, pb = zpos[a], zpos[b]
                if pa >= 0:
                    z[pa] = b
                if pb >= 0:
                    z[pb] = a
                zpos[a], zpos[b] = pb, pa

        phase += 1
        if phase % 2 == 0:
            flush_samples(t1, inclusive=False)
            trace.rounds += 1
            depink_boundary(t1, trace.rounds)
            flush_samples(t1, inclusive=True)
        else:
            flush_samples(t1, inclusive=True)
        if record_boundaries:
            trace.boundary_states.append(snapshot())
        assert n_red + n_pink + n_white == n - len(z)

    flush_samples(phase * T, inclusive=True)
    if pending:
        raise ValueError(f"run ended at {phase * T} before sample times {pending}")
    return trace


def hat_chain(trace: ChameleonTrace):
    """Per-round pairs (state just before the boundary, ink just after it)."""
    if trace.rounds < 1:
        raise ValueError("trace has no completed round")
    if len(trace.hat_states) != len(trace.hat_inks):
        raise ValueError("trace was recorded without boundary snapshots")
    return list(zip(trace.hat_states, trace.hat_inks))


# ---------------------------------------------------------------------------
# First-contact diagnostics on a color-changing window
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FirstContactRecord:
    """Per vertex: first event time touching it in the window, and the label
    of the particle then sitting at the other endpoint (None if never hit)."""

    first_time: dict
    partner: dict


def first_contact_partners(stream: EventStream, T: float,
                           round_index: int = 1) -> FirstContactRecord:
    """Scan the color-changing window ((2j-1)T, 2jT] of a modified stream.

    For each vertex a, the first event whose edge contains a fixes phi_a;
    its partner is the pure-flow preimage of the other endpoint just before
    that event, where the pure flow composes the coin-gated transpositions
    from the start of the window.
    """
    if not stream.modified:
        raise ValueError("first-contact scan requires a modified stream")
    j = int(round_index)
    lo, hi = stream.window((2 * j - 1) * T, 2 * j * T)
    n = stream.n
    fwd = list(range(n))
    inv = list(range(n))
    first_time: dict = {}
    partner: dict = {}
    for i in range(lo, hi):
        a, b = stream.edge_endpoints[stream.edge_marks[i]]
        if a not in first_time:
            first_time[a] = float(stream.times[i])
            partner[a] = inv[b]
        if b not in first_time:
            first_time[b] = float(stream.times[i])
            partner[b] = inv[a]
        if stream.coin_marks[i]:
            va, vb = inv[a], inv[b]
            fwd[va], fwd[vb] = b, a
            inv[a], inv[b] = vb, va
    for v in range(n):
        first_time.setdefault(v, math.inf)
        partner.setdefault(v, None)
    return FirstContactRecord(first_time, partner)


# ---------------------------------------------------------------------------
# Trace export: line-oriented "kind time payload" records, sufficient to
# replay the run offline (events plus depinking coins) and to recompute all
# statistics.  Requires a trace recorded with record_events=True.
# ---------------------------------------------------------------------------

def _state_text(state: ChameleonState) -> str:
    return " ".join([
        "black=" + (",".join(map(str, state.black)) or "-"),
        "red=" + (",".join(map(str, sorted(state.red))) or "-"),
        "pink=" + (",".join(map(str, sorted(state.pink))) or "-"),
        "white=" + (",".join(map(str, sorted(state.white))) or "-"),
    ])


def trace_to_text(trace: ChameleonTrace) -> str:
    """Serialize a trace for offline replay and analysis."""
    if trace.events is None:
        raise ValueError("trace was recorded without record_events=True")
    lines = [f"chameleon T={float(trace.T)!r} n={trace.initial.n} "
             f"rounds={trace.rounds} fill={trace.fill}"]
    lines.append("init 0.0 " + _state_text(trace.initial))
    records = [("event", t, f"{eid} {coin}") for t, eid, coin in trace.events]
    records += [("pinken", t, f"{r} {w}") for t, r, w in trace.pinkening_log]
    records += [("depink", t, str(c)) for t, c in
                zip(trace.depinking_times, trace.depinking_coins)]
    # depinkings resolve after the events of their round; pinkenings after
    # the coinciding event line
    order = {"event": 0, "pinken": 1, "depink": 2}
    records.sort(key=lambda r: (r[1], order[r[0]]))
    lines.extend(f"{kind} {float(t)!r} {payload}" for kind, t, payload in records)
    return "\n".join(lines) + "\n"


def parse_trace_events(text: str):
    """Recover (T, initial state, events, depinking coins) from an export."""
    rows = [ln for ln in text.splitlines() if ln.strip()]
    head = dict(part.split("=") for part in rows[0].split()[1:])
    T, n = float(head["T"]), int(head["n"])
    fields = dict(part.split("=") for part in rows[1].split()[2:])

    def group(name):
        raw = fields[name]
        return () if raw == "-" else tuple(int(v) for v in raw.split(","))

    initial = chameleon_state(group("black"), group("red"), group("pink"),
                              group("white"), n)
    events = []
    depink_coins = []
    for ln in rows[2:]:
        kind, t, *payload = ln.split()
        if kind == "event":
            events.append((float(t), int(payload[0]), int(payload[1])))
        elif kind == "depink":
            depink_coins.append(int(payload[0]))
    return T, initial, events, depink_coins


# ---------------------------------------------------------------------------
# Monte Carlo check of the conditional-law identity
# ---------------------------------------------------------------------------

@dataclass
class IdentityCheckReport:
    """Worst standardized deviation between the ink estimator and the exact law."""

    max_abs_deviation: float
    deviations: np.ndarray
    mc: np.ndarray
    exact: np.ndarray
    sigma: np.ndarray
    trials: int
    space: object


def identity_check(g: WeightedGraph, x, t: float, T: float,
                   trials: int, seed: int = 0) -> IdentityCheckReport:
    """Estimate E[ink_t(b) 1{black_t = c}] over all (c, b) and compare with
    the exact interchange law P[x_t = (c, b)].

    Sigma uses the Bernoulli bound sqrt(p (1-p) / trials), which dominates
    the true standard error of the [0,1]-valued estimator.  Cells with exact
    probability zero must be exactly zero empirically (the estimator is
    almost surely zero there); any mass shows up as an infinite deviation.
    """
    from . import exact as exact_mod

    x = tuple(int(v) for v in x)
    k = len(x)
    gen = exact_mod.build_generator(g, "ip_k", k)
    p = exact_mod.transition_distribution(gen, x, t).probabilities
    index = gen.space.index

    s0 = init_chameleon(g, x)
    phases = max(0, math.ceil(t / T - 1e-12))
    acc = np.zeros(gen.size)
    for trial in range(trials):
        trace = run_chameleon(g, s0, T, phases=phases, rng=substream(seed, trial),
                              sample_times=(t,), record_boundaries=False)
        st = trace.sampled[t]
        c = st.black
        for b in st.red:
            acc[index[c + (b,)]] += 1.0
        for b in st.pink:
            acc[index[c + (b,)]] += 0.5

    mc = acc / trials
    sigma = np.sqrt(p * (1.0 - p) / trials)
    dev = np.zeros(gen.size)
    live = sigma > 0
    dev[live] = (mc[live] - p[live]) / sigma[live]
    # degenerate cells (p = 0 or 1) admit no fluctuation at all
    dev[~live] = np.where(mc[~live] == p[~live], 0.0, np.inf)
    return IdentityCheckReport(float(np.abs(dev).max()), dev, mc, p, sigma,
                               trials, gen.space)
