"""Exact finite-state oracles for the walk, exclusion and interchange chains.

State spaces are enumerated in canonical lexicographic order, generators are
assembled sparsely, and transition rows come from uniformization (a
Poissonized power series of the stochastic matrix ``I + Q/rate``).  Mixing
times are found by exponential bracketing plus bisection, which is valid
because worst-case total-variation distance is non-increasing in time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import NumericalError, SpaceMismatch, StateSpaceTooLarge
from .graph import WeightedGraph

#: Default cap on enumerated state-space size.
STATE_CAP = 200_000

#: Dense-matrix paths (eigendecompositions, full transition matrices) are
#: used up to this many states.
DENSE_CAP = 4096

KINDS = ("rw", "rw_k", "ex_k", "ip_k")


@dataclass(frozen=True)
class StateSpace:
    """Canonically ordered state space for one of the four chain kinds."""

    kind: str
    k: int
    states: tuple
    index: dict

    @property
    def size(self) -> int:
        return len(self.states)

    @classmethod
    def generic(cls, labels) -> "StateSpace":
        """Ad-hoc space over arbitrary hashable labels (for free-standing
        distributions such as product laws in tests)."""
        labels = tuple(labels)
        return cls("generic", 1, labels, {s: i for i, s in enumerate(labels)})


def _cardinality(n: int, kind: str, k: int) -> int:
    if kind == "rw":
        return n
    if kind == "rw_k":
        return n**k
    if kind == "ex_k":
        return math.comb(n, k)
    if kind == "ip_k":
        return math.perm(n, k)
    raise ValueError(f"unknown kind {kind!r}")


def enumerate_states(g: WeightedGraph, kind: str, k: int = 1, cap: int = STATE_CAP) -> StateSpace:
    """Enumerate the state space of `kind` with `k` particles on `g`.

    rw: vertices; rw_k: k-tuples (repeats allowed); ex_k: k-subsets as sorted
    tuples; ip_k: k-tuples of distinct vertices.  All in lexicographic order.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not (1 <= k <= g.n):
        raise ValueError(f"particle count k={k} out of range for n={g.n}")
    size = _cardinality(g.n, kind, k)
    if size > cap:
        raise StateSpaceTooLarge(f"{kind} with k={k} on n={g.n} has {size} states > cap {cap}")
    verts = range(g.n)
    if kind == "rw":
        states = tuple(verts)
    elif kind == "rw_k":
        states = tuple(itertools.product(verts, repeat=k))
    elif kind == "ex_k":
        states = tuple(itertools.combinations(verts, k))
    else:
        states = tuple(itertools.permutations(verts, k))
    return StateSpace(kind, k if kind != "rw" else 1, states, {s: i for i, s in enumerate(states)})


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

@dataclass
class SparseGenerator:
    """Rate matrix Q (rows sum to zero) plus its uniformization constant."""

    space: StateSpace
    q: sp.csr_matrix
    uniformization_rate: float
    _eig: tuple = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.space.size

    def eigensystem(self):
        """Cached symmetric eigendecomposition of the dense generator."""
        if self._eig is None:
            if self.size > DENSE_CAP:
                raise StateSpaceTooLarge(
                    f"dense eigendecomposition refused for {self.size} states")
            dense = self.q.toarray()
            dense = 0.5 * (dense + dense.T)  # exact symmetry for eigh
            self._eig = np.linalg.eigh(dense)
        return self._eig


def _swap_in_tuple(state: tuple, u: int, v: int) -> tuple:
    return tuple(v if x == u else u if x == v else x for x in state)


def build_generator(g: WeightedGraph, kind: str, k: int = 1, cap: int = STATE_CAP) -> SparseGenerator:
    """Assemble the symmetric generator of the requested chain.

    Off-diagonal entries are the edge weights w_e, one per (state, edge) pair
    for which the edge transposition changes the state; rw_k instead moves a
    single coordinate at a time (k independent walkers).
    """
    space = enumerate_states(g, kind, k, cap)
    rows, cols, vals = [], [], []

    if kind == "rw":
        for u, v, w in g.edges:
            rows += [u, v]
            cols += [v, u]
            vals += [w, w]
    elif kind == "rw_k":
        for i, state in enumerate(space.states):
            for coord in range(k):
                u = state[coord]
                for v, _, w in g.adjacency[u]:
                    target = state[:coord] + (v,) + state[coord + 1:]
                    rows.append(i)
                    cols.append(space.index[target])
                    vals.append(w)
    elif kind == "ex_k":
        for i, state in enumerate(space.states):
            occupied = set(state)
            for u, v, w in g.edges:
                if (u in occupied) != (v in occupied):
                    target = tuple(sorted(_swap_in_tuple(state, u, v)))
                    rows.append(i)
                    cols.append(space.index[target])
                    vals.append(w)
    else:  # ip_k
        for i, state in enumerate(space.states):
            occupied = set(state)
            for u, v, w in g.edges:
                if u in occupied or v in occupied:
                    target = _swap_in_tuple(state, u, v)
                    if target != state:
                        rows.append(i)
                        cols.append(space.index[target])
                        vals.append(w)

    size = space.size
    q = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
    out_rates = np.asarray(q.sum(axis=1)).ravel()
    q = q + sp.diags(-out_rates)
    rate = 1.01 * out_rates.max() if size > 1 and out_rates.max() > 0 else 1.0
    return SparseGenerator(space, q.tocsr(), float(rate))


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------

@dataclass
class DiscreteDistribution:
    """Dense probability vector over an enumerated state space."""

    space: StateSpace
    probabilities: np.ndarray

    def prob(self, state) -> float:
        return float(self.probabilities[self.space.index[state]])

    def as_dict(self) -> dict:
        return {s: float(p) for s, p in zip(self.space.states, self.probabilities)}


def make_distribution(space: StateSpace, vec) -> DiscreteDistribution:
    """Clamp roundoff negatives, validate and renormalize a raw vector.

    Entries below -1e-12 indicate a bug and raise; entries in [-1e-12, 0) are
    treated as roundoff and clamped to zero.  The total mass must already be
    within 1e-10 of one.
    """
    vec = np.asarray(vec, dtype=float).copy()
    low = vec.min() if vec.size else 0.0
    if low < -1e-12:
        raise NumericalError(f"distribution entry {low} below -1e-12")
    np.clip(vec, 0.0, None, out=vec)
    total = vec.sum()
    if abs(total - 1.0) > 1e-10:
        raise NumericalError(f"distribution mass {total} deviates from 1 by > 1e-10")
    return DiscreteDistribution(space, vec / total)


def point_mass(space: StateSpace, state) -> DiscreteDistribution:
    vec = np.zeros(space.size)
    vec[space.index[state]] = 1.0
    return DiscreteDistribution(space, vec)


def tv_distance(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Total-variation distance, computed as half the L1 norm."""
    if p.space is not q.space and p.space != q.space:
        raise SpaceMismatch("distributions on different state spaces")
    return 0.5 * float(np.abs(p.probabilities - q.probabilities).sum())


# ---------------------------------------------------------------------------
# Uniformization
# ---------------------------------------------------------------------------

def _poisson_weights(mu: float, tol: float):
    """Poisson(mu) pmf values 0..N with tail mass below `tol`, log-space safe."""
    if mu <= 0:
        return np.array([1.0])
    n_hi = int(mu + 12.0 * math.sqrt(mu + 1.0) + 60.0)
    while True:
        js = np.arange(n_hi + 1)
        logw = -mu + js * math.log(mu) - gammaln(js + 1.0)
        w = np.exp(logw)
        if 1.0 - w.sum() < tol:
            return w
        n_hi *= 2  # defensive; the initial window virtually always suffices


def transition_distribution(gen: SparseGenerator, s0, t: float, tol: float = 1e-10) -> DiscreteDistribution:
    """Row of e^{tQ} from state `s0` by uniformization.

    The truncation error of the Poisson series is below `tol` in L1 before the
    final renormalization; `tol` must lie in (0, 1e-6].

    Parameters
    ----------
    s0 : state
        A state of ``gen.space`` (an int for rw, a tuple otherwise).
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    if not (0 < tol <= 1e-6):
        raise ValueError("tol must lie in (0, 1e-6]")
    space = gen.space
    vec = np.zeros(space.size)
    vec[space.index[s0]] = 1.0
    if t == 0:
        return DiscreteDistribution(space, vec)

    rate = gen.uniformization_rate
    weights = _poisson_weights(rate * t, tol)
    p_dense = None
    if space.size <= DENSE_CAP:
        p_dense = np.eye(space.size) + gen.q.toarray() / rate
    p_sparse = None if p_dense is not None else (sp.eye(space.size) + gen.q / rate).tocsr()

    acc = np.zeros(space.size)
    for w in weights:
        if w > 0.0:
            acc += w * vec
        vec = vec @ p_dense if p_dense is not None else p_sparse.T @ vec
    acc /= acc.sum()  # redistribute the (< tol) truncated tail mass
    return make_distribution(space, acc)


def transition_matrix(gen: SparseGenerator, t: float) -> np.ndarray:
    """Full e^{tQ} via the cached symmetric eigendecomposition."""
    w, u = gen.eigensystem()
    return (u * np.exp(np.minimum(t * w, 0.0))) @ u.T


def worst_case_distance(gen: SparseGenerator, t: float) -> float:
    """max over starting states of TV(p_t(s, .), uniform).

    Dense spectral path for spaces up to DENSE_CAP states; otherwise falls
    back to per-row uniformization.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    size = gen.size
    if size == 1:
        return 0.0
    if size <= DENSE_CAP:
        pt = transition_matrix(gen, t)
        return float(0.5 * np.abs(pt - 1.0 / size).sum(axis=1).max())
    worst = 0.0
    uniform = 1.0 / size
    for s in gen.space.states:
        row = transition_distribution(gen, s, t).probabilities
        worst = max(worst, 0.5 * float(np.abs(row - uniform).sum()))
    return worst


def mixing_time(gen: SparseGenerator, eps: float, time_tol: float = 1e-6) -> float:
    """Smallest t with worst-case TV below `eps`, to additive `time_tol`.

    Exponential bracketing from 1/rate, then bisection; valid because the
    worst-case distance is non-increasing in t.
    """
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    size = gen.size
    if size == 1 or 1.0 - 1.0 / size <= eps:
        return 0.0
    hi = 1.0 / gen.uniformization_rate
    lo = 0.0
    for _ in range(400):
        if worst_case_distance(gen, hi) <= eps:
            break
        lo = hi
        hi *= 2.0
    else:
        raise NumericalError("mixing-time bracketing did not terminate")
    while hi - lo > time_tol:
        mid = 0.5 * (lo + hi)
        if worst_case_distance(gen, mid) <= eps:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Meeting times: two independent walkers with an absorbing diagonal
# ---------------------------------------------------------------------------

def build_meeting_generator(g: WeightedGraph, cap: int = STATE_CAP) -> SparseGenerator:
    """RW(2,G) on ordered pairs with every diagonal state made absorbing."""
    gen = build_generator(g, "rw_k", 2, cap)
    q = gen.q.tolil()
    for v in range(g.n):
        i = gen.space.index[(v, v)]
        q.rows[i] = []
        q.data[i] = []
    q = q.tocsr()
    out = -np.asarray(q.diagonal())
    rate = 1.01 * out.max() if out.max() > 0 else 1.0
    return SparseGenerator(gen.space, q, float(rate))


def meeting_time_tail(g: WeightedGraph, x, t: float, tol: float = 1e-10) -> float:
    """P[two independent walkers started at x=(x1,x2) have not met by t]."""
    x = (int(x[0]), int(x[1]))
    if x[0] == x[1]:
        return 0.0
    gen = build_meeting_generator(g)
    dist = transition_distribution(gen, x, t, tol)
    ondiag = sum(dist.probabilities[gen.space.index[(v, v)]] for v in range(g.n))
    return float(max(0.0, 1.0 - ondiag))


def meeting_survival_matrix(g: WeightedGraph, t: float) -> np.ndarray:
    """P[M(x) > t] for every ordered pair x, as an (n, n) matrix.

    Works on the transient (off-diagonal) block of the absorbing product
    chain, which is symmetric, so one eigendecomposition serves any t; this
    stays exact for the enormous horizons used by the easy-graph test.
    """
    n = g.n
    transient = [(a, b) for a in range(n) for b in range(n) if a != b]
    if len(transient) > DENSE_CAP:
        raise StateSpaceTooLarge(f"{len(transient)} transient pair states > {DENSE_CAP}")
    idx = {s: i for i, s in enumerate(transient)}
    m = len(transient)
    q = np.zeros((m, m))
    out = np.zeros(m)
    for i, (a, b) in enumerate(transient):
        for v, _, w in g.adjacency[a]:
            out[i] += w
            if v != b:
                q[i, idx[(v, b)]] += w
        for v, _, w in g.adjacency[b]:
            out[i] += w
            if v != a:
                q[i, idx[(a, v)]] += w
    q -= np.diag(out)
    w_eig, u = np.linalg.eigh(0.5 * (q + q.T))
    surv_vec = u @ (np.exp(np.minimum(t * w_eig, 0.0)) * (u.T @ np.ones(m)))
    surv = np.zeros((n, n))
    for (a, b), i in idx.items():
        surv[a, b] = min(1.0, max(0.0, surv_vec[i]))
    return surv


# ---------------------------------------------------------------------------
# Negative correlation
# ---------------------------------------------------------------------------

def negative_correlation_report(g: WeightedGraph, k: int, initial, t: float, cap: int = STATE_CAP):
    """Exact occupancy covariances of the exclusion process at time t.

    Returns ``(max_violation, (u, v))`` where the violation of a vertex pair
    is P[u and v occupied] - P[u occupied] P[v occupied]; nonpositive values
    everywhere are the negative-correlation property.
    """
    gen = build_generator(g, "ex_k", k, cap)
    start = tuple(sorted(initial))
    dist = transition_distribution(gen, start, t)
    occupancy = np.zeros((gen.size, g.n))
    for i, state in enumerate(gen.space.states):
        occupancy[i, list(state)] = 1.0
    marg = dist.probabilities @ occupancy
    joint = occupancy.T @ (occupancy * dist.probabilities[:, None])
    violation = joint - np.outer(marg, marg)
    np.fill_diagonal(violation, -np.inf)
    u, v = np.unravel_index(np.argmax(violation), violation.shape)
    return float(violation[u, v]), (int(u), int(v))


# ---------------------------------------------------------------------------
# Two labelled particles on the complete graph, lumped by symmetry
# ---------------------------------------------------------------------------

def _ip2_complete_lumped(n: int):
    """Lumped generator of IP(2, K_n) relative to a reference start (a, b).

    Orbits of the pair (x1, x2) under permutations fixing a and b, with *
    standing for any vertex outside {a, b}:
      0:(a,b)  1:(b,a)  2:(a,*)  3:(*,b)  4:(b,*)  5:(*,a)  6:(*,*)
    Strong lumpability holds because the stabilizer acts transitively inside
    each orbit; the construction is checked entrywise against the full chain
    in the test suite.
    """
    if n < 4:
        raise ValueError("lumping derivation assumes n >= 4")
    counts = np.array([1, 1, n - 2, n - 2, n - 2, n - 2, (n - 2) * (n - 3)], dtype=float)
    q = np.zeros((7, 7))
    # (class, class, total rate); self-class transitions are omitted since
    # they do not move mass between classes.
    transitions = [
        (0, 1, 1.0),      # (a,b): swap
        (0, 3, n - 2.0),  # (a,b): a -> c gives (c,b)
        (0, 2, n - 2.0),  # (a,b): b -> c gives (a,c)
        (1, 0, 1.0),
        (1, 5, n - 2.0),  # (b,a): b -> c gives (c,a)
        (1, 4, n - 2.0),  # (b,a): a -> c gives (b,c)
        (2, 5, 1.0),      # (a,c): swap {a,c} gives (c,a)
        (2, 4, 1.0),      # (a,c): a -> b gives (b,c)
        (2, 6, n - 3.0),  # (a,c): a -> d gives (d,c)
        (2, 0, 1.0),      # (a,c): c -> b gives (a,b)
        (3, 4, 1.0),      # (c,b): swap {c,b} gives (b,c)
        (3, 5, 1.0),      # (c,b): b -> a gives (c,a)
        (3, 6, n - 3.0),  # (c,b): b -> d gives (c,d)
        (3, 0, 1.0),      # (c,b): c -> a gives (a,b)
        (4, 3, 1.0),      # (b,c): swap gives (c,b)
        (4, 2, 1.0),      # (b,c): b -> a gives (a,c)
        (4, 6, n - 3.0),  # (b,c): b -> d gives (d,c)
        (4, 1, 1.0),      # (b,c): c -> a gives (b,a)
        (5, 2, 1.0),      # (c,a): swap gives (a,c)
        (5, 3, 1.0),      # (c,a): a -> b gives (c,b)
        (5, 6, n - 3.0),  # (c,a): a -> d gives (c,d)
        (5, 1, 1.0),      # (c,a): c -> b gives (b,a)
        (6, 2, 1.0),      # (c,d): c -> a gives (a,d)
        (6, 4, 1.0),      # (c,d): c -> b gives (b,d)
        (6, 5, 1.0),      # (c,d): d -> a gives (c,a)
        (6, 3, 1.0),      # (c,d): d -> b gives (c,b)
    ]
    for i, j, rate in transitions:
        q[i, j] += rate
    np.fill_diagonal(q, -q.sum(axis=1))
    return q, counts


def ip2_complete_tv(n: int, t: float) -> float:
    """Exact TV(law of IP(2, K_n) at t from any start, uniform on pairs)."""
    q, counts = _ip2_complete_lumped(n)
    mass = expm(t * q)[0]  # class masses, started from class (a,b)
    pi = counts / counts.sum()
    return float(0.5 * np.abs(mass - pi).sum())


def ip2_complete_mixing_time(n: int, eps: float = 0.25, time_tol: float = 1e-9) -> float:
    """Mixing time of IP(2, K_n) via the 7-state lumped chain.

    All starts are equivalent under the automorphism group, so the lumped TV
    curve is already the worst case.
    """
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    hi = 1.0 / n
    lo = 0.0
    while ip2_complete_tv(n, hi) > eps:
        lo = hi
        hi *= 2.0
    while hi - lo > time_tol:
        mid = 0.5 * (lo + hi)
        if ip2_complete_tv(n, mid) <= eps:
            hi = mid
        else:
            lo = mid
    return hi
