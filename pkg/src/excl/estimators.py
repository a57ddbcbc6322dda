"""Monte Carlo statistics with explicit error bars.

Every estimator returns an :class:`Estimate` carrying its trial count and a
standard-error bound; acceptance checks always compare value +- 3 sigma.
When a quantitative bound only holds under side conditions (graph size,
color-count shape, phase length), violations are reported in the result
rather than raised, so exploratory runs on arbitrary graphs stay useful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exact as exact_mod
from .chameleon import ChameleonState, run_chameleon
from .errors import IndexOutOfRange, SpaceMismatch
from .exact import DiscreteDistribution, StateSpace
from .graph import WeightedGraph
from .rng import generator, substream


@dataclass(frozen=True)
class Estimate:
    """A point estimate with its trial count and standard-error bound."""

    value: float
    trials: int
    sigma: float
    method: str

    def within(self, target: float, k_sigma: float = 3.0) -> bool:
        return abs(self.value - target) <= k_sigma * self.sigma


def bernoulli_estimate(hits: float, trials: int, method: str) -> Estimate:
    value = hits / trials
    sigma = math.sqrt(max(value * (1.0 - value), 1.0 / trials) / trials)
    return Estimate(value, trials, sigma, method)


def mean_estimate(samples: np.ndarray, method: str) -> Estimate:
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    sigma = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return Estimate(float(samples.mean()), n, sigma, method)


def empirical_distribution(samples, space: StateSpace) -> DiscreteDistribution:
    """Histogram of state indices, normalized to a distribution."""
    counts = np.zeros(space.size)
    for idx in samples:
        if not (0 <= idx < space.size):
            raise IndexOutOfRange(f"sample index {idx} outside space of size {space.size}")
        counts[idx] += 1.0
    if counts.sum() == 0:
        raise IndexOutOfRange("no samples supplied")
    return DiscreteDistribution(space, counts / counts.sum())


def tv_upper_ci(emp: DiscreteDistribution, exact: DiscreteDistribution, trials: int) -> Estimate:
    """TV(empirical, exact) with the multinomial convention sigma = sqrt(|S|/n).

    sqrt(|S|/n) dominates both the mean and the fluctuation of the TV of an
    n-sample empirical law around its target, so value <= 3 sigma is a sound
    acceptance band for agreement checks.
    """
    if emp.space is not exact.space and emp.space != exact.space:
        raise SpaceMismatch("distributions on different state spaces")
    value = 0.5 * float(np.abs(emp.probabilities - exact.probabilities).sum())
    return Estimate(value, trials, math.sqrt(emp.space.size / trials), "tv-multinomial")


# ---------------------------------------------------------------------------
# Meeting-time machinery
# ---------------------------------------------------------------------------

EASY_FACTOR = 20000.0
EASY_TAIL_BOUND = 1.0 / 8.0


@dataclass(frozen=True)
class EasyVerdict:
    easy: bool
    sup_tail: Estimate
    threshold_time: float
    rw_mixing_quarter: float


def easy_verdict(g: WeightedGraph, method: str = "exact", trials: int = 10**4,
                 seed: int = 0) -> EasyVerdict:
    """Decide whether two walkers meet fast enough from every start.

    Computes the quarter mixing time of the single walker exactly, then the
    supremum over ordered pairs of P[no meeting by 20000 * that], exactly
    (spectral, any horizon) or by per-pair Monte Carlo.
    """
    rw = exact_mod.build_generator(g, "rw")
    t_mix = exact_mod.mixing_time(rw, 0.25)
    threshold = EASY_FACTOR * t_mix
    if method == "exact":
        surv = exact_mod.meeting_survival_matrix(g, threshold)
        sup = Estimate(float(surv.max()), 0, 0.0, "exact")
    elif method == "mc":
        from .event_stream import sample_meeting_time

        worst = 0.0
        trial = 0
        for a in range(g.n):
            for b in range(g.n):
                if a == b:
                    continue
                miss = 0
                for _ in range(trials):
                    t = sample_meeting_time(g, (a, b), cap=threshold,
                                            seed=_mix_seed(seed, trial))
                    trial += 1
                    if not math.isfinite(t):
                        miss += 1
                worst = max(worst, miss / trials)
        sup = Estimate(worst, trials, math.sqrt(0.25 / trials), "mc-per-pair")
    else:
        raise ValueError("method must be 'exact' or 'mc'")
    return EasyVerdict(sup.value <= EASY_TAIL_BOUND, sup, threshold, t_mix)


def _mix_seed(seed: int, i: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + i) % (1 << 63)


def average_meeting_mass(g: WeightedGraph, t: float, method: str = "exact",
                         trials: int = 10**5, seed: int = 0) -> Estimate:
    """Average over all ordered pairs of P[the walkers meet by t]."""
    if method == "exact":
        surv = exact_mod.meeting_survival_matrix(g, t)
        return Estimate(float(1.0 - surv.mean()), 0, 0.0, "exact")
    if method != "mc":
        raise ValueError("method must be 'exact' or 'mc'")
    from .event_stream import sample_meeting_time

    rng = generator(seed)
    hits = 0
    for i in range(trials):
        a = int(rng.integers(g.n))
        b = int(rng.integers(g.n))
        if a == b or math.isfinite(sample_meeting_time(g, (a, b), cap=t,
                                                       seed=_mix_seed(seed, i))):
            hits += 1
    return bernoulli_estimate(hits, trials, "mc-uniform-pairs")


# ---------------------------------------------------------------------------
# Red decay and depinking tails
# ---------------------------------------------------------------------------

def _uniform_complete_weight(g: WeightedGraph) -> float | None:
    """Common edge weight if g is complete with equal weights, else None."""
    if g.m != g.n * (g.n - 1) // 2:
        return None
    w = g.edges[0][2]
    if all(abs(we - w) <= 1e-15 * w for _, _, we in g.edges):
        return w
    return None


def _count_round(n_red: int, n_pink: int, n_white: int, w: float, T: float,
                 rng, capped: bool):
    """Color-count evolution over one color-changing window on a complete
    graph with equal weights: exchangeability makes the counts Markov, with
    red-white edge events arriving at rate 2 w |red| |white|."""
    t = 0.0
    while n_red and n_white:
        if capped and n_pink >= min(n_red, n_white):
            break
        t += rng.exponential(1.0 / (2.0 * w * n_red * n_white))
        if t > T:
            break
        n_red -= 1
        n_white -= 1
        n_pink += 2
    return n_red, n_pink, n_white


@dataclass
class RedDecayReport:
    estimate: Estimate
    initial_red: int
    hypothesis_violations: list = field(default_factory=list)


def _resolve_count_method(g: WeightedGraph, method: str) -> float | None:
    """Common edge weight when the count-chain path applies, else None."""
    w_complete = _uniform_complete_weight(g)
    if method == "counts":
        if w_complete is None:
            raise ValueError("counts method needs a complete graph with equal weights")
        return w_complete
    if method == "event":
        return None
    if method == "auto":
        return w_complete
    raise ValueError("method must be 'auto', 'event' or 'counts'")


def red_decay_estimate(g: WeightedGraph, s0: ChameleonState, T: float,
                       trials: int, seed: int = 0,
                       ip2_mixing_quarter: float | None = None,
                       method: str = "auto") -> RedDecayReport:
    """Mean red count just before the first boundary 2T, with the pinkening
    cap dropped (the variant whose expected red loss is at least 1/1000).

    The quantitative bound needs |pink| < |red| <= |white|, k <= n/2,
    n >= 300 and T >= 20 * the quarter mixing time of two labelled
    particles; violations are listed in the report, never raised.  On
    complete graphs with equal weights the color counts are simulated
    directly (exact in law by exchangeability; the per-event edge mark is
    uniform over pairs whatever the current coloring); other graphs run the
    full event-level process.  `method` forces one path ('event'/'counts').
    """
    violations = []
    r0, p0, w0 = len(s0.red), len(s0.pink), len(s0.white)
    if not (p0 < r0 <= w0):
        violations.append(f"need |pink| < |red| <= |white|, got {p0}, {r0}, {w0}")
    if s0.k > g.n / 2:
        violations.append(f"need k <= n/2, got k={s0.k}, n={g.n}")
    if g.n < 300:
        violations.append(f"need n >= 300, got {g.n}")
    if ip2_mixing_quarter is None and _uniform_complete_weight(g) is not None:
        ip2_mixing_quarter = exact_mod.ip2_complete_mixing_time(g.n, 0.25)
    if ip2_mixing_quarter is None:
        violations.append("T hypothesis unchecked (no two-particle mixing time supplied)")
    elif T < 20.0 * ip2_mixing_quarter:
        violations.append(f"need T >= {20.0 * ip2_mixing_quarter:.6g}, got {T}")

    w_complete = _resolve_count_method(g, method)
    reds = np.empty(trials)
    if w_complete is not None:
        for i in range(trials):
            rng = substream(seed, i)
            reds[i] = _count_round(r0, p0, w0, w_complete, T, rng, capped=False)[0]
    else:
        for i in range(trials):
            trace = run_chameleon(g, s0, T, phases=2, rng=substream(seed, i),
                                  record_boundaries=False, pinkening_cap=False)
            reds[i] = trace.hat_counts[0][0]
    return RedDecayReport(mean_estimate(reds, "red-after-one-round"), r0, violations)


@dataclass
class DepinkingTailReport:
    tails: list            # Estimate of P[first depinking > 2 k T], k = 1..k_max
    k_hat: float           # smallest K with mean exp(D1 / (K T)) <= e
    censored_fraction: float
    rounds_to_depinking: np.ndarray


def depinking_tail(g: WeightedGraph, s0: ChameleonState, T: float, k_max: int,
                   trials: int, seed: int = 0, method: str = "auto") -> DepinkingTailReport:
    """Empirical survival function of the first depinking time.

    Runs the standard process (pinkening cap on) from a pink-free state and
    records the first boundary at which depinking fires, censoring at k_max
    rounds.  Censored runs enter the exponential-moment fit at the censoring
    bound, which can only understate k_hat; the censored fraction is
    reported alongside.
    """
    if s0.pink:
        raise ValueError("depinking-tail start must have no pink vertices")
    w_complete = _resolve_count_method(g, method)
    rounds = np.empty(trials)
    for i in range(trials):
        rng = substream(seed, i)
        if w_complete is not None:
            nr, np_, nw = len(s0.red), 0, len(s0.white)
            hit = None
            for k in range(1, k_max + 1):
                nr, np_, nw = _count_round(nr, np_, nw, w_complete, T, rng, capped=True)
                if np_ >= min(nr, nw):
                    hit = k
                    break
            rounds[i] = hit if hit is not None else k_max + 1
        else:
            trace = run_chameleon(g, s0, T, phases=2 * k_max, rng=rng,
                                  record_boundaries=False)
            positive = [d for d in trace.depinking_times if d > 0]
            rounds[i] = round(positive[0] / (2 * T)) if positive else k_max + 1

    tails = [bernoulli_estimate(float((rounds > k).sum()), trials, "depinking-tail")
             for k in range(1, k_max + 1)]
    censored = float((rounds > k_max).mean())
    capped_rounds = np.minimum(rounds, k_max)

    def moment(k_const: float) -> float:
        return float(np.mean(np.exp(2.0 * capped_rounds / k_const)))

    lo, hi = 1e-9, 4.0
    while moment(hi) > math.e:
        hi *= 2.0
        if hi > 1e9:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if moment(mid) <= math.e:
            hi = mid
        else:
            lo = mid
    return DepinkingTailReport(tails, hi, censored, rounds)
