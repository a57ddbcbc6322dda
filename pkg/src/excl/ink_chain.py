"""The discrete ink chain and its fill-conditioned transform.

States 0..m (m = number of non-black vertices), started at 1, absorbing at 0
and m.  One step moves by +-delta(a) with a fair coin, where delta(a) =
ceil(min(a, m-a)/3); conditioning on filling (absorption at m) reweights the
kernel to q(a, b) = b p(a, b) / a.  Kernel values are exact rationals;
profile iterations use float64 with a documented 1e-12 slack.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AbsorptionCapExceeded, OutOfRange
from .rng import generator

HALF = Fraction(1, 2)


def _check_state(a: int, m: int, lowest: int = 0) -> None:
    if m < 1:
        raise OutOfRange(f"chain size m={m} must be >= 1")
    if not (lowest <= a <= m):
        raise OutOfRange(f"state {a} outside [{lowest}, {m}]")


def delta(r: int, m: int) -> int:
    """Step size ceil(min(r, m - r) / 3); zero at the absorbing ends."""
    _check_state(r, m)
    return (min(r, m - r) + 2) // 3


def step_kernel(a: int, m: int) -> dict:
    """One-step law from `a`: half/half on a +- delta(a), a point mass if absorbing."""
    _check_state(a, m)
    d = delta(a, m)
    if d == 0:
        return {a: Fraction(1)}
    return {a - d: HALF, a + d: HALF}


def conditioned_kernel(a: int, m: int) -> dict:
    """Fill-conditioned law q(a, b) = b p(a, b) / a; undefined at a = 0.

    Masses sum to one because the unconditioned increments are mean zero, and
    the chain conditioned on filling never steps to 0.
    """
    _check_state(a, m, lowest=1)
    out = {}
    for b, p in step_kernel(a, m).items():
        q = Fraction(b) * p / a
        if q:
            out[b] = q
    return out


def fill_probability(m: int) -> float:
    """Probability of absorption at m from the start state 1, namely 1/m."""
    if m < 1:
        raise OutOfRange(f"chain size m={m} must be >= 1")
    return 1.0 / m


def fill_probability_linear(m: int) -> float:
    """Absorption probability at m from 1 by solving the harmonic system.

    Independent cross-check of :func:`fill_probability`: h(0) = 0, h(m) = 1
    and h(a) = (h(a - delta(a)) + h(a + delta(a))) / 2 in between.
    """
    if m < 1:
        raise OutOfRange(f"chain size m={m} must be >= 1")
    if m == 1:
        return 1.0
    a_mat = np.eye(m + 1)
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    for a in range(1, m):
        d = delta(a, m)
        a_mat[a, a - d] -= 0.5
        a_mat[a, a + d] -= 0.5
    return float(np.linalg.solve(a_mat, rhs)[1])


def z_statistic(a: int, m: int) -> float:
    """sqrt(min(1 - I, I)) / I with I = a/m; dominates 1 - I pathwise."""
    _check_state(a, m, lowest=1)
    frac = a / m
    return float(np.sqrt(min(1.0 - frac, frac)) / frac)


def _kernel_arrays(m: int):
    """Vectorized p-kernel: target indices and masses for states 0..m."""
    states = np.arange(m + 1)
    d = np.minimum(states, m - states)
    d = (d + 2) // 3
    up = states + d
    dn = states - d
    return up, dn


def conditioned_decay_profile(m: int, steps: int):
    """Exact forward iteration of the fill-conditioned chain from state 1.

    Returns (decay, z_mean): decay[l] = E[1 - I_l / m | fill] and z_mean[l]
    the conditional mean of the z statistic, for l = 0..steps.
    """
    if m < 2:
        raise OutOfRange("profile needs m >= 2")
    up, dn = _kernel_arrays(m)
    states = np.arange(m + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        q_up = np.where(states > 0, 0.5 * up / np.maximum(states, 1), 0.0)
        q_dn = np.where(states > 0, 0.5 * dn / np.maximum(states, 1), 0.0)
    q_up[m] = 1.0  # absorbing: both branches collapse to m
    q_dn[m] = 0.0
    zs = np.array([0.0] + [z_statistic(a, m) for a in range(1, m + 1)])
    one_minus = 1.0 - states / m

    v = np.zeros(m + 1)
    v[1] = 1.0
    decay = np.empty(steps + 1)
    z_mean = np.empty(steps + 1)
    for ell in range(steps + 1):
        decay[ell] = float(v @ one_minus)
        z_mean[ell] = float(v @ zs)
        if ell == steps:
            break
        nxt = np.zeros(m + 1)
        np.add.at(nxt, up, v * q_up)
        np.add.at(nxt, dn, v * q_dn)
        v = nxt
    return decay, z_mean


@dataclass(frozen=True)
class InkPath:
    path: tuple
    absorbed_at: int


def simulate_ink(m: int, seed: int = 0, cap: int = 10**6) -> InkPath:
    """Run the unconditioned chain from 1 until absorption (or raise at `cap`)."""
    if m < 1:
        raise OutOfRange(f"chain size m={m} must be >= 1")
    rng = generator(seed)
    state = 1
    path = [1]
    for _ in range(cap):
        if state == 0 or state == m:
            return InkPath(tuple(path), state)
        d = delta(state, m)
        state = state + d if rng.integers(0, 2) else state - d
        path.append(state)
    if state == 0 or state == m:
        return InkPath(tuple(path), state)
    raise AbsorptionCapExceeded(f"not absorbed within {cap} steps")


def simulate_fill_fraction(m: int, runs: int, seed: int = 0, cap: int = 10**5) -> float:
    """Fraction of `runs` absorbed at m, simulated as one vectorized batch."""
    if m < 1:
        raise OutOfRange(f"chain size m={m} must be >= 1")
    if m == 1:
        return 1.0
    rng = generator(seed)
    up, dn = _kernel_arrays(m)
    states = np.ones(runs, dtype=np.int64)
    for _ in range(cap):
        live = (states != 0) & (states != m)
        if not live.any():
            return float(np.mean(states == m))
        coins = rng.integers(0, 2, size=int(live.sum())).astype(bool)
        cur = states[live]
        states[live] = np.where(coins, up[cur], dn[cur])
    raise AbsorptionCapExceeded(f"batch not absorbed within {cap} steps")
