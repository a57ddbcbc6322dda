import math
from fractions import Fraction

import numpy as np
import pytest

from excl.errors import AbsorptionCapExceeded, OutOfRange
from excl.ink_chain import (
    conditioned_decay_profile,
    conditioned_kernel,
    delta,
    fill_probability,
    fill_probability_linear,
    simulate_fill_fraction,
    simulate_ink,
    step_kernel,
    z_statistic,
)


def test_delta_examples():
    assert delta(1, 10) == 1
    assert delta(6, 10) == 2   # ceil(min(6, 4) / 3)
    assert delta(5, 10) == 2
    assert delta(0, 10) == 0 and delta(10, 10) == 0


def test_delta_range_check():
    with pytest.raises(OutOfRange):
        delta(11, 10)
    with pytest.raises(OutOfRange):
        delta(-1, 10)


def test_step_kernel_examples():
    assert step_kernel(1, 10) == {0: Fraction(1, 2), 2: Fraction(1, 2)}
    assert step_kernel(0, 10) == {0: Fraction(1)}
    assert step_kernel(5, 10) == {3: Fraction(1, 2), 7: Fraction(1, 2)}


def test_conditioned_kernel_examples():
    assert conditioned_kernel(1, 10) == {2: Fraction(1)}  # never absorbs at 0
    assert conditioned_kernel(10, 10) == {10: Fraction(1)}
    assert conditioned_kernel(5, 10) == {3: Fraction(3, 10), 7: Fraction(7, 10)}
    with pytest.raises(OutOfRange):
        conditioned_kernel(0, 10)


def test_kernel_rows_sum_to_one_rationally():
    for m in (1, 2, 7, 100, 1000):
        for a in range(1, m + 1):
            assert sum(conditioned_kernel(a, m).values()) == 1
            assert sum(step_kernel(a, m).values()) == 1


def test_martingale_identity_exact():
    for m in (1, 2, 13, 250, 1000):
        for a in range(m + 1):
            assert sum(Fraction(b) * p for b, p in step_kernel(a, m).items()) == a


def test_fill_probability_values():
    assert fill_probability(1) == 1.0
    assert fill_probability(5) == 0.2
    assert abs(fill_probability_linear(100) - 0.01) <= 1e-12
    for m in (1, 2, 20, 333):
        assert abs(fill_probability_linear(m) - fill_probability(m)) <= 1e-12


def test_z_statistic_values():
    assert z_statistic(10, 10) == 0.0
    assert abs(z_statistic(1, 2) - math.sqrt(2)) <= 1e-15
    for m in (3, 10, 144):
        assert abs(z_statistic(1, m) - math.sqrt(m)) <= 1e-12
    with pytest.raises(OutOfRange):
        z_statistic(0, 5)


def test_z_dominates_one_minus_fraction():
    for m in (2, 3, 10, 97, 1000):
        for a in range(1, m + 1):
            assert 1.0 - a / m <= z_statistic(a, m) + 1e-15


def test_profile_initial_values():
    for m in (2, 10, 50):
        decay, z_mean = conditioned_decay_profile(m, 5)
        assert abs(decay[0] - (1 - 1 / m)) <= 1e-15
        assert abs(z_mean[0] - math.sqrt(m)) <= 1e-12


def test_profile_contraction_sample():
    for m in (2, 3, 17, 240):
        decay, z_mean = conditioned_decay_profile(m, 200)
        assert np.all(z_mean[1:] <= (71.0 / 72.0) * z_mean[:-1] + 1e-12)
        ell = np.arange(201)
        assert np.all(decay <= math.sqrt(m) * (71.0 / 72.0) ** ell + 1e-12)


def test_profile_mass_conserved():
    decay, z_mean = conditioned_decay_profile(9, 400)
    assert decay[-1] >= -1e-12
    assert z_mean[-1] >= -1e-12


def test_simulate_m1_immediate():
    path = simulate_ink(1, seed=0)
    assert path.path == (1,) and path.absorbed_at == 1


def test_simulate_m2_single_fair_step():
    ups = 0
    for s in range(10**4):
        path = simulate_ink(2, seed=s)
        assert path.path[0] == 1 and len(path.path) == 2
        assert path.absorbed_at in (0, 2)
        ups += path.absorbed_at == 2
    assert abs(ups / 10**4 - 0.5) <= 3 * math.sqrt(0.25 / 10**4)


def test_simulate_paths_bounded():
    for s in range(200):
        path = simulate_ink(20, seed=s)
        assert all(0 <= v <= 20 for v in path.path)
        assert path.absorbed_at in (0, 20)


def test_simulate_cap_raises():
    with pytest.raises(AbsorptionCapExceeded):
        simulate_ink(1000, seed=1, cap=0)  # start state 1 is not absorbing


def test_fill_fraction_m20():
    frac = simulate_fill_fraction(20, 10**5, seed=12)
    sigma = math.sqrt(0.05 * 0.95 / 10**5)
    assert abs(frac - 0.05) <= 3 * sigma


def test_simulated_increments_match_kernel():
    # pathwise: every step is +-delta; conditionally on filling, the up-rate
    # from state a approaches q(a, a + delta)
    m = 6
    up = {}
    tot = {}
    for s in range(20000):
        path = simulate_ink(m, seed=s)
        if path.absorbed_at != m:
            continue
        for a, b in zip(path.path, path.path[1:]):
            d = delta(a, m)
            assert b in (a - d, a + d)
            if d:
                tot[a] = tot.get(a, 0) + 1
                up[a] = up.get(a, 0) + (b == a + d)
    for a, n_a in tot.items():
        q_up = float(conditioned_kernel(a, m).get(a + delta(a, m), 0))
        freq = up.get(a, 0) / n_a
        assert abs(freq - q_up) <= 3 * math.sqrt(max(q_up * (1 - q_up), 1 / n_a) / n_a)
