import math

import numpy as np
import pytest

import excl.exact as ex
from excl.chameleon import (
    ChameleonState,
    chameleon_state,
    first_contact_partners,
    hat_chain,
    identity_check,
    init_chameleon,
    ink_at,
    run_chameleon,
    total_ink,
)
from excl.errors import AbsorptionCapExceeded, InvalidTuple
from excl.estimators import empirical_distribution, tv_upper_ci
from excl.event_stream import EventStream, interval_map, sample_stream
from excl.graph import cycle_graph, path_graph
from excl.ink_chain import delta
from excl.rng import substream


def test_init_examples():
    p3 = path_graph(3)
    st = init_chameleon(p3, (0, 1))
    assert st.black == (0,) and st.red == {1} and st.pink == frozenset() and st.white == {2}
    c4 = cycle_graph(4)
    st = init_chameleon(c4, (0, 1, 2))
    assert st.white == {3}
    assert len(st.red) + len(st.pink) + len(st.white) == c4.n - len(st.black)


def test_init_rejects_bad_tuples():
    g = cycle_graph(4)
    with pytest.raises(InvalidTuple):
        init_chameleon(g, (0, 0))
    with pytest.raises(InvalidTuple):
        init_chameleon(g, (0, 7))
    with pytest.raises(InvalidTuple):
        init_chameleon(g, (0, 1, 2, 3))  # k = n excluded


def test_state_factory_validates_partition():
    with pytest.raises(InvalidTuple):
        chameleon_state((0,), {1}, set(), {1, 2}, 3)  # overlap
    with pytest.raises(InvalidTuple):
        chameleon_state((0,), {1}, set(), set(), 3)   # missing vertex


def test_ink_values():
    st = init_chameleon(path_graph(3), (0, 1))
    assert total_ink(st) == 1.0
    assert ink_at(st, 1) == 1.0 and ink_at(st, 0) == 0.0 and ink_at(st, 2) == 0.0
    mixed = chameleon_state((0,), set(), {1, 2}, set(), 3)
    assert total_ink(mixed) == 1.0
    full = chameleon_state((0,), {1, 2}, set(), set(), 3)
    assert total_ink(full) == 2.0  # n - k + 1


def test_tiny_phase_keeps_state():
    g = path_graph(3)
    st = init_chameleon(g, (0, 1))
    tr = run_chameleon(g, st, T=1e-12, phases=2, seed=0)
    assert tr.boundary_states[1] == tr.boundary_states[0] == st
    assert tr.fill == "running" and tr.ink_path == [1.0]


def test_constant_color_phase_replays_as_interval_map():
    # state at (2i+1)T equals the coin-respecting window map applied classwise
    for g, x in ((path_graph(3), (0, 1)), (cycle_graph(4), (0, 1))):
        s0 = init_chameleon(g, x)
        for seed in range(50):
            tr = run_chameleon(g, s0, T=0.8, phases=4, seed=seed, record_events=True)
            stream = EventStream(
                horizon=4 * 0.8, rate=2 * g.total_weight,
                times=np.array([e[0] for e in tr.events]),
                edge_marks=np.array([e[1] for e in tr.events], dtype=np.int64),
                coin_marks=np.array([e[2] for e in tr.events], dtype=np.int8),
                seed=-1, n=g.n, edge_endpoints=tuple((u, v) for u, v, _ in g.edges))
            for i in (0, 1):
                before = tr.boundary_states[2 * i]
                after = tr.boundary_states[2 * i + 1]
                perm = interval_map(stream, 2 * i * 0.8, (2 * i + 1) * 0.8,
                                    respect_coins=True)
                assert perm.apply(before.black) == after.black
                assert perm.apply(before.red) == after.red
                assert perm.apply(before.pink) == after.pink
                assert perm.apply(before.white) == after.white


def _replay_reference(g, s0, T, events, depink_coins, phases):
    """Naive set-based re-simulation from the recorded randomness."""
    black = list(s0.black)
    red, pink, white = set(s0.red), set(s0.pink), set(s0.white)
    coins = iter(depink_coins)
    boundaries = []
    ink_path = []
    depink_times = []

    def swap(u, v):
        for i, b in enumerate(black):
            if b == u:
                black[i] = v
            elif b == v:
                black[i] = u
        for group in (red, pink, white):
            if (u in group) != (v in group):
                group.symmetric_difference_update((u, v))

    def boundary(now):
        if len(pink) >= min(len(red), len(white)):
            if next(coins):
                red.update(pink)
            else:
                white.update(pink)
            pink.clear()
            depink_times.append(now)
            ink_path.append(float(len(red)))

    def snap():
        return ChameleonState(tuple(black), frozenset(red), frozenset(pink),
                              frozenset(white), g.n)

    boundary(0.0)
    if not ink_path:
        ink_path.append(len(red) + 0.5 * len(pink))
    boundaries.append(snap())
    idx = 0
    for phase in range(phases):
        hi = (phase + 1) * T
        changing = phase % 2 == 1
        while idx < len(events) and events[idx][0] <= hi:
            tau, eid, coin = events[idx]
            idx += 1
            u, v = g.endpoints(eid)
            rw_edge = (u in red and v in white) or (u in white and v in red)
            if changing and rw_edge and len(pink) < min(len(red), len(white)):
                red.discard(u), red.discard(v)
                white.discard(u), white.discard(v)
                pink.update((u, v))
            elif coin:
                swap(u, v)
        if phase % 2 == 1:
            boundary(hi)
        boundaries.append(snap())
    return boundaries, ink_path, depink_times


@pytest.mark.parametrize("g,x,T", [
    (path_graph(3), (0, 1), 0.6),
    (cycle_graph(4), (0, 1), 1.0),
    (cycle_graph(4), (0, 1, 2), 0.5),
    (cycle_graph(6), (0, 3), 0.7),
])
def test_run_matches_reference_replay(g, x, T):
    s0 = init_chameleon(g, x)
    for seed in range(40):
        tr = run_chameleon(g, s0, T, phases=6, seed=seed, record_events=True)
        boundaries, ink_path, depink_times = _replay_reference(
            g, s0, T, tr.events, tr.depinking_coins, 6)
        assert tr.boundary_states == boundaries
        assert tr.ink_path == ink_path
        assert tr.depinking_times == depink_times


def test_partition_preserved_on_boundaries():
    g = cycle_graph(6)
    s0 = init_chameleon(g, (0, 2, 4))
    tr = run_chameleon(g, s0, T=0.9, phases=8, seed=13)
    for st in tr.boundary_states:
        union = set(st.black) | st.red | st.pink | st.white
        total = len(st.black) + len(st.red) + len(st.pink) + len(st.white)
        assert union == set(range(g.n)) and total == g.n


def test_fill_fraction_is_one_over_capacity():
    # two non-black vertices: fill and empty are equally likely
    g = path_graph(3)
    s0 = init_chameleon(g, (0, 1))
    trials = 10**5
    filled = 0
    for i in range(trials):
        tr = run_chameleon(g, s0, T=5.0, until_absorbed=True,
                           rng=substream(77, i), record_boundaries=False)
        filled += tr.fill == "filled"
    sigma = math.sqrt(0.25 / trials)
    assert abs(filled / trials - 0.5) <= 3 * sigma


def test_until_absorbed_always_terminates():
    for g, x in ((path_graph(3), (0, 1)), (cycle_graph(4), (0, 1)),
                 (cycle_graph(6), (0, 1, 2))):
        s0 = init_chameleon(g, x)
        for i in range(200):
            tr = run_chameleon(g, s0, T=1.0, until_absorbed=True,
                               rng=substream(31, i), record_boundaries=False)
            assert tr.fill in ("filled", "emptied")


def test_absorption_cap_raises():
    g = cycle_graph(4)
    s0 = init_chameleon(g, (0, 1))
    with pytest.raises(AbsorptionCapExceeded):
        run_chameleon(g, s0, T=1e-6, until_absorbed=True, cap_rounds=3, seed=0)


def test_hat_chain_m2_hand_simulation():
    # capacity 2: one pinkening turns (red, white) into two pinks, so the next
    # boundary depinks to ink 0 or 2 and the chain is absorbed
    g = path_graph(3)
    s0 = init_chameleon(g, (0, 1))
    for i in range(200):
        tr = run_chameleon(g, s0, T=2.0, until_absorbed=True, rng=substream(55, i))
        # the depinking-indexed ink path is a fair +-delta walk from 1
        for a, b in zip(tr.ink_path, tr.ink_path[1:]):
            assert b in (a - delta(int(a), 2), a + delta(int(a), 2))
        # the per-round hat inks sample-and-hold that path between depinkings
        depink_rounds = {round(d / (2 * 2.0)) for d in tr.depinking_times if d > 0}
        level = tr.ink_path[0]
        changes = iter(tr.ink_path[1:])
        for k, ink in enumerate(tr.hat_inks, start=1):
            if k in depink_rounds:
                level = next(changes)
            assert ink == level
        assert tr.ink_path[-1] in (0.0, 2.0)
        if tr.fill == "filled":
            assert tr.ink_path[-1] == 2.0


def test_hat_chain_depinking_indices_match_condition():
    g = cycle_graph(4)
    s0 = init_chameleon(g, (0, 1))
    for i in range(100):
        tr = run_chameleon(g, s0, T=0.8, until_absorbed=True, rng=substream(91, i))
        by_condition = [
            k for k, (st, _) in enumerate(hat_chain(tr), start=1)
            if len(st.pink) >= min(len(st.red), len(st.white))]
        by_times = [round(d / (2 * 0.8)) for d in tr.depinking_times if d > 0]
        assert by_condition == by_times


def test_no_depinking_after_quiet_round():
    g = cycle_graph(4)
    s0 = init_chameleon(g, (0, 1))
    found = False
    for i in range(200):
        tr = run_chameleon(g, s0, T=0.05, phases=2, rng=substream(14, i))
        if not tr.pinkening_log:
            found = True
            assert tr.depinking_times == []
            assert tr.ink_path == [1.0]
    assert found


def test_pinkening_only_in_color_changing_windows():
    g = cycle_graph(6)
    s0 = init_chameleon(g, (0, 1))
    T = 0.75
    for i in range(100):
        tr = run_chameleon(g, s0, T, phases=10, rng=substream(44, i))
        for tau, r, w in tr.pinkening_log:
            phase = int(tau / T - 1e-12)
            assert phase % 2 == 1


def test_first_contact_empty_and_single_event():
    g = path_graph(3)
    empty = EventStream(horizon=2.0, rate=2 * g.total_weight, times=np.array([]),
                        edge_marks=np.array([], dtype=np.int64),
                        coin_marks=np.array([], dtype=np.int8), seed=-1, n=3,
                        edge_endpoints=((0, 1), (1, 2)))
    rec = first_contact_partners(empty, T=1.0)
    assert all(rec.partner[v] is None for v in range(3))

    single = EventStream(horizon=2.0, rate=2 * g.total_weight, times=np.array([1.5]),
                         edge_marks=np.array([0], dtype=np.int64),
                         coin_marks=np.array([1], dtype=np.int8), seed=-1, n=3,
                         edge_endpoints=((0, 1), (1, 2)))
    rec = first_contact_partners(single, T=1.0)
    assert rec.partner[0] == 1 and rec.partner[1] == 0 and rec.partner[2] is None


def test_first_contact_uses_preflow_inverse():
    # events: {0,1} coin 1 at 1.2, then {1,2} at 1.5: by then the walker that
    # started at 0 sits at 1, so vertex 2's partner is label 0
    g = path_graph(3)
    s = EventStream(horizon=2.0, rate=2 * g.total_weight,
                    times=np.array([1.2, 1.5]),
                    edge_marks=np.array([0, 1], dtype=np.int64),
                    coin_marks=np.array([1, 1], dtype=np.int8), seed=-1, n=3,
                    edge_endpoints=((0, 1), (1, 2)))
    rec = first_contact_partners(s, T=1.0)
    assert rec.partner[0] == 1 and rec.partner[1] == 0
    assert rec.partner[2] == 0
    assert rec.first_time[2] == 1.5


def test_first_contact_collision_inequality():
    # P[F_a = b, F_a' = b] <= P[F_a = a', F_a' = b] + P[F_a' = a, F_a = b]
    g = cycle_graph(5)
    T = 0.5
    trials = 10**5
    n_lhs: dict = {}
    n_r1: dict = {}
    n_r2: dict = {}
    for i in range(trials):
        stream = sample_stream(g, 2 * T, modified=True, seed=600_000 + i)
        partner = first_contact_partners(stream, T).partner
        for a in range(5):
            for a2 in range(5):
                if a == a2:
                    continue
                fa, fa2 = partner[a], partner[a2]
                if fa is not None and fa == fa2 and fa != a and fa != a2:
                    n_lhs[(a, a2, fa)] = n_lhs.get((a, a2, fa), 0) + 1
                if fa == a2 and fa2 is not None and fa2 not in (a, a2):
                    n_r1[(a, a2, fa2)] = n_r1.get((a, a2, fa2), 0) + 1
                if fa2 == a and fa is not None and fa not in (a, a2):
                    n_r2[(a, a2, fa)] = n_r2.get((a, a2, fa), 0) + 1
    for a in range(5):
        for a2 in range(5):
            for b in range(5):
                if len({a, a2, b}) != 3:
                    continue
                lhs = n_lhs.get((a, a2, b), 0) / trials
                rhs = (n_r1.get((a, a2, b), 0) + n_r2.get((a, a2, b), 0)) / trials
                sigma = math.sqrt((lhs + rhs) / trials) + 1e-9
                assert lhs <= rhs + 3 * sigma


def test_black_marginal_matches_interchange():
    # the black tuple at time t has the law of the leading interchange coordinates
    g = cycle_graph(4)
    x = (0, 1)
    t = 1.3
    trials = 4 * 10**4
    gen = ex.build_generator(g, "ip_k", 2)
    exact_law = ex.transition_distribution(gen, x, t).probabilities
    z_space = ex.enumerate_states(g, "rw")  # k - 1 = 1 coordinate
    z_exact = np.zeros(g.n)
    for i, (c, _) in enumerate(gen.space.states):
        z_exact[c] += exact_law[i]
    s0 = init_chameleon(g, x)
    samples = []
    for i in range(trials):
        tr = run_chameleon(g, s0, T=0.65, phases=math.ceil(t / 0.65),
                           rng=substream(21, i), sample_times=(t,),
                           record_boundaries=False)
        samples.append(tr.sampled[t].black[0])
    est = tv_upper_ci(empirical_distribution(samples, z_space),
                      ex.DiscreteDistribution(z_space, z_exact), trials)
    assert est.value <= 3 * est.sigma


def test_fill_independent_of_black_tuple():
    g = path_graph(3)
    s0 = init_chameleon(g, (0, 1))
    t = 1.0
    trials = 4 * 10**4
    joint: dict = {}
    z_count: dict = {}
    filled = 0
    for i in range(trials):
        tr = run_chameleon(g, s0, T=0.8, until_absorbed=True, cap_rounds=10**6,
                           rng=substream(37, i), sample_times=(t,),
                           record_boundaries=False)
        z = tr.sampled[t].black
        z_count[z] = z_count.get(z, 0) + 1
        if tr.fill == "filled":
            filled += 1
            joint[z] = joint.get(z, 0) + 1
    p_fill = filled / trials
    for z, cnt in z_count.items():
        p_joint = joint.get(z, 0) / trials
        p_prod = (cnt / trials) * p_fill
        sigma = math.sqrt(max(p_prod * (1 - p_prod), 1.0 / trials) / trials)
        assert abs(p_joint - p_prod) <= 3 * sigma + 3e-3


def test_ink_deficit_bounds_distance_to_uniform():
    # conditional fill-deficit of total ink dominates two distances:
    #   TV(law of the pair, law of (black, uniform complement))    (per start)
    #   TV(law of the pair, uniform), after multiplying by 2k      (sup form)
    for g, T in ((path_graph(3), 0.7), (cycle_graph(4), 0.8)):
        k = 2
        m = g.n - k + 1
        t = 1.6
        gen = ex.build_generator(g, "ip_k", k)
        uniform = ex.DiscreteDistribution(
            gen.space, np.full(gen.size, 1.0 / gen.size))
        runs = 4000
        worst_lhs_uniform = 0.0
        worst_rhs = 0.0
        for x in gen.space.states:
            law = ex.transition_distribution(gen, x, t)
            # law of (black tuple, uniform over the complement)
            z_mass: dict = {}
            for (c, _), p in zip(gen.space.states, law.probabilities):
                z_mass[c] = z_mass.get(c, 0.0) + p
            tilde = np.array([z_mass[c] / m for c, _ in gen.space.states])
            lhs_tilde = ex.tv_distance(law, ex.DiscreteDistribution(gen.space, tilde))
            s0 = init_chameleon(g, x)
            deficit = []
            for j in range(runs):
                tr = run_chameleon(g, s0, T, until_absorbed=True,
                                   rng=substream(hash(x) % 2**32, j),
                                   sample_times=(t,), record_boundaries=False)
                if tr.fill == "filled":
                    deficit.append(1.0 - total_ink(tr.sampled[t]) / m)
            est = np.mean(deficit)
            sigma = np.std(deficit, ddof=1) / math.sqrt(len(deficit))
            assert lhs_tilde <= est + 3 * sigma
            worst_lhs_uniform = max(worst_lhs_uniform, ex.tv_distance(law, uniform))
            worst_rhs = max(worst_rhs, est + 3 * sigma)
        assert worst_lhs_uniform <= 2 * k * worst_rhs


def test_trace_export_replays_exactly():
    from excl.chameleon import parse_trace_events, trace_to_text

    g = cycle_graph(4)
    s0 = init_chameleon(g, (0, 1))
    for seed in range(20):
        tr = run_chameleon(g, s0, T=0.9, phases=6, seed=seed, record_events=True)
        T, init, events, coins = parse_trace_events(trace_to_text(tr))
        assert T == 0.9 and init == s0
        boundaries, ink_path, _ = _replay_reference(g, init, T, events, coins, 6)
        assert boundaries == tr.boundary_states
        assert ink_path == tr.ink_path


def test_trace_export_needs_events():
    from excl.chameleon import trace_to_text

    g = cycle_graph(4)
    tr = run_chameleon(g, init_chameleon(g, (0, 1)), T=0.5, phases=2, seed=0)
    with pytest.raises(ValueError):
        trace_to_text(tr)


def test_identity_check_t0_exact():
    rep = identity_check(path_graph(3), (0, 1), t=0.0, T=0.5, trials=500, seed=1)
    assert rep.max_abs_deviation == 0.0
    assert np.array_equal(rep.mc, rep.exact)


def test_identity_check_p3_small():
    rep = identity_check(path_graph(3), (0, 1), t=0.8, T=0.5, trials=2 * 10**4, seed=7)
    assert rep.max_abs_deviation <= 3.0


def test_identity_check_single_particle():
    # k = 1: the black tuple is empty and the identity reduces to the walk law
    from excl.graph import complete_graph

    rep = identity_check(complete_graph(2), (0,), t=0.7, T=0.5,
                         trials=2 * 10**4, seed=3)
    assert rep.max_abs_deviation <= 3.0
    rep = identity_check(path_graph(4), (2,), t=1.0, T=0.5,
                         trials=2 * 10**4, seed=4)
    assert rep.max_abs_deviation <= 3.0


def test_fill_fraction_single_particle():
    g = path_graph(4)
    s0 = init_chameleon(g, (3,))
    trials = 2 * 10**4
    filled = sum(
        run_chameleon(g, s0, T=2.0, until_absorbed=True, rng=substream(9, i),
                      record_boundaries=False).fill == "filled"
        for i in range(trials))
    assert abs(filled / trials - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / trials)


def test_sample_time_at_boundary_is_post_depinking():
    # at a depinking boundary the sampled state must carry no pink vertices
    g = path_graph(3)
    s0 = init_chameleon(g, (0, 1))
    seen_depinking = 0
    for i in range(300):
        tr = run_chameleon(g, s0, T=1.0, phases=2, rng=substream(101, i),
                           sample_times=(2.0,), record_boundaries=False)
        if tr.depinking_times and tr.depinking_times[-1] == 2.0:
            seen_depinking += 1
            assert tr.sampled[2.0].pink == frozenset()
    assert seen_depinking > 0
