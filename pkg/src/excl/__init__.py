"""Simulation and exact verification of exclusion-type particle systems.

Random walks, symmetric exclusion, interchange and chameleon processes on
arbitrary finite weighted graphs, with exact small-instance oracles
(uniformization, mixing times, meeting tails), the discrete ink chain, Monte
Carlo estimators with error bars, and canonical-path congestion bounds.
"""

from .bounds import PathFamily, default_paths, make_path_family, phi, phi_lower_bound, random_shortest_paths
from .chameleon import (
    ChameleonState,
    ChameleonTrace,
    FirstContactRecord,
    chameleon_state,
    first_contact_partners,
    hat_chain,
    identity_check,
    init_chameleon,
    ink_at,
    parse_trace_events,
    run_chameleon,
    total_ink,
    trace_to_text,
)
from .errors import (
    AbsorptionCapExceeded,
    ConfigError,
    DisconnectedGraph,
    ExclError,
    GenerationFailed,
    IndexOutOfRange,
    IntervalOutOfRange,
    InvalidEdge,
    InvalidTuple,
    NumericalError,
    OutOfRange,
    SpaceMismatch,
    StateSpaceTooLarge,
)
from .estimators import (
    Estimate,
    average_meeting_mass,
    depinking_tail,
    easy_verdict,
    empirical_distribution,
    red_decay_estimate,
    tv_upper_ci,
)
from .event_stream import (
    EventStream,
    VertexPermutation,
    apply_interval,
    coupled_pair,
    interval_map,
    sample_meeting_time,
    sample_stream,
    stream_from_text,
    stream_to_text,
)
from .exact import (
    DiscreteDistribution,
    SparseGenerator,
    StateSpace,
    build_generator,
    enumerate_states,
    ip2_complete_mixing_time,
    meeting_survival_matrix,
    meeting_time_tail,
    mixing_time,
    negative_correlation_report,
    point_mass,
    transition_distribution,
    tv_distance,
    worst_case_distance,
)
from .graph import (
    WeightedGraph,
    all_pairs_distances,
    build_graph,
    complete_graph,
    cycle_graph,
    erdos_renyi_giant,
    generate_graph,
    graph_from_text,
    graph_stats,
    graph_to_text,
    path_graph,
    percolation_torus,
    random_regular_graph,
    torus_graph,
)
from .ink_chain import (
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
from .rng import generator, substream

__version__ = "0.1.0"
