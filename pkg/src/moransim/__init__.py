"""Fast Moran birth-death simulation on undirected graphs.

The package simulates the two-type birth-death process by discarding
ineffective steps (steps in which no node changes type), samples each
effective step in expected O(max_degree) time after O(m) preprocessing,
and wraps the simulation in Monte-Carlo estimators with multiplicative
(1 +- eps) guarantees.  An exact absorbing-chain solver provides ground
truth for graphs up to 14 nodes.
"""

from .errors import (
    AlreadyFixated,
    DeadSlot,
    DisconnectedGraph,
    DuplicateEdge,
    EdgeListFormatError,
    EmptyList,
    GraphError,
    InvalidEpsilon,
    InvalidFamilyParams,
    InvalidFitness,
    MoranError,
    NeutralRate,
    NoOpFlip,
    NodeIdOutOfRange,
    SelfLoop,
    TooLarge,
    UnbiasedWalk,
)
from .graphs import (
    Configuration,
    Explicit,
    Graph,
    InitialDistribution,
    T1,
    T2,
    UniformSingle,
    complete_graph,
    cycle_graph,
    draw_initial,
    format_edge_list,
    gen_family,
    line_graph,
    lower_bound_graph,
    parse_edge_list,
    read_edge_list,
    star_graph,
    validate_graph,
)
from .dynamics import (
    AllStepsSimulator,
    FixationState,
    StepDistribution,
    StepOutcome,
    effective_step_reference,
    effectiveness_probability,
    expected_potential_change,
    fixation_state,
    increment_probability,
    naive_step,
    potential,
    step_distribution,
    total_fitness,
)
from .sampler import IndexedList, SamplerState
from .exact import (
    ChainSolution,
    averaged_problem,
    complete_graph_fixation,
    first_step_extinction_prob,
    gamblers_ruin_absorption,
    node_neighbor_pressure,
    solve_chain,
)
from .estimate import (
    EstimateResult,
    FixationTimeStats,
    estimate_extinction_t1,
    estimate_extinction_t2,
    estimate_fixation_t1,
    estimate_generalized,
    fixation_time_stats,
    monte_carlo_estimate,
    step_budget,
)
from .seeding import derive_seed, spawn_rng

__version__ = "0.1.0"
