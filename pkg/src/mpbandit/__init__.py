"""Deterministic simulator and policy library for multiplayer Bernoulli bandits.

Players pull arms simultaneously; when several pull the same arm one uniformly
chosen winner takes that arm's reward and the rest get nothing. At the end of
every turn each player tells its current neighbors (an Erdős–Rényi graph
resampled per turn with edge probability alpha) which arm it pulled and what
it earned. Everything is seeded and replayable bit for bit.
"""

from .allocation import (
    AllocationResult,
    brute_force_allocation,
    expected_turn_gain,
    expected_turn_loss,
    optimal_allocation,
    top_n_sum,
)
from .core import (
    ArmSet,
    CommunicationGraph,
    Observation,
    TurnDraw,
    TurnRecord,
    draw_rewards,
    resolve_collisions,
    sample_graph,
)
from .engine import (
    AggregateSeries,
    ExperimentConfig,
    ExperimentResult,
    MetricsSeries,
    aggregate_series,
    build_player,
    run_experiment,
    run_replication,
    run_turn,
)
from .policies import (
    MEAN_FLOOR,
    ArmStats,
    AsympOptPlayer,
    BetaStats,
    CycleState,
    EpsGreedyPlayer,
    ExplorationSchedule,
    OptimalCyclePlayer,
    PLAYER_TYPES,
    ThompsonPlayer,
    UCB1Player,
    asymp_opt_select,
    eps_greedy_select,
    ingest,
    optimal_cycle_select,
    thompson_select,
    ucb1_select,
)
from .presets import MU1, MU2, PRESETS
from .rng import child_seed, replication_rng

__version__ = "0.1.0"

__all__ = [
    "AllocationResult", "brute_force_allocation", "expected_turn_gain",
    "expected_turn_loss", "optimal_allocation", "top_n_sum",
    "ArmSet", "CommunicationGraph", "Observation", "TurnDraw", "TurnRecord",
    "draw_rewards", "resolve_collisions", "sample_graph",
    "AggregateSeries", "ExperimentConfig", "ExperimentResult", "MetricsSeries",
    "aggregate_series", "build_player", "run_experiment", "run_replication", "run_turn",
    "MEAN_FLOOR", "ArmStats", "AsympOptPlayer", "BetaStats", "CycleState",
    "EpsGreedyPlayer", "ExplorationSchedule", "OptimalCyclePlayer", "PLAYER_TYPES",
    "ThompsonPlayer", "UCB1Player", "asymp_opt_select", "eps_greedy_select",
    "ingest", "optimal_cycle_select", "thompson_select", "ucb1_select",
    "MU1", "MU2", "PRESETS",
    "child_seed", "replication_rng",
    "__version__",
]
