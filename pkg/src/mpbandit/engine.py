"""Turn loop, metrics accounting, and the multi-replication experiment runner.

Each turn runs a fixed stage order so a replication is a pure function of
(config, base_seed, replication index): sample the communication graph, draw
every arm's reward, let players select in ascending index order, resolve
collisions, then deliver each player its own observation plus its current
neighbors' and let schedules decay.

Regret is measured against the perfect-coordination ceiling: after k turns,
R_k = k * top_n_sum(means, N) - sum_j g_j, where g_j adds the true mean of
every arm pulled at least once in turn j (a collided arm counts once; the
reward exists once no matter how many players fought over it).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .allocation import top_n_sum
from .core import ArmSet, CommunicationGraph, Observation, TurnRecord, draw_rewards, resolve_collisions, sample_graph
from .policies import PLAYER_TYPES
from .rng import replication_rng


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """Everything a run needs; replications differ only in their derived stream."""

    policy: str
    means: tuple[float, ...]
    n_players: int
    alpha: float
    turns: int
    replications: int
    base_seed: int
    epsilon: float = 1.0
    decay: float = 0.999

    def __post_init__(self) -> None:
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        ArmSet(self.means)  # range check
        if self.policy not in PLAYER_TYPES:
            known = ", ".join(sorted(PLAYER_TYPES))
            raise ValueError(f"unknown policy {self.policy!r}; known: {known}")
        if self.n_players < 1:
            raise ValueError("need at least one player")
        if self.policy == "optimal_cycle" and self.n_players > len(self.means):
            raise ValueError(
                f"optimal_cycle needs players <= arms, got {self.n_players} > {len(self.means)}"
            )
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha {self.alpha} outside [0, 1]")
        if self.turns < 1:
            raise ValueError("turns must be >= 1")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon {self.epsilon} outside [0, 1]")
        if not 0.0 < self.decay < 1.0:
            raise ValueError(f"decay {self.decay} outside (0, 1)")

    @property
    def n_arms(self) -> int:
        return len(self.means)


@dataclass(frozen=True, slots=True)
class MetricsSeries:
    """One replication's per-turn trace; index k-1 holds turn k."""

    expected_gain: tuple[float, ...]
    realized_gain: tuple[int, ...]
    cumulative_regret: tuple[float, ...]
    collisions: tuple[int, ...]

    @property
    def n_turns(self) -> int:
        return len(self.expected_gain)


@dataclass(frozen=True, slots=True)
class AggregateSeries:
    """Across-replication mean and sample std (ddof=1; zero when reps == 1)."""

    expected_gain_mean: tuple[float, ...]
    expected_gain_std: tuple[float, ...]
    realized_gain_mean: tuple[float, ...]
    realized_gain_std: tuple[float, ...]
    cumulative_regret_mean: tuple[float, ...]
    cumulative_regret_std: tuple[float, ...]
    collisions_mean: tuple[float, ...]
    collisions_std: tuple[float, ...]
    final_regret_mean: float
    final_regret_std: float


@dataclass(frozen=True, slots=True)
class ExperimentResult:
    config: ExperimentConfig
    series: tuple[MetricsSeries, ...]
    aggregate: AggregateSeries


def build_player(policy: str, index: int, n_arms: int, n_players: int,
                 epsilon: float = 1.0, decay: float = 0.999):
    """Instantiate one seat of the named policy."""
    try:
        cls = PLAYER_TYPES[policy]
    except KeyError:
        known = ", ".join(sorted(PLAYER_TYPES))
        raise ValueError(f"unknown policy {policy!r}; known: {known}") from None
    return cls(index, n_arms, n_players, epsilon=epsilon, decay=decay)


def run_turn(players, arms: ArmSet, alpha: float,
             rng: random.Random) -> tuple[TurnRecord, CommunicationGraph]:
    """Execute one turn and feed every player its share of the observations.

    Stream layout per turn is fixed: graph pair coins, arm draws, player
    selections in ascending index order, then collision winners in ascending
    arm order. Observations travel over the graph sampled this same turn.
    """
    graph = sample_graph(len(players), alpha, rng)
    draw = draw_rewards(arms, rng)
    choices = [player.select(rng) for player in players]
    record = resolve_collisions(choices, draw, rng)

    observations = [
        Observation(p, record.choices[p], record.player_rewards[p])
        for p in range(len(players))
    ]
    for p, player in enumerate(players):
        delivered = [observations[p]]
        delivered += (observations[q] for q in graph.neighbors(p))
        player.observe(delivered)
    for player in players:
        player.end_turn()
    return record, graph


def run_replication(config: ExperimentConfig, replication: int) -> MetricsSeries:
    """Run one full T-turn game on the stream derived from (base_seed, replication)."""
    rng = replication_rng(config.base_seed, replication)
    arms = ArmSet(config.means)
    players = [
        build_player(config.policy, i, config.n_arms, config.n_players,
                     epsilon=config.epsilon, decay=config.decay)
        for i in range(config.n_players)
    ]
    ceiling = top_n_sum(config.means, min(config.n_players, config.n_arms))

    expected_gain = []
    realized_gain = []
    cumulative_regret = []
    collisions = []
    regret = 0.0
    for _ in range(config.turns):
        record, _graph = run_turn(players, arms, config.alpha, rng)
        gain = 0.0
        for arm, pulled in enumerate(record.pulled_indicator):
            if pulled:
                gain += config.means[arm]
        regret += ceiling - gain
        expected_gain.append(gain)
        realized_gain.append(sum(record.player_rewards))
        cumulative_regret.append(regret)
        collisions.append(record.n_collisions)
    return MetricsSeries(
        tuple(expected_gain), tuple(realized_gain),
        tuple(cumulative_regret), tuple(collisions),
    )


def _mean_std(rows: list[tuple[float, ...]]) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Column-wise mean and ddof=1 std over replications (std 0.0 for a single row)."""
    n = len(rows)
    n_cols = len(rows[0])
    means = []
    stds = []
    for col in range(n_cols):
        values = [row[col] for row in rows]
        m = sum(values) / n
        means.append(m)
        if n < 2:
            stds.append(0.0)
        else:
            stds.append(math.sqrt(sum((v - m) ** 2 for v in values) / (n - 1)))
    return tuple(means), tuple(stds)


def aggregate_series(series) -> AggregateSeries:
    """Pure reduction over replications; independent of their order of arrival."""
    series = list(series)
    if not series:
        raise ValueError("need at least one replication series")
    lengths = {s.n_turns for s in series}
    if len(lengths) != 1:
        raise ValueError(f"mixed series lengths {sorted(lengths)}")
    eg_mean, eg_std = _mean_std([s.expected_gain for s in series])
    rg_mean, rg_std = _mean_std([s.realized_gain for s in series])
    cr_mean, cr_std = _mean_std([s.cumulative_regret for s in series])
    co_mean, co_std = _mean_std([s.collisions for s in series])
    return AggregateSeries(
        eg_mean, eg_std, rg_mean, rg_std, cr_mean, cr_std, co_mean, co_std,
        final_regret_mean=cr_mean[-1], final_regret_std=cr_std[-1],
    )


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """All replications plus their aggregate. Sequential; streams are per-replication."""
    series = tuple(run_replication(config, r) for r in range(config.replications))
    return ExperimentResult(config, series, aggregate_series(series))
