"""Per-player decision rules.

Baselines (UCB1, epsilon-greedy, Thompson sampling) treat neighbor reports
exactly like their own pulls. The two coordination-aware rules are
``asymp_opt_select`` (sample from the loss-minimizing distribution over
observed means) and ``optimal_cycle_select`` (rotate through the top-N arms,
shuffling cycle offsets whenever a neighbor is seen on one's own slot).

Selection functions are pure given the stats and the stream; the ``*Player``
classes own one seat's state and adapt the functions to the engine's
select/observe/end_turn turn protocol.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .allocation import optimal_allocation
from .core import Observation

# keeps allocation ratios defined when an arm has never paid out
MEAN_FLOOR = 1e-6


@dataclass(slots=True)
class ArmStats:
    """Per-arm pull counts and reward sums pooled over self + neighbor reports."""

    pull_counts: list[int]
    reward_sums: list[int]
    total_observations: int = 0

    @classmethod
    def empty(cls, n_arms: int) -> "ArmStats":
        return cls([0] * n_arms, [0] * n_arms, 0)

    @property
    def n_arms(self) -> int:
        return len(self.pull_counts)

    def add(self, arm: int, reward: int) -> None:
        self.pull_counts[arm] += 1
        self.reward_sums[arm] += reward
        self.total_observations += 1

    def mean(self, arm: int) -> float:
        """Observed mean; unobserved arms count as 0 (collision losses stay in)."""
        n = self.pull_counts[arm]
        return self.reward_sums[arm] / n if n else 0.0

    def means(self) -> list[float]:
        return [self.mean(i) for i in range(self.n_arms)]


@dataclass(slots=True)
class BetaStats:
    """Success/failure counters backing per-arm Beta posteriors."""

    successes: list[int]
    failures: list[int]

    @classmethod
    def empty(cls, n_arms: int) -> "BetaStats":
        return cls([0] * n_arms, [0] * n_arms)

    @property
    def n_arms(self) -> int:
        return len(self.successes)

    def add(self, arm: int, reward: int) -> None:
        if reward == 1:
            self.successes[arm] += 1
        else:
            self.failures[arm] += 1


def ingest(stats, observations) -> None:
    """Fold a turn's observations (own + neighbors) into the counters.

    Pure counting, so the result is independent of observation order.
    """
    for obs in observations:
        stats.add(obs.arm, obs.reward)
    return stats


@dataclass(slots=True)
class ExplorationSchedule:
    """Exploration probability multiplied by ``decay`` once per turn."""

    epsilon: float = 1.0
    decay: float = 0.999

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon {self.epsilon} outside [0, 1]")
        if not 0.0 < self.decay < 1.0:
            raise ValueError(f"decay {self.decay} outside (0, 1)")

    def step(self) -> None:
        self.epsilon *= self.decay


@dataclass(slots=True)
class CycleState:
    """One player's view of the rotation over the top-N arms.

    ``neighbor_offsets`` maps a neighbor to its last-known cycle slot relative
    to ours, modulo N; our own relative offset is definitionally 0 and never
    stored. ``own_offset`` is the slot used to re-enter the cycle after an
    exploration pull.
    """

    own_offset: int
    neighbor_offsets: dict[int, int] = field(default_factory=dict)
    last_choice: int | None = None
    schedule: ExplorationSchedule = field(default_factory=ExplorationSchedule)


def ucb1_select(stats: ArmStats) -> int:
    """Highest mean plus sqrt(2 ln n / n_i) bonus; unobserved arms first."""
    counts = stats.pull_counts
    for arm, n_arm in enumerate(counts):
        if n_arm == 0:
            return arm
    log_term = 2.0 * math.log(stats.total_observations)
    best_arm = 0
    best_index = -math.inf
    for arm, n_arm in enumerate(counts):
        value = stats.reward_sums[arm] / n_arm + math.sqrt(log_term / n_arm)
        if value > best_index:
            best_index = value
            best_arm = arm
    return best_arm


def _argmax_mean(stats: ArmStats) -> int:
    best_arm = 0
    best_mean = -math.inf
    for arm in range(stats.n_arms):
        m = stats.mean(arm)
        if m > best_mean:
            best_mean = m
            best_arm = arm
    return best_arm


def eps_greedy_select(stats: ArmStats, schedule: ExplorationSchedule, rng: random.Random) -> int:
    """Uniform arm with probability epsilon, else the best observed mean."""
    if rng.random() < schedule.epsilon:
        return rng.randrange(stats.n_arms)
    return _argmax_mean(stats)


def thompson_select(stats: BetaStats, rng: random.Random) -> int:
    """Sample Beta(S_i+1, F_i+1) per arm in ascending order, pull the argmax."""
    best_arm = 0
    best_draw = -math.inf
    for arm in range(stats.n_arms):
        draw = rng.betavariate(stats.successes[arm] + 1, stats.failures[arm] + 1)
        if draw > best_draw:
            best_draw = draw
            best_arm = arm
    return best_arm


def asymp_opt_select(
    stats: ArmStats,
    schedule: ExplorationSchedule,
    n_players: int,
    rng: random.Random,
) -> int:
    """Explore uniformly with probability epsilon, else sample the optimal mix.

    The exploitation branch recomputes the loss-minimizing distribution from
    the floored observed means and inverse-CDF samples it over ascending arm
    indices. Only mean ratios matter, so the collision discount common to all
    arms cancels out.
    """
    if rng.random() < schedule.epsilon:
        return rng.randrange(stats.n_arms)
    floored = [max(m, MEAN_FLOOR) for m in stats.means()]
    allocation = optimal_allocation(floored, n_players)
    u = rng.random()
    acc = 0.0
    last_active = allocation.active_set[-1]
    for arm in allocation.active_set:
        acc += allocation.probabilities[arm]
        if acc >= u:
            return arm
    return last_active  # float shortfall at u ~ 1


def optimal_cycle_select(
    state: CycleState,
    stats: ArmStats,
    n_players: int,
    neighbor_reports,
    rng: random.Random,
) -> int:
    """Advance one slot in the rotation over the top-N arms, dodging collisions.

    ``neighbor_reports`` are (player, arm) pairs from the previous turn's
    exchange. Offsets are measured against our own previous pull whenever both
    arms rank in the current top N. Seeing any neighbor on our own slot
    triggers a uniformly random shift drawn from {0} plus the slots not known
    to be taken; the shift moves us and re-bases every stored offset.

    The very first turn is always a uniform random pull; after an exploration
    pull that landed outside the top N the cycle is re-entered at
    ``own_offset``.
    """
    n_arms = stats.n_arms
    if n_players > n_arms:
        raise ValueError(f"cycle undefined: {n_players} players but only {n_arms} arms")
    if state.last_choice is None:
        return rng.randrange(n_arms)
    if rng.random() < state.schedule.epsilon:
        return rng.randrange(n_arms)

    means = stats.means()
    order = sorted(range(n_arms), key=lambda i: (-means[i], i))
    top = order[:n_players]
    rank_of = {arm: rank for rank, arm in enumerate(top)}
    own_rank = rank_of.get(state.last_choice)

    if own_rank is not None:
        for player, arm in neighbor_reports:
            rank = rank_of.get(arm)
            if rank is not None:
                state.neighbor_offsets[player] = (rank - own_rank) % n_players

    shift = 0
    offsets = state.neighbor_offsets
    if offsets and 0 in offsets.values():
        taken = set(offsets.values())
        candidates = [0] + [s for s in range(1, n_players) if s not in taken]
        shift = candidates[rng.randrange(len(candidates))]
        if shift:
            for player in offsets:
                offsets[player] = (offsets[player] - shift) % n_players
        state.own_offset = (state.own_offset + shift) % n_players

    if own_rank is not None:
        next_rank = (own_rank + 1 + shift) % n_players
    else:
        next_rank = state.own_offset
    return top[next_rank]


class UCB1Player:
    """Index policy seat; fully deterministic given the pooled observations."""

    name = "ucb1"

    def __init__(self, index: int, n_arms: int, n_players: int,
                 epsilon: float = 1.0, decay: float = 0.999):
        self.index = index
        self.stats = ArmStats.empty(n_arms)

    def select(self, rng: random.Random) -> int:
        return ucb1_select(self.stats)

    def observe(self, observations) -> None:
        ingest(self.stats, observations)

    def end_turn(self) -> None:
        pass


class EpsGreedyPlayer:
    name = "eps_greedy"

    def __init__(self, index: int, n_arms: int, n_players: int,
                 epsilon: float = 1.0, decay: float = 0.999):
        self.index = index
        self.stats = ArmStats.empty(n_arms)
        self.schedule = ExplorationSchedule(epsilon, decay)

    def select(self, rng: random.Random) -> int:
        return eps_greedy_select(self.stats, self.schedule, rng)

    def observe(self, observations) -> None:
        ingest(self.stats, observations)

    def end_turn(self) -> None:
        self.schedule.step()


class ThompsonPlayer:
    name = "thompson"

    def __init__(self, index: int, n_arms: int, n_players: int,
                 epsilon: float = 1.0, decay: float = 0.999):
        self.index = index
        self.stats = BetaStats.empty(n_arms)

    def select(self, rng: random.Random) -> int:
        return thompson_select(self.stats, rng)

    def observe(self, observations) -> None:
        ingest(self.stats, observations)

    def end_turn(self) -> None:
        pass


class AsympOptPlayer:
    name = "asymp_opt"

    def __init__(self, index: int, n_arms: int, n_players: int,
                 epsilon: float = 1.0, decay: float = 0.999):
        self.index = index
        self.n_players = n_players
        self.stats = ArmStats.empty(n_arms)
        self.schedule = ExplorationSchedule(epsilon, decay)

    def select(self, rng: random.Random) -> int:
        return asymp_opt_select(self.stats, self.schedule, self.n_players, rng)

    def observe(self, observations) -> None:
        ingest(self.stats, observations)

    def end_turn(self) -> None:
        self.schedule.step()


class OptimalCyclePlayer:
    """Rotation seat: tracks neighbors' cycle slots from their reported pulls."""

    name = "optimal_cycle"

    def __init__(self, index: int, n_arms: int, n_players: int,
                 epsilon: float = 1.0, decay: float = 0.999):
        self.index = index
        self.n_players = n_players
        self.stats = ArmStats.empty(n_arms)
        self.state = CycleState(
            own_offset=index % n_players,
            schedule=ExplorationSchedule(epsilon, decay),
        )
        self._reports: list[tuple[int, int]] = []

    def select(self, rng: random.Random) -> int:
        arm = optimal_cycle_select(self.state, self.stats, self.n_players, self._reports, rng)
        self.state.last_choice = arm
        return arm

    def observe(self, observations) -> None:
        ingest(self.stats, observations)
        self._reports = [
            (obs.origin_player, obs.arm)
            for obs in observations
            if obs.origin_player != self.index
        ]

    def end_turn(self) -> None:
        self.state.schedule.step()


PLAYER_TYPES = {
    cls.name: cls
    for cls in (UCB1Player, EpsGreedyPlayer, ThompsonPlayer, AsympOptPlayer, OptimalCyclePlayer)
}
