"""Ground-truth world model: arms, reward draws, communication graphs, collisions.

Arms and players are 0-indexed throughout. All sampling takes an explicit
``random.Random`` stream, so every function here is pure given its stream and
safe to call from concurrently running replications.
"""

from __future__ import annotations

import random
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class ArmSet:
    """Bernoulli arms; ``means[i]`` is the hidden success probability of arm i."""

    means: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        if not self.means:
            raise ValueError("need at least one arm")
        for m in self.means:
            if not 0.0 <= m <= 1.0:
                raise ValueError(f"arm mean {m} outside [0, 1]")

    @property
    def n_arms(self) -> int:
        return len(self.means)


@dataclass(frozen=True, slots=True)
class TurnDraw:
    """One turn's 0/1 reward realization for every arm, pulled or not."""

    rewards: tuple[int, ...]

    @property
    def n_arms(self) -> int:
        return len(self.rewards)


class CommunicationGraph:
    """Undirected player graph for one turn; ``alpha`` records the generating density."""

    __slots__ = ("n_players", "alpha", "edges", "_adjacency")

    def __init__(self, n_players: int, edges, alpha: float):
        if n_players < 1:
            raise ValueError("need at least one player")
        self.n_players = n_players
        self.alpha = alpha
        normalized = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop on player {a}")
            if not (0 <= a < n_players and 0 <= b < n_players):
                raise ValueError(f"edge ({a}, {b}) out of player range")
            normalized.add((min(a, b), max(a, b)))
        self.edges = frozenset(normalized)
        adjacency = [[] for _ in range(n_players)]
        for a, b in sorted(self.edges):
            adjacency[a].append(b)
            adjacency[b].append(a)
        self._adjacency = [tuple(sorted(nbrs)) for nbrs in adjacency]

    def neighbors(self, player: int) -> tuple[int, ...]:
        return self._adjacency[player]

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True, slots=True)
class TurnRecord:
    """Outcome of one turn: everyone's choice, per-arm winners, realized rewards."""

    choices: tuple[int, ...]
    winners: dict[int, int]          # pulled arm -> winning player
    player_rewards: tuple[int, ...]
    pulled_indicator: tuple[bool, ...]

    @property
    def n_collisions(self) -> int:
        """Players that lost a collision this turn (choices minus distinct arms)."""
        return len(self.choices) - len(self.winners)


@dataclass(frozen=True, slots=True)
class Observation:
    """What a player tells its neighbors: the arm it pulled and the reward it kept.

    Collision losers report 0; the pre-collision draw is never visible.
    """

    origin_player: int
    arm: int
    reward: int


def sample_graph(n_players: int, alpha: float, rng: random.Random) -> CommunicationGraph:
    """Erdős–Rényi graph: each unordered pair is an edge with probability alpha.

    Pairs are tested in lexicographic order (i < j ascending) and one uniform
    variate is consumed per pair regardless of alpha, so the stream layout is
    identical for every alpha.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    if n_players < 1:
        raise ValueError("need at least one player")
    edges = []
    for i in range(n_players):
        for j in range(i + 1, n_players):
            if rng.random() < alpha:
                edges.append((i, j))
    return CommunicationGraph(n_players, edges, alpha)


def draw_rewards(arms: ArmSet, rng: random.Random) -> TurnDraw:
    """Draw every arm's Bernoulli reward for this turn, in ascending arm order."""
    return TurnDraw(tuple(1 if rng.random() < m else 0 for m in arms.means))


def resolve_collisions(choices, draw: TurnDraw, rng: random.Random) -> TurnRecord:
    """Winner-takes-reward collision resolution.

    Arms are processed in ascending index order; on each arm chosen by k >= 2
    players one winner is drawn uniformly (a sole chooser wins without
    consuming randomness). The winner receives the arm's draw, losers get 0.
    """
    n_arms = draw.n_arms
    choices = tuple(choices)
    by_arm: dict[int, list[int]] = {}
    for player, arm in enumerate(choices):
        if not 0 <= arm < n_arms:
            raise ValueError(f"player {player} chose arm {arm}, out of range 0..{n_arms - 1}")
        by_arm.setdefault(arm, []).append(player)

    winners: dict[int, int] = {}
    player_rewards = [0] * len(choices)
    pulled = [False] * n_arms
    for arm in sorted(by_arm):
        pullers = by_arm[arm]  # ascending by construction
        winner = pullers[0] if len(pullers) == 1 else pullers[rng.randrange(len(pullers))]
        winners[arm] = winner
        player_rewards[winner] = draw.rewards[arm]
        pulled[arm] = True
    return TurnRecord(choices, winners, tuple(player_rewards), tuple(pulled))
