"""Optimal sampling distribution under full communication.

When every player draws its arm independently from the same distribution c,
the expected value left on the table each turn is sum_i (1-c_i)^N * mu_i.
Minimizing that subject to sum(c) = 1 equalizes (1-c_i)^(N-1) * mu_i across
all arms that keep positive mass; arms whose unconstrained mass would go
negative are dropped and the reduced problem is re-solved on the remainder.

``brute_force_allocation`` is a lattice-search oracle used by tests to check
the closed form; it shares only the loss evaluator, never the solution path.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class AllocationResult:
    """Active arms, their pull probabilities, and the equalized constant.

    ``probabilities`` has one entry per arm with 0.0 on discarded arms and
    sums to 1 over ``active_set``. For every active arm,
    (1 - c_i)^(N-1) * mu_i equals ``equalized_constant``.
    """

    active_set: tuple[int, ...]
    probabilities: tuple[float, ...]
    equalized_constant: float


def optimal_allocation(means, n_players: int) -> AllocationResult:
    """Loss-minimizing pull distribution for N players over Bernoulli arms.

    Iterates: compute c_i = 1 - (|H|-1) / sum_{k in H} (mu_i/mu_k)^(1/(N-1))
    over the active set H, drop every arm with c_i <= 0, repeat until all
    remaining masses are positive. Depends only on the ratios mu_i/mu_k, so
    any common rescaling of the means yields the same allocation.

    A single player needs no mixing: the whole mass goes on the best arm
    (ties to the lowest index).
    """
    means = [float(m) for m in means]
    if not means:
        raise ValueError("need at least one arm")
    for m in means:
        if m <= 0.0:
            raise ValueError(f"arm mean {m} must be positive; floor observed zeros first")
    if n_players < 1:
        raise ValueError("need at least one player")

    n_arms = len(means)
    if n_players == 1:
        best = max(range(n_arms), key=lambda i: (means[i], -i))
        probs = [0.0] * n_arms
        probs[best] = 1.0
        # exponent N-1 = 0 makes the equalized product collapse to the mean itself
        return AllocationResult((best,), tuple(probs), means[best])

    inv_exp = 1.0 / (n_players - 1)
    active = list(range(n_arms))
    while True:
        # (mu_i/mu_k)^(1/(N-1)) sums factor through r_i = mu_i^(1/(N-1))
        roots = [means[i] ** inv_exp for i in active]
        inv_sum = sum(1.0 / r for r in roots)
        surplus = len(active) - 1
        masses = [1.0 - surplus / (r * inv_sum) for r in roots]
        if all(c > 0.0 for c in masses):
            break
        active = [i for i, c in zip(active, masses) if c > 0.0]
        if not active:
            # unreachable: the largest-mean arm always keeps positive mass
            raise AssertionError("active set emptied")

    probabilities = [0.0] * n_arms
    for i, c in zip(active, masses):
        probabilities[i] = c
    constant = (surplus / inv_sum) ** (n_players - 1)
    return AllocationResult(tuple(active), tuple(probabilities), constant)


def _loss(means, probabilities, n_players: int) -> float:
    return sum((1.0 - c) ** n_players * m for c, m in zip(probabilities, means))


def expected_turn_loss(means, probabilities, n_players: int) -> float:
    """Expected value lost per turn: sum over arms of (1-c_i)^N * mu_i."""
    if len(means) != len(probabilities):
        raise ValueError(f"{len(means)} means vs {len(probabilities)} probabilities")
    total = sum(probabilities)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, not 1")
    if any(c < 0.0 for c in probabilities):
        raise ValueError("probabilities must be non-negative")
    return _loss(means, probabilities, n_players)


def expected_turn_gain(means, probabilities, n_players: int) -> float:
    """Expected value collected per turn: sum_i (1-(1-c_i)^N) * mu_i."""
    return sum(means) - expected_turn_loss(means, probabilities, n_players)


def top_n_sum(means, n_players: int) -> float:
    """Sum of the N largest means: the per-turn ceiling under perfect coordination."""
    if n_players > len(means):
        raise ValueError(f"{n_players} players exceed {len(means)} arms")
    if n_players < 0:
        raise ValueError("player count must be non-negative")
    return sum(sorted(means, reverse=True)[:n_players])


def brute_force_allocation(means, n_players: int, resolution: float):
    """Exhaustive lattice search over the probability simplex; test oracle only.

    Enumerates every distribution whose entries are multiples of
    ``resolution`` and returns ``(probabilities, loss)`` for the minimizer
    (first hit in lexicographic order on ties). Exponential in the arm count;
    meant for up to 4 arms.
    """
    means = [float(m) for m in means]
    if not means:
        raise ValueError("need at least one arm")
    if resolution <= 0.0 or resolution > 1.0:
        raise ValueError(f"resolution {resolution} outside (0, 1]")
    steps = round(1.0 / resolution)
    if abs(steps * resolution - 1.0) > 1e-9:
        raise ValueError(f"resolution {resolution} does not divide 1 evenly")

    n_arms = len(means)
    best_counts = None
    best_loss = float("inf")
    for counts in _compositions(steps, n_arms):
        loss = 0.0
        for k, m in zip(counts, means):
            loss += ((steps - k) / steps) ** n_players * m
        if loss < best_loss:
            best_loss = loss
            best_counts = counts
    probabilities = tuple(k / steps for k in best_counts)
    return probabilities, best_loss


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head, *tail)
