"""The abstract discrete cup game with budget tau and k emptyings per step.

Each step the adversary pours a total of ``tau`` into cups of its choice,
then the player empties the ``k`` fullest cups.  After ``r`` steps no cup
holds more than ``H_r * tau / k``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

TOL = 1e-9


def harmonic(r: int) -> float:
    if r < 0:
        raise ValueError("harmonic number of a negative index")
    return math.fsum(1.0 / i for i in range(1, r + 1))


def harmonic_level_bound(r: int, tau: float, k: int) -> float:
    """Upper bound ``H_r * tau / k`` on any level after ``r`` complete steps."""
    return harmonic(r) * tau / k


def equalizer_final_level(r: int, tau: float, k: int) -> float:
    """Level left by the equalizing adversary: ``tau * sum_j 1/(j k + 1)``."""
    return tau * math.fsum(1.0 / (j * k + 1) for j in range(1, r + 1))


@dataclass
class TaukState:
    levels: dict[int, float] = field(default_factory=dict)
    round: int = 0
    next_id: int = 0

    def fresh_id(self) -> int:
        cid = self.next_id
        self.next_id += 1
        return cid

    def ranked(self) -> list[int]:
        """Cup ids, fullest first, ties by smallest id."""
        return sorted(self.levels, key=lambda c: (-self.levels[c], c))

    def fullest(self, count: int) -> list[int]:
        """The ``count`` fullest cups, adding fresh empty cups when short."""
        ids = self.ranked()[:count]
        while len(ids) < count:
            ids.append(self.fresh_id())
        return ids

    def max_level(self) -> float:
        return max(self.levels.values(), default=0.0)

    def total(self) -> float:
        return math.fsum(self.levels.values())


def tauk_step(state: TaukState, pour: dict[int, float], k: int) -> TaukState:
    """One step: add ``pour``, then empty the ``k`` fullest cups.

    Returns a new state; cups left at level 0 are dropped.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    levels = dict(state.levels)
    next_id = state.next_id
    for cup, amount in pour.items():
        if amount < 0:
            raise ValueError("negative pour")
        levels[cup] = levels.get(cup, 0.0) + amount
        next_id = max(next_id, cup + 1)
    ranked = sorted(levels, key=lambda c: (-levels[c], c))
    for cup in ranked[:k]:
        levels[cup] = 0.0
    levels = {c: v for c, v in levels.items() if v > 0.0}
    return TaukState(levels, state.round + 1, next_id)


# Adversaries.  Signature: (state, j, r, k, tau) -> allocation, j = 1..r.

PourStrategy = Callable[[TaukState, int, int, int, float], dict]


def equalizing_adversary(state: TaukState, j: int, r: int, k: int, tau: float) -> dict[int, float]:
    """Split ``tau`` evenly over the ``(r-j+1)k+1`` fullest cups."""
    width = (r - j + 1) * k + 1
    share = tau / width
    return {c: share for c in state.fullest(width)}


def single_cup_adversary(state: TaukState, j: int, r: int, k: int, tau: float) -> dict[int, float]:
    """Pour everything into the (k+1)-th fullest cup, the fullest one to survive."""
    return {state.fullest(k + 1)[k]: tau}


def spread_adversary(width_factor: int = 2) -> PourStrategy:
    """Spread ``tau`` uniformly over the ``width_factor * k + 1`` fullest cups."""

    def pour(state, j, r, k, tau):
        width = width_factor * k + 1
        share = tau / width
        return {c: share for c in state.fullest(width)}

    pour.__name__ = f"spread_adversary_{width_factor}"
    return pour


def random_adversary(seed: int) -> PourStrategy:
    """Seeded random split of ``tau`` over a random mix of old and fresh cups."""
    rng = random.Random(seed)

    def pour(state, j, r, k, tau):
        existing = state.ranked()
        m = rng.randint(1, 3 * k + 1)
        n_old = rng.randint(0, min(m, len(existing)))
        cups = rng.sample(existing, n_old)
        cups += [state.fresh_id() for _ in range(m - n_old)]
        weights = [1.0 - rng.random() for _ in cups]
        total = math.fsum(weights)
        return {c: tau * w / total for c, w in zip(cups, weights)}

    pour.__name__ = f"random_adversary_{seed}"
    return pour


ADVERSARIES = {
    "equalizing": equalizing_adversary,
    "single-cup": single_cup_adversary,
    "spread": spread_adversary(),
}


def make_adversary(name: str, seed: int = 0) -> PourStrategy:
    if name == "random":
        return random_adversary(seed)
    try:
        return ADVERSARIES[name]
    except KeyError:
        raise ValueError(f"unknown adversary {name!r}") from None


@dataclass
class RoundRecord:
    round: int
    sorted_levels: list[float]  # X_j^(1) >= X_j^(2) >= ...
    partial_sum: float  # S_j over the (r-j)k+1 fullest cups
    max_level: float

    def x(self, i: int) -> float:
        """Level of the i-th fullest cup (1-based), 0 beyond the known cups."""
        return self.sorted_levels[i - 1] if i <= len(self.sorted_levels) else 0.0


@dataclass
class TaukTrace:
    r: int
    tau: float
    k: int
    rounds: list[RoundRecord]

    def max_levels(self) -> list[float]:
        return [rec.max_level for rec in self.rounds]

    def final_max(self) -> float:
        return self.rounds[-1].max_level if self.rounds else 0.0

    def bound_violations(self, tol: float = TOL) -> list[int]:
        """Rounds j whose max level exceeds ``H_j tau / k``."""
        return [
            rec.round for rec in self.rounds
            if rec.max_level > harmonic_level_bound(rec.round, self.tau, self.k) + tol
        ]

    def recurrence_violations(self, tol: float = TOL) -> list[int]:
        """Rounds j where the potential recurrence on ``S_j`` fails.

        Checked inequality:
        ``S_j/((r-j)k+1) <= tau/((r-j+1)k+1) + S_{j-1}/((r-j+1)k+1)``.
        """
        r, k, tau = self.r, self.k, self.tau
        bad = []
        prev = 0.0
        for rec in self.rounds:
            j = rec.round
            lhs = rec.partial_sum / ((r - j) * k + 1)
            wide = (r - j + 1) * k + 1
            if lhs > tau / wide + prev / wide + tol:
                bad.append(j)
            prev = rec.partial_sum
        return bad


def _partial_sum(sorted_levels: list[float], count: int) -> float:
    return math.fsum(sorted_levels[:count])


def run_tauk(r: int, tau: float, k: int, adversary: PourStrategy) -> TaukTrace:
    """Play ``r`` steps and record, after each, the sorted levels and ``S_j``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    state = TaukState()
    rounds = []
    for j in range(1, r + 1):
        pour = adversary(state, j, r, k, tau)
        total = math.fsum(pour.values())
        if abs(total - tau) > TOL * max(1.0, tau):
            raise ValueError(f"pour budget mismatch: {total} != {tau}")
        state = tauk_step(state, pour, k)
        levels = sorted(state.levels.values(), reverse=True)
        s = _partial_sum(levels, (r - j) * k + 1)
        rounds.append(RoundRecord(j, levels, s, levels[0] if levels else 0.0))
    return TaukTrace(r, tau, k, rounds)
