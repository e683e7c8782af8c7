"""Pouring strategies for the continuous game.

Every function takes a world-like object exposing ``n``, ``cup_x``,
``cup_y``, ``player_pos`` and ``levels()`` and returns a dense rate vector
(length ``n``, nonnegative, summing to at most 1).  The compiled core carries
its own copy of these rules; the pure-Python core calls the index helpers
below, so both must stay in lockstep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import max_sq_distance_pair

MASK64 = (1 << 64) - 1
INV53 = 1.0 / 9007199254740992.0

# Kind codes shared with the cores.
MANUAL, DIAMETER, FARTHEST, FULLEST, UNIFORM, RANDOM = range(6)

KINDS = {
    "diameter-endpoints": DIAMETER,
    "farthest-from-player": FARTHEST,
    "fullest-cup": FULLEST,
    "uniform": UNIFORM,
    "random": RANDOM,
}
STATIC_KINDS = {DIAMETER, UNIFORM}


class SplitMix64:
    """64-bit SplitMix generator; bit-identical to the one in the compiled core."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def unit(self) -> float:
        """Uniform double in (0, 1]."""
        return 1.0 - (self.next() >> 11) * INV53


# -- index-level rules (shared with the pure-Python core) -------------------

def farthest_index(xs, ys, px: float, py: float) -> int:
    best, arg = -1.0, 0
    for c in range(len(xs)):
        dx = xs[c] - px
        dy = ys[c] - py
        d = dx * dx + dy * dy
        if d > best:
            best, arg = d, c
    return arg


def fullest_index(levels) -> int:
    best, arg = -np.inf, 0
    for c, v in enumerate(levels):
        if v > best:
            best, arg = v, c
    return arg


def random_rates(n: int, rng: SplitMix64, out: list) -> None:
    """Fill ``out`` with a random allocation over a random subset of cups.

    Draw order (mirrored by the compiled core): subset size, then per slot a
    partial Fisher-Yates swap followed by a weight.
    """
    perm = list(range(n))
    for c in range(n):
        out[c] = 0.0
    m = 1 + rng.next() % n
    total = 0.0
    for j in range(m):
        r = j + rng.next() % (n - j)
        perm[j], perm[r] = perm[r], perm[j]
        w = rng.unit()
        out[perm[j]] = w
        total += w
    for j in range(m):
        out[perm[j]] = out[perm[j]] / total


# -- world-level API --------------------------------------------------------

def diameter_endpoints(world, pair: tuple[int, int] | None = None) -> np.ndarray:
    """Rate 1/2 into each end of a diameter pair (rate 1 for a single cup)."""
    rates = np.zeros(world.n)
    if world.n == 1:
        rates[0] = 1.0
        return rates
    if pair is None:
        xy = np.column_stack([world.cup_x, world.cup_y])
        a, b, _ = max_sq_distance_pair(xy)
    else:
        a, b = pair
    rates[a] = 0.5
    rates[b] = 0.5
    return rates


def farthest_from_player(world) -> np.ndarray:
    """Rate 1 into the cup farthest from the player (ties by id)."""
    rates = np.zeros(world.n)
    px, py = world.player_pos
    rates[farthest_index(world.cup_x, world.cup_y, px, py)] = 1.0
    return rates


def fullest_cup(world) -> np.ndarray:
    """Rate 1 into the currently fullest cup (ties by id)."""
    rates = np.zeros(world.n)
    rates[fullest_index(world.levels())] = 1.0
    return rates


def uniform(world) -> np.ndarray:
    return np.full(world.n, 1.0 / world.n)


def random_adversary(world, rng: SplitMix64) -> np.ndarray:
    """Random split over a random subset, normalized to total rate 1."""
    out = [0.0] * world.n
    random_rates(world.n, rng, out)
    return np.array(out)


@dataclass
class AdversarySpec:
    kind: str = "farthest-from-player"
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown adversary kind {self.kind!r}")

    @property
    def code(self) -> int:
        return KINDS[self.kind]

    @property
    def static(self) -> bool:
        return self.code in STATIC_KINDS

    @classmethod
    def from_dict(cls, d) -> "AdversarySpec":
        if isinstance(d, str):
            return cls(kind=d)
        d = dict(d)
        kind = d.pop("kind")
        seed = int(d.pop("seed", 0))
        params = d.pop("params", {})
        params.update(d)
        return cls(kind, seed, params)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "params": dict(self.params)}
