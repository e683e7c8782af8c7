"""Scenario configuration: cup layout, adversary, strategy and run knobs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .adversaries import AdversarySpec
from .geometry import PointSet, diameter

STRATEGIES = ("coroutine", "greedy", "static-loop")


class ConfigError(ValueError):
    pass


def generate_cups(spec: dict) -> PointSet:
    """Build the cup set from an explicit list or a generator block.

    Generators: ``uniform`` (n, side, seed), ``grid`` (rows, cols, spacing),
    ``two-point`` (distance), ``explicit`` (points).  An optional
    ``diameter`` rescales the set about its bounding-box centre to that
    diameter.
    """
    kind = spec.get("kind", "explicit")
    if kind == "explicit":
        xy = np.asarray(spec["points"], dtype=float).reshape(-1, 2)
    elif kind == "uniform":
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        side = float(spec.get("side", 1.0))
        xy = rng.random((int(spec["n"]), 2)) * side
    elif kind == "grid":
        rows, cols = int(spec["rows"]), int(spec["cols"])
        s = float(spec.get("spacing", 1.0))
        xy = np.array([(c * s, r * s) for r in range(rows) for c in range(cols)], dtype=float)
    elif kind == "two-point":
        xy = np.array([[0.0, 0.0], [float(spec.get("distance", 1.0)), 0.0]])
    else:
        raise ConfigError(f"unknown cup generator {kind!r}")
    if len(xy) == 0:
        raise ConfigError("empty point set")
    target = spec.get("diameter")
    if target is not None and len(xy) > 1:
        d = diameter(xy)
        centre = (xy.min(axis=0) + xy.max(axis=0)) / 2
        xy = centre + (xy - centre) * (float(target) / d)
        xy = xy - xy.min(axis=0)
    try:
        return PointSet(xy)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class Scenario:
    cups: dict = field(default_factory=lambda: {"kind": "uniform", "n": 10, "side": 1.0, "seed": 0})
    adversary: AdversarySpec = field(default_factory=AdversarySpec)
    strategy: str = "coroutine"
    horizon: float = 1000.0
    delta_adv: float | None = None  # default D/10
    start: object = "center"
    sample_interval: float | None = None  # default D
    seed: int = 0
    record_pours: bool = True
    id: str = "scenario"

    def __post_init__(self):
        if isinstance(self.adversary, (dict, str)):
            self.adversary = AdversarySpec.from_dict(self.adversary)
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if not self.horizon > 0:
            raise ConfigError("horizon must be positive")
        if self.delta_adv is not None and not self.delta_adv > 0:
            raise ConfigError("delta_adv must be positive")
        if self.sample_interval is not None and not self.sample_interval > 0:
            raise ConfigError("sample_interval must be positive")
        if isinstance(self.cups, list):
            self.cups = {"kind": "explicit", "points": self.cups}

    def build_cups(self) -> PointSet:
        return generate_cups(self.cups)

    def sample_interval_for(self, D: float) -> float:
        return self.sample_interval if self.sample_interval is not None else D

    def with_seed(self, seed: int) -> "Scenario":
        """Copy using ``seed`` for the adversary and any random cup generator."""
        d = self.to_dict()
        d["seed"] = seed
        d["adversary"]["seed"] = seed
        if "seed" in d["cups"]:
            d["cups"]["seed"] = seed
        return Scenario.from_dict(d)

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown scenario keys: {sorted(extra)}")
        try:
            return cls(**d)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "Scenario":
        try:
            with open(path) as f:
                return cls.from_dict(json.load(f))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read scenario {path}: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "cups": json.loads(json.dumps(self.cups)),
            "adversary": self.adversary.to_dict(),
            "strategy": self.strategy,
            "horizon": self.horizon,
            "delta_adv": self.delta_adv,
            "start": list(self.start) if not isinstance(self.start, str) else self.start,
            "sample_interval": self.sample_interval,
            "seed": self.seed,
            "record_pours": self.record_pours,
            "id": self.id,
        }
