"""Simulator for the planar cup-emptying game and its bounded-backlog player."""

from ._backend import DEFAULT as DEFAULT_BACKEND, HAVE_COMPILED
from .adversaries import AdversarySpec
from .engine import GameTrace, World, replay, run_game
from .few_tour import Path, Tour, closed_tour, few_bound, few_path
from .geometry import Point, PointSet, Square, bounding_square, diameter
from .scenario import Scenario
from .strategies import CoroutineStrategy, backlog_bound, decompose_time, make_strategy
from .tauk_game import equalizer_final_level, harmonic_level_bound, run_tauk

__version__ = "0.1.0"

__all__ = [
    "AdversarySpec", "CoroutineStrategy", "DEFAULT_BACKEND", "GameTrace", "HAVE_COMPILED", "Path",
    "Point", "PointSet", "Scenario", "Square", "Tour", "World", "backlog_bound", "bounding_square",
    "closed_tour", "decompose_time", "diameter", "equalizer_final_level", "few_bound", "few_path",
    "harmonic_level_bound", "make_strategy", "replay", "run_game", "run_tauk",
]
