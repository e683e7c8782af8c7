import math

import numpy as np
import pytest

from planar_backlog.adversaries import AdversarySpec
from planar_backlog.engine import GameTrace, World, replay, run_game, window_water
from planar_backlog.geometry import PointSet
from planar_backlog.ledger import CupLedger, LedgerReplay
from planar_backlog.scenario import Scenario

TWO = PointSet([(0, 0), (1, 0)])


def test_manual_pour_and_empty():
    w = World(TWO, start=(0, 0))
    w.pour({0: 0.5, 1: 0.5}, 2.0)
    assert w.levels().tolist() == [1.0, 1.0]
    assert w.empty(1) == 1.0
    assert w.level(1) == 0.0


def test_rate_budget_enforced():
    w = World(TWO)
    with pytest.raises(ValueError, match="rate budget exceeded"):
        w.set_rates({0: 0.7, 1: 0.7})
    with pytest.raises(KeyError):
        w.set_rates({5: 0.1})
    with pytest.raises(ValueError):
        w.set_rates({0: -0.1})


def test_adversary_world_rejects_manual_rates():
    w = World(TWO, adversary=AdversarySpec("uniform"))
    with pytest.raises(RuntimeError):
        w.set_rates({0: 1.0})


def test_move_takes_distance_time_and_stops_early():
    w = World(TWO, start=(0, 0))
    assert not w.move_to((1, 0), 0.25)
    assert w.clock == 0.25 and w.player_pos.x == pytest.approx(0.25)
    assert w.move_to((1, 0))
    assert w.clock == pytest.approx(1.0)


def test_advance_requires_anchor():
    from planar_backlog.few_tour import closed_tour
    w = World(TWO, start=(0, 0))
    t = closed_tour((0.5, 0.5), TWO, w.square)
    with pytest.raises(ValueError, match="not anchored"):
        w.advance(t)
    w2 = World(TWO, start=(0.5, 0.5))
    w2.set_rates({0: 0.5, 1: 0.5})
    assert w2.advance(t) == len(t)
    assert w2.clock == pytest.approx(t.length)


def test_window_water_cases():
    # cup emptied before, inside, and after the window
    p_lo, p_hi = np.array([1.0, 1.0, 1.0]), np.array([3.0, 3.0, 3.0])
    le = np.array([0.5, 1.5, 2.5])
    ple = np.array([0.5, 2.0, 3.5])
    w = window_water(p_lo, 1.0, p_hi, 2.0, le, ple)
    assert w.tolist() == [2.0, 1.0, 0.0]


def test_world_window_matches_ledger():
    w = World(TWO, start=(0, 0))
    w.set_rates({0: 0.25, 1: 0.75})
    w.idle_until(2.0)
    w.set_rates({0: 1.0})
    w.idle_until(3.0)
    w.move_to((1, 0))
    w.empty(1)
    w.idle_until(5.0)
    led = LedgerReplay(2)
    led.set_rates(0.0, {0: 0.25, 1: 0.75})
    led.set_rates(2.0, {0: 1.0})
    led.empty(1, 4.0)
    led.advance(5.0)
    for t1, t2 in [(0, 1), (0.5, 3.5), (1, 5), (3.9, 4.5), (0, 5)]:
        for c in (0, 1):
            assert w.water_in_window(c, t1, t2) == pytest.approx(led.ledger.water_in_window(c, t1, t2), abs=1e-12)


def test_ledger_rules():
    led = CupLedger(1)
    led.pour(0, 0, 1, 1.0)
    led.pour(0, 1, 2, 1.0)
    assert len(led.deposits[0]) == 1  # merged
    with pytest.raises(ValueError):
        led.pour(0, 1.5, 3, 1.0)
    assert led.empty(0, 2.0) == 2.0
    assert led.level(0) == 0.0 and led.emptied == 2.0
    with pytest.raises(KeyError):
        led.level(3)


def test_trace_round_trips_exactly(tmp_path):
    sc = Scenario(cups={"kind": "uniform", "n": 6, "seed": 1}, adversary={"kind": "random", "seed": 2},
                  horizon=60.0)
    tr = run_game(sc)
    path = tmp_path / "t.jsonl"
    tr.write(path)
    back = GameTrace.read(path)
    assert back.events == tr.events
    assert back.dumps() == tr.dumps()


@pytest.mark.parametrize("kind", ["diameter-endpoints", "farthest-from-player", "fullest-cup", "uniform", "random"])
@pytest.mark.parametrize("strategy", ["coroutine", "greedy", "static-loop"])
def test_replay_conserves_water(kind, strategy):
    sc = Scenario(cups={"kind": "uniform", "n": 7, "seed": 3, "diameter": 1.0},
                  adversary={"kind": kind, "seed": 5}, strategy=strategy, horizon=120.0, delta_adv=0.07)
    tr = run_game(sc)
    rep = replay(tr)
    assert not rep.errors
    assert rep.conservation_error < 1e-9
    assert rep.poured == pytest.approx(120.0, rel=1e-9)  # total rate 1 throughout


def test_single_cup_game_is_trivial():
    sc = Scenario(cups=[(0.3, 0.3)], adversary="uniform", horizon=10.0)
    tr = run_game(sc)
    assert tr.stats["max_backlog"] == 0.0


def test_runs_are_deterministic():
    sc = Scenario(cups={"kind": "uniform", "n": 9, "seed": 4}, adversary={"kind": "random", "seed": 1},
                  horizon=200.0)
    assert run_game(sc).dumps() == run_game(sc).dumps()


def test_max_backlog_from_trace_matches_stats():
    sc = Scenario(cups={"kind": "uniform", "n": 5, "seed": 8}, adversary="fullest-cup", horizon=150.0)
    tr = run_game(sc)
    assert tr.max_backlog() == pytest.approx(tr.stats["max_backlog"], abs=1e-12)
    assert math.isfinite(tr.stats["max_backlog"])
