import numpy as np
import pytest
from hypothesis import given, strategies as st

from planar_backlog import strategies
from planar_backlog.engine import ScheduleError, World, run_game
from planar_backlog.geometry import PointSet
from planar_backlog.scenario import Scenario
from planar_backlog.strategies import (CoroutineStrategy, ScheduleParams, backlog_bound, decompose_time,
                                       invocation_epochs, make_strategy, period_busy_budget)


def test_parameter_identities():
    p = ScheduleParams(1.7, 6)
    for i in p.levels:
        assert p.tour_budget(i) == pytest.approx(5 ** (i + 1) * 1.7, rel=1e-12)
        if i:
            assert p.tau(i) == pytest.approx(10 * p.tau(i - 1), rel=1e-12)
        assert p.k(i) == 25 ** i


def test_levels_for_horizon():
    assert ScheduleParams.for_horizon(1.0, 3000.0).n_max == 3
    assert ScheduleParams.for_horizon(1.0, 5.0).n_max == 0


def test_invocation_epochs_labels():
    ep = invocation_epochs(0, 120.0, ScheduleParams(1.0, 2))
    assert ep[0] == (10.0, 0, 1)
    assert ep[9] == (100.0, 0, 10)
    assert ep[10] == (110.0, 1, 1)


def test_busy_budget_below_period():
    p = ScheduleParams(1.0, 5)
    for i in p.levels:
        assert period_busy_budget(i, p) == pytest.approx(p.tau(i) * (1 - 2.0 ** -(i + 1)))
        assert period_busy_budget(i, p) < p.tau(i)


def test_backlog_bound_is_120D():
    assert backlog_bound(1) == 120.0
    assert backlog_bound(2.5) == 300.0
    with pytest.raises(ValueError):
        backlog_bound(-1)


@pytest.mark.parametrize("T,digits", [(1, (1,)), (10, (10,)), (11, (1, 1)), (100, (10, 9)), (1234567, (7, 6, 5, 4, 3, 2, 1))])
def test_decompose_examples(T, digits):
    assert decompose_time(T).digits == digits


@given(st.integers(1, 10 ** 12))
def test_decompose_round_trip(T):
    d = decompose_time(T)
    assert sum(x * 10 ** i for i, x in enumerate(d.digits)) == T
    assert all(1 <= x <= 10 for x in d.digits)
    for i in range(len(d.digits)):
        # L_i counts whole blocks of 10**(i+1) below the i-th digit
        assert d.partial[i] * 10 ** (i + 1) + sum(x * 10 ** j for j, x in enumerate(d.digits[: i + 1])) == T


def test_decompose_rejects_zero():
    with pytest.raises(ValueError):
        decompose_time(0)


def run(kind="random", n=20, horizon=1500.0, strategy="coroutine", **kw):
    sc = Scenario(cups={"kind": "uniform", "n": n, "seed": 11, "diameter": 1.0},
                  adversary={"kind": kind, "seed": 3}, strategy=strategy, horizon=horizon, **kw)
    return run_game(sc)


@pytest.mark.parametrize("kind", ["diameter-endpoints", "farthest-from-player", "fullest-cup", "uniform", "random"])
def test_coroutine_runs_clean(kind):
    tr = run(kind)
    assert tr.violations == []
    st_ = tr.stats
    assert st_["feasible"] is True
    assert st_["max_backlog"] <= 120.0
    assert st_["leftover_checks"] > 0 and st_["leftover_max_ratio"] < 1
    assert st_["decomposition_checks"] > 0
    # nothing is invoked at the horizon itself
    assert st_["invocations"][0] == 149 and st_["invocations"][1] == 14


def test_frame_stack_levels_ordered():
    tr = run("farthest-from-player", horizon=1200.0)
    stack = []
    for t, kind, p in tr.events:
        if kind == "invoke":
            stack.append(p["level"])
            # frames pushed at one instant are all resolved lowest level first
        elif kind == "return":
            assert stack and min(stack) == p["level"]
            stack.remove(p["level"])
    assert stack == []


def test_invocations_return_before_next_of_same_level():
    tr = run("fullest-cup", horizon=1200.0)
    open_at = {}
    for t, kind, p in tr.events:
        if kind == "invoke":
            assert p["level"] not in open_at
            open_at[p["level"]] = t
        elif kind == "return":
            t0 = open_at.pop(p["level"])
            assert t - t0 < 10 ** p["level"] * 10.0


def test_selection_covers_all_cups_when_few():
    tr = run("uniform", n=3, horizon=200.0)
    inv = [p for _, k, p in tr.events if k == "invoke" and p["level"] == 1]
    assert inv and all(sorted(p["cups"]) == [0, 1, 2] for p in inv)


def test_decomposition_terms_bound_backlog(monkeypatch):
    sc = Scenario(cups={"kind": "uniform", "n": 30, "seed": 2, "diameter": 1.0},
                  adversary={"kind": "random", "seed": 1}, horizon=1300.0, sample_interval=3.7)
    strat = CoroutineStrategy(keep_decompositions=True)
    monkeypatch.setattr(strategies, "make_strategy", lambda name: strat)
    tr = run_game(sc)
    assert tr.violations == []
    recs = strat.decompositions
    assert len(recs) == int(1300 / 3.7)
    for rec in recs:
        assert rec.backlog <= rec.term_sum + 1e-9
        assert rec.bound_sum <= 120.0 + 1e-9


def test_schedule_error_when_tour_too_long():
    strat = CoroutineStrategy()
    w = World(PointSet(np.random.default_rng(0).random((40, 2))))
    strat.bind(w, 100.0)
    strat.params = ScheduleParams(1e-3, 2)  # budgets far below any real tour
    with pytest.raises(ScheduleError):
        strat.plan_coroutine(w, 1, 0, 1)


def test_greedy_lower_bound_two_cups():
    sc = Scenario(cups={"kind": "two-point", "distance": 1.0}, adversary="diameter-endpoints",
                  strategy="greedy", horizon=100.0)
    tr = run_game(sc)
    assert 0.9 <= tr.max_backlog(after=20.0) <= 1.1
    assert tr.stats["feasible"] is None


def test_static_loop_keeps_looping():
    tr = run("uniform", n=6, horizon=100.0, strategy="static-loop")
    assert len(tr.of_kind("empty")) > 20


def test_unknown_strategy():
    with pytest.raises(ValueError):
        make_strategy("teleport")
