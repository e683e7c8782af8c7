"""Acceptance criteria at their stated scale; each prints one PASS/FAIL line."""

import pytest

from planar_backlog import verify
from planar_backlog._backend import HAVE_COMPILED


@pytest.fixture
def report(capsys):
    def emit(res):
        with capsys.disabled():
            print(f"\n[acceptance] {res.line()} ({res.seconds:.1f}s)")
        assert res.passed, res.detail
    return emit


@pytest.fixture(scope="module")
def schedule_runs():
    return verify.schedule_runs(deltas=(0.1, 0.01), workers=verify.default_workers())


def test_01_tauk_bound_every_round(report):
    report(verify.check_tauk_bound(r_max=50, random_seeds=100))


def test_02_equalizer_matches_closed_form(report):
    report(verify.check_tauk_tightness(r_max=50))


def test_03_strip_path_length(report):
    report(verify.check_few_path(instances=1000, n_max=500))


def test_04_closed_tour_length(report):
    report(verify.check_closed_tours(instances=100, levels=(0, 1, 2)))


def test_05_schedule_feasible(report, schedule_runs):
    report(verify.check_schedule(schedule_runs))


def test_06_leftover_water_bound(report, schedule_runs):
    report(verify.check_leftover(schedule_runs))


@pytest.mark.slow
@pytest.mark.skipif(not HAVE_COMPILED, reason="grid of 40 long runs needs the compiled core")
def test_07_backlog_at_most_120D(report):
    report(verify.check_main_bound(ns=(2, 10, 50, 200), deltas=(0.1, 0.01), horizon=1e5,
                                   workers=verify.default_workers()))


def test_08_greedy_two_cups_backlog_near_D(report):
    report(verify.check_lower_bound(burn_in=20.0))


def test_09_window_water_properties(report):
    report(verify.check_water_calculus(traces=100, workers=verify.default_workers()))


def test_10_time_digits_and_constant(report):
    report(verify.check_time_decomposition(t_max=10 ** 6))
