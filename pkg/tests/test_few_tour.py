import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planar_backlog.few_tour import closed_tour, level_tour_bound, few_bound, few_path, polyline_length
from planar_backlog.geometry import PointSet, Square

UNIT = Square((0, 0), 1.0)


def test_single_point_path_is_empty():
    p = few_path(PointSet([(0.3, 0.3)]), UNIT)
    assert p.length == 0.0 and len(p) == 1


def test_two_points_path_is_their_distance():
    p = few_path(PointSet([(0, 0), (1, 1)]), UNIT)
    assert p.length == pytest.approx(math.sqrt(2))


def test_point_outside_square_rejected():
    with pytest.raises(ValueError, match="point outside square"):
        few_path(PointSet([(2, 2)]), UNIT)


def test_bound_values():
    assert few_bound(2) == pytest.approx(3.75)
    assert level_tour_bound(0, 1.0) == 5 and level_tour_bound(2, 0.5) == 62.5


def test_grid_path_visits_each_point_once():
    xy = np.array([(i / 9, j / 9) for i in range(10) for j in range(10)])
    p = few_path(xy, UNIT)
    assert sorted(p.ids.tolist()) == list(range(100))
    assert p.length <= few_bound(100)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 300), st.integers(0, 2 ** 32 - 1))
def test_random_path_within_bound(n, seed):
    xy = np.random.default_rng(seed).random((n, 2))
    p = few_path(xy, UNIT)
    assert sorted(p.ids.tolist()) == list(range(n))
    assert p.length == pytest.approx(polyline_length(p.waypoints))
    assert p.length <= few_bound(n)


def test_adversarial_layouts_within_bound():
    # points on strip boundaries and clustered columns
    for n in (4, 8, 50, 200):
        m = max(1, round(math.sqrt(n / 2)))
        xy = np.array([((i % 7) / 6, ((i // 7) % (m + 1)) / m) for i in range(n)])
        xy = np.unique(xy, axis=0)
        assert few_path(xy, UNIT).length <= few_bound(len(xy))


def test_tiny_sets_are_optimal():
    xy = np.array([(0, 0), (1, 0), (0.5, 0.0)])
    p = few_path(xy, UNIT)
    assert p.length == pytest.approx(1.0)


def test_closed_tour_starts_and_ends_at_p():
    qs = np.random.default_rng(3).random((25, 2))
    t = closed_tour((0.5, 0.5), qs, UNIT)
    assert tuple(t.waypoints[0]) == (0.5, 0.5) == tuple(t.waypoints[-1])
    assert t.ids[0] == -1
    assert sorted(i for i in t.ids.tolist() if i >= 0) == list(range(25))
    assert t.length <= level_tour_bound(1, 1.0)


def test_closed_tour_when_p_is_a_cup():
    qs = np.array([(0, 0), (1, 1)])
    t = closed_tour((0, 0), qs, UNIT, ids=[7, 9])
    assert t.ids.tolist() == [7, 9, 7]
    assert t.length == pytest.approx(2 * math.sqrt(2))


def test_closed_tour_single_point():
    t = closed_tour((0.2, 0.2), np.zeros((0, 2)), UNIT)
    assert t.length == 0.0 and len(t) == 2


@pytest.mark.parametrize("i", [0, 1, 2])
def test_level_tours_within_budget(i):
    rng = np.random.default_rng(i)
    for _ in range(10):
        t = closed_tour(rng.random(2), rng.random((25 ** i, 2)), UNIT)
        assert t.length <= level_tour_bound(i, 1.0)


def test_brute_force_matches_permutations():
    rng = np.random.default_rng(5)
    for _ in range(20):
        xy = rng.random((3, 2))
        best = min(polyline_length(xy[list(p)]) for p in itertools.permutations(range(3)))
        assert few_path(xy, UNIT).length == pytest.approx(best)
