import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from planar_backlog.geometry import (Point, PointSet, Square, bounding_square, diameter,
                                     max_sq_distance_pair)

coords = st.floats(-100, 100, allow_nan=False)


def test_singleton_diameter_zero():
    assert diameter(PointSet([(0, 0)])) == 0.0


def test_diameter_examples():
    assert diameter(PointSet([(0, 0), (3, 4)])) == 5.0
    assert diameter(PointSet([(0, 0), (1, 0), (0, 1), (1, 1)])) == pytest.approx(math.sqrt(2))


def test_empty_errors():
    with pytest.raises(ValueError, match="empty point set"):
        diameter(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        PointSet([])


def test_pointset_rejects_duplicates_and_nan():
    with pytest.raises(ValueError):
        PointSet([(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        PointSet([(0, float("nan"))])


def test_pointset_is_read_only():
    ps = PointSet([(0, 0), (1, 2)])
    with pytest.raises(ValueError):
        ps.xy[0, 0] = 5
    assert ps[1] == Point(1.0, 2.0)
    assert list(ps.ids) == [0, 1]


def test_diameter_pair_smallest_ids_on_square():
    xy = np.array([(0, 0), (1, 0), (0, 1), (1, 1)], dtype=float)
    a, b, sq = max_sq_distance_pair(xy)
    assert (a, b) == (0, 3) and sq == 2.0


def test_square_accepts_tuple_origin():
    sq = Square((0, 0), 2.0)
    assert sq.center == Point(1.0, 1.0)
    assert sq.contains((2.0, 0.0)) and not sq.contains((2.1, 0.0))
    with pytest.raises(ValueError):
        Square((0, 0), -1)


@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=40, unique=True))
def test_bounding_square_contains_everything(pts):
    ps = PointSet(pts)
    sq = bounding_square(ps)
    assert sq.contains_all(ps.xy)
    D = diameter(ps)
    assert sq.side >= D - 1e-12
    brute = max(math.dist(p, q) for p in pts for q in pts)
    assert D == pytest.approx(brute, abs=1e-9)
