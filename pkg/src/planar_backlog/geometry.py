"""Planar primitives: points, point sets, diameter and the bounding square."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

# Side used for the square around a single point (diameter 0).
SIDE_FLOOR = 1e-9


class Point(NamedTuple):
    x: float
    y: float

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


class PointSet:
    """Nonempty ordered set of pairwise distinct planar points.

    Point ``i`` has id ``i``. Coordinates are kept as an ``(n, 2)`` float array
    in :attr:`xy`; the array is read-only.
    """

    def __init__(self, points: Iterable, check: bool = True):
        xy = np.array([tuple(p) for p in points], dtype=float).reshape(-1, 2)
        if check:
            if len(xy) == 0:
                raise ValueError("empty point set")
            if not np.all(np.isfinite(xy)):
                raise ValueError("point coordinates must be finite")
            if len(np.unique(xy, axis=0)) != len(xy):
                raise ValueError("points must be pairwise distinct")
        xy.setflags(write=False)
        self.xy = xy

    @classmethod
    def from_array(cls, xy: np.ndarray) -> "PointSet":
        return cls(np.asarray(xy, dtype=float))

    def __len__(self) -> int:
        return len(self.xy)

    def __getitem__(self, i: int) -> Point:
        return Point(float(self.xy[i, 0]), float(self.xy[i, 1]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)})"

    @property
    def ids(self) -> range:
        return range(len(self))


@dataclass(frozen=True)
class Square:
    """Axis-aligned square given by its lower-left corner and side."""

    origin: Point
    side: float

    def __post_init__(self):
        if not self.side >= 0:
            raise ValueError("square side must be nonnegative")
        if not isinstance(self.origin, Point):
            object.__setattr__(self, "origin", Point(float(self.origin[0]), float(self.origin[1])))

    @property
    def center(self) -> Point:
        h = self.side / 2
        return Point(self.origin.x + h, self.origin.y + h)

    def contains(self, p, tol: float = 1e-9) -> bool:
        """Closed containment, with an absolute slack of ``tol * max(side, 1)``."""
        slack = tol * max(self.side, 1.0)
        x, y = p
        return (
            self.origin.x - slack <= x <= self.origin.x + self.side + slack
            and self.origin.y - slack <= y <= self.origin.y + self.side + slack
        )

    def contains_all(self, xy: np.ndarray, tol: float = 1e-9) -> bool:
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        slack = tol * max(self.side, 1.0)
        lo = np.array(self.origin) - slack
        hi = np.array(self.origin) + self.side + slack
        return bool(np.all((xy >= lo) & (xy <= hi)))


def _as_xy(ps) -> np.ndarray:
    if isinstance(ps, PointSet):
        return ps.xy
    xy = np.asarray([tuple(p) for p in ps], dtype=float).reshape(-1, 2)
    return xy


def max_sq_distance_pair(xy: np.ndarray) -> tuple[int, int, float]:
    """Lexicographically smallest pair ``(a, b)``, ``a < b``, of maximum distance.

    Returns ``(a, b, squared_distance)``; a singleton gives ``(0, 0, 0.0)``.
    Brute force, one row at a time.
    """
    n = len(xy)
    best, pair = -1.0, (0, 0)
    if n == 1:
        return 0, 0, 0.0
    for a in range(n - 1):
        d = xy[a + 1:] - xy[a]
        sq = d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]
        j = int(np.argmax(sq))
        if sq[j] > best:
            best, pair = float(sq[j]), (a, a + 1 + j)
    return pair[0], pair[1], best


def diameter(ps) -> float:
    """Maximum pairwise Euclidean distance; 0 for a singleton."""
    xy = _as_xy(ps)
    if len(xy) == 0:
        raise ValueError("empty point set")
    return math.sqrt(max_sq_distance_pair(xy)[2])


def bounding_square(ps) -> Square:
    """D x D square centred on the bounding box of ``ps``.

    Any axis extent of a set is at most its diameter, so padding the bounding
    box symmetrically to side D always contains the set.
    """
    xy = _as_xy(ps)
    if len(xy) == 0:
        raise ValueError("empty point set")
    side = max(diameter(xy), SIDE_FLOOR)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    cx, cy = (lo + hi) / 2
    ox, oy = cx - side / 2, cy - side / 2
    # guard the closed containment against rounding in the centre arithmetic
    ox = min(ox, float(lo[0]))
    oy = min(oy, float(lo[1]))
    ox = max(ox, float(hi[0]) - side)
    oy = max(oy, float(hi[1]) - side)
    return Square(Point(float(ox), float(oy)), float(side))
