"""Short paths and closed tours through point sets in a square.

The path is built with the strip method: cut the square into horizontal (or
vertical) strips, sweep the points of each nonempty strip by coordinate in
alternating direction, and chain the strips bottom to top.  Two strip
families are tried, the second shifted by half a strip height, for a few
strip counts around ``sqrt(n/2)``; the shortest candidate is returned.  The
better of the two shifted families is always within ``sqrt(2n) + 1.75``
times the side of the square.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point, PointSet, Square


def few_bound(n: int, side: float = 1.0) -> float:
    """Length bound ``(sqrt(2n) + 1.75) * side`` for a path through n points."""
    return (math.sqrt(2 * n) + 1.75) * side


def level_tour_bound(i: int, D: float) -> float:
    """Closed tour bound ``5**(i+1) * D`` for ``25**i`` points."""
    return 5 ** (i + 1) * D


@dataclass(frozen=True)
class Path:
    """Polyline through a point set.

    ``waypoints`` is an ``(m, 2)`` array; ``ids[j]`` is the id of the input
    point sitting at waypoint ``j`` (``-1`` for points that are not cups).
    """

    waypoints: np.ndarray
    ids: np.ndarray
    length: float

    @property
    def points(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self.waypoints]

    def __len__(self) -> int:
        return len(self.waypoints)


@dataclass(frozen=True)
class Tour(Path):
    """Closed path: the first waypoint equals the last one."""

    @property
    def start(self) -> Point:
        return Point(float(self.waypoints[0, 0]), float(self.waypoints[0, 1]))


def polyline_length(xy: np.ndarray) -> float:
    if len(xy) < 2:
        return 0.0
    d = np.diff(xy, axis=0)
    return float(np.hypot(d[:, 0], d[:, 1]).sum())


def _strip_order(u: np.ndarray, v: np.ndarray, m: int, shifted: bool) -> np.ndarray:
    # u is the sweep coordinate, v the strip coordinate, both in [0, 1].
    if shifted:
        # boundaries at (j - 1/2)/m; half strips at the bottom and top
        s = np.ceil(v * m - 0.5)
        s = np.clip(s, 0, m).astype(np.int64)
    else:
        # a point on a boundary belongs to the lower strip
        s = np.ceil(v * m) - 1
        s = np.clip(s, 0, m - 1).astype(np.int64)
    occupied = np.unique(s)
    rank = np.searchsorted(occupied, s)
    sweep = np.where(rank % 2 == 0, u, -u)
    vkey = np.where(rank % 2 == 0, v, -v)
    return np.lexsort((np.arange(len(u)), vkey, sweep, s))


def _strip_counts(n: int) -> range:
    c = math.sqrt(n / 2)
    lo = max(1, math.floor(c) - 1)
    return range(lo, math.ceil(c) + 2)


def _best_order(xy: np.ndarray, sq: Square) -> np.ndarray:
    """Visiting order of ``xy`` (shortest strip candidate, ties to the first)."""
    n = len(xy)
    if n <= 3:
        pts = xy.tolist()
        best, best_len = None, math.inf
        for perm in itertools.permutations(range(n)):
            length = sum(math.dist(pts[a], pts[b]) for a, b in zip(perm, perm[1:]))
            if length < best_len:
                best, best_len = perm, length
        return np.array(best, dtype=np.int64)
    side = sq.side
    unit = (xy - np.array(sq.origin)) / side
    unit = np.clip(unit, 0.0, 1.0)
    best, best_len = None, math.inf
    for m in _strip_counts(n):
        for shifted in (False, True):
            for axis in (0, 1):
                u, v = unit[:, axis], unit[:, 1 - axis]
                order = _strip_order(u, v, m, shifted)
                length = polyline_length(xy[order])
                if length < best_len:
                    best, best_len = order, length
    return best


def _check_inside(xy: np.ndarray, sq: Square) -> None:
    if not sq.contains_all(xy):
        raise ValueError("point outside square")


def _path_from(xy: np.ndarray, ids: np.ndarray, sq: Square) -> Path:
    _check_inside(xy, sq)
    order = _best_order(xy, sq)
    wp = xy[order]
    return Path(wp, ids[order], polyline_length(wp))


def few_path(ps: PointSet, sq: Square) -> Path:
    """Path through every point of ``ps`` of length at most ``few_bound(n, sq.side)``."""
    xy = ps.xy if isinstance(ps, PointSet) else np.asarray(ps, dtype=float).reshape(-1, 2)
    return _path_from(xy, np.arange(len(xy)), sq)


def closed_tour(p, qs, sq: Square, ids=None) -> Tour:
    """Closed tour from ``p`` through every point of ``qs`` and back to ``p``.

    Built as a strip path over ``qs`` plus ``p``, closed by the segment
    joining the path's two ends and rotated to start at ``p``.  ``ids`` gives
    the labels of the ``qs`` points in the result (default ``0..len(qs)-1``);
    ``p`` is labelled ``-1`` unless it coincides with a point of ``qs``.
    """
    qxy = qs.xy if isinstance(qs, PointSet) else np.asarray(qs, dtype=float).reshape(-1, 2)
    ids = np.arange(len(qxy)) if ids is None else np.asarray(ids, dtype=np.int64)
    p = np.asarray(tuple(p), dtype=float)
    if not sq.contains(p):
        raise ValueError("point outside square")
    same = np.flatnonzero(np.all(qxy == p, axis=1)) if len(qxy) else np.array([], dtype=int)
    if len(same):
        xy, lab = qxy, ids
        start = int(same[0])
    else:
        xy = np.vstack([qxy, p[None, :]])
        lab = np.append(ids, -1)
        start = len(qxy)
    path = _path_from(xy, lab, sq)
    if len(xy) == 1:
        wp = np.vstack([path.waypoints, path.waypoints])
        return Tour(wp, np.repeat(path.ids, 2), 0.0)
    k = int(np.flatnonzero(path.ids == lab[start])[0])
    cyc = np.roll(path.waypoints, -k, axis=0)
    cyc_ids = np.roll(path.ids, -k)
    wp = np.vstack([cyc, cyc[:1]])
    tid = np.append(cyc_ids, cyc_ids[0])
    return Tour(wp, tid, polyline_length(wp))
