"""The compiled and pure-Python cores must agree bit for bit."""

import numpy as np
import pytest

from planar_backlog import _backend
from planar_backlog.adversaries import KINDS
from planar_backlog.engine import run_game
from planar_backlog.scenario import Scenario

needs_compiled = pytest.mark.skipif(not _backend.HAVE_COMPILED, reason="compiled core not built")


def test_python_core_always_available():
    assert "python" in _backend.BACKENDS
    assert _backend.get_core("python") is _backend.BACKENDS["python"]
    with pytest.raises(ValueError):
        _backend.get_core("fortran")


def drive(Core, kind):
    rng = np.random.default_rng(9)
    xy = rng.random((25, 2))
    core = Core(xy[:, 0], xy[:, 1], 0.5, 0.5, kind, 0, 1, 42, 0.03, True)
    log = []
    for step in range(200):
        target = xy[rng.integers(25)]
        t_stop = core.clock + rng.uniform(0.05, 0.8)
        arrived = core.move_to(float(target[0]), float(target[1]), t_stop)
        if arrived:
            log.append(core.empty(int(rng.integers(25))))
        log.append((core.clock, core.px, core.py))
    return log, list(core.levels()), list(core.cumulative()), core.max_backlog, core.drain_pours()


@needs_compiled
@pytest.mark.parametrize("kind", sorted(KINDS.values()))
def test_kernels_bit_identical(kind):
    a = drive(_backend.BACKENDS["python"], kind)
    b = drive(_backend.BACKENDS["compiled"], kind)
    assert a[0] == b[0]
    assert a[1] == b[1] and a[2] == b[2] and a[3] == b[3]
    assert [(t, list(i), list(r)) for t, i, r in a[4]] == [(t, list(i), list(r)) for t, i, r in b[4]]


@needs_compiled
@pytest.mark.parametrize("strategy", ["coroutine", "greedy"])
def test_games_identical_across_backends(strategy):
    sc = Scenario(cups={"kind": "uniform", "n": 12, "seed": 4, "diameter": 1.0},
                  adversary={"kind": "random", "seed": 6}, strategy=strategy, horizon=300.0, delta_adv=0.05)
    ta = run_game(sc, backend="python")
    tb = run_game(sc, backend="compiled")
    strip = lambda tr: [e for e in tr.events if e[1] != "start"]
    assert strip(ta) == strip(tb)
    assert ta.stats["max_backlog"] == tb.stats["max_backlog"]
