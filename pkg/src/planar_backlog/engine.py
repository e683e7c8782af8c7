"""Continuous-time minimum backlog game.

The adversary pours at piecewise-constant rates (total at most 1), revised
at control epochs every ``delta_adv`` time units and after every emptying.
The player walks polylines at unit speed; a cup is emptied when the player
reaches a waypoint placed on it.  Mid-segment pass-overs do not empty cups.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import adversaries as adv
from ._backend import DEFAULT as DEFAULT_BACKEND, get_core
from .adversaries import AdversarySpec
from .geometry import Point, PointSet, Square, bounding_square, diameter, max_sq_distance_pair
from .ledger import LedgerReplay

RATE_TOL = 1e-9
ANCHOR_TOL = 1e-9
INF = math.inf


class ScheduleError(RuntimeError):
    """A strategy broke a guarantee that must hold by construction."""


# -- trace ------------------------------------------------------------------

class GameTrace:
    """Time-ordered event log of one game.

    Events are ``(t, kind, payload)`` with kinds ``start``, ``pour``,
    ``move``, ``empty``, ``invoke``, ``resume``, ``return``, ``sample`` and
    ``end``.  A ``pour`` event sets the rates in force from ``t`` on; a
    ``move`` event is stamped with the time the segment ends.
    """

    def __init__(self, events=None):
        self.events: list[tuple[float, str, dict]] = list(events or [])
        self.violations: list[str] = []
        self.stats: dict = {}

    def add(self, t: float, kind: str, **payload) -> None:
        self.events.append((float(t), kind, payload))

    def of_kind(self, kind: str):
        return [e for e in self.events if e[1] == kind]

    @property
    def meta(self) -> dict:
        for t, kind, p in self.events:
            if kind == "start":
                return p
        return {}

    @property
    def end(self) -> dict:
        for t, kind, p in reversed(self.events):
            if kind == "end":
                return p
        return {}

    @property
    def samples(self) -> list[tuple[float, float]]:
        return [(t, p["max_backlog"]) for t, kind, p in self.events if kind == "sample"]

    def max_backlog(self, after: float = 0.0) -> float:
        """Largest level held by any cup at any time ``>= after``.

        Levels only grow between emptyings, so this is the max over emptied
        levels after ``after`` and the final levels.
        """
        best = 0.0
        for t, kind, p in self.events:
            if kind == "empty" and t >= after:
                best = max(best, p["level"])
        best = max([best] + list(self.end.get("levels", [])))
        return best

    # serialization: one JSON object per line; repr-based floats round-trip exactly
    def dumps(self) -> str:
        lines = [json.dumps({"t": t, "kind": k, "payload": p}, separators=(",", ":"))
                 for t, k, p in self.events]
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "GameTrace":
        events = []
        for line in text.splitlines():
            if line.strip():
                rec = json.loads(line)
                events.append((rec["t"], rec["kind"], rec["payload"]))
        return cls(events)

    @classmethod
    def read(cls, path) -> "GameTrace":
        with open(path) as f:
            return cls.loads(f.read())


# -- world ------------------------------------------------------------------

def window_water(p_lo, t_lo, p_hi, t_hi, last_emptied, poured_at_empty):
    """Per-cup water poured in ``[t_lo, t_hi]`` that is still in the cups.

    ``p_lo``/``p_hi`` are the cumulative amounts poured into each cup up to
    the window ends.  A cup emptied at ``le >= t_hi`` holds none of it; one
    emptied inside the window holds only what came after ``le``.
    """
    le = np.asarray(last_emptied)
    lower = np.where(le > t_lo, poured_at_empty, p_lo)
    w = np.where(le >= t_hi, 0.0, np.asarray(p_hi) - lower)
    return np.maximum(w, 0.0)


class World:
    """State of one game: cups, player, clock and the water bookkeeping.

    Without an adversary the world is in manual mode and rates come from
    :meth:`set_rates` / :meth:`pour`.
    """

    def __init__(self, cups: PointSet, start=None, adversary: AdversarySpec | None = None,
                 delta_adv: float | None = None, record_pours: bool = True,
                 backend: str | None = None):
        if not isinstance(cups, PointSet):
            cups = PointSet(cups)
        self.cups = cups
        self.n = len(cups)
        self.D = diameter(cups)
        self.square: Square = bounding_square(cups)
        if start is None or start == "center":
            start = self.square.center
        start = Point(float(start[0]), float(start[1]))
        if not self.square.contains(start):
            raise ValueError("start position outside the bounding square")
        a, b, _ = max_sq_distance_pair(cups.xy)
        self.diameter_pair = (a, b)
        self.adversary = adversary
        code = adversary.code if adversary is not None else adv.MANUAL
        seed = adversary.seed if adversary is not None else 0
        if delta_adv is None:
            delta_adv = self.D / 10 if self.D > 0 else 1.0
        if not delta_adv > 0:
            raise ValueError("delta_adv must be positive")
        self.delta_adv = float(delta_adv)
        self.backend = backend or DEFAULT_BACKEND
        self.core = get_core(self.backend)(
            cups.xy[:, 0], cups.xy[:, 1], start.x, start.y, code, a, b,
            seed, self.delta_adv, record_pours)
        self.record_pours = record_pours
        self._index = {(float(x), float(y)): i for i, (x, y) in enumerate(cups.xy)}
        self._checkpoints: dict[float, np.ndarray] = {0.0: np.zeros(self.n)}
        self.trace = GameTrace()
        self.trace.add(0.0, "start", cups=cups.xy.tolist(), start=list(start), D=self.D,
                       adversary=adversary.to_dict() if adversary else None,
                       delta_adv=self.delta_adv, backend=self.backend)
        self._drain()

    # -- views used by adversaries and strategies --
    @property
    def clock(self) -> float:
        return self.core.clock

    @property
    def player_pos(self) -> Point:
        return Point(self.core.px, self.core.py)

    @property
    def cup_x(self):
        return self.cups.xy[:, 0]

    @property
    def cup_y(self):
        return self.cups.xy[:, 1]

    @property
    def next_adversary_epoch(self) -> float:
        return self.core.next_epoch_time

    def levels(self) -> np.ndarray:
        return np.asarray(self.core.levels())

    def level(self, cup: int) -> float:
        self._check_cup(cup)
        return float(self.core.level(cup))

    def max_level(self) -> float:
        return float(np.max(self.levels()))

    def cumulative(self) -> np.ndarray:
        """Total poured into each cup since time 0."""
        return np.asarray(self.core.cumulative())

    def last_emptied(self) -> np.ndarray:
        return np.asarray(self.core.last_emptied())

    def poured_at_empty(self) -> np.ndarray:
        return np.asarray(self.core.poured_at_empty())

    def _check_cup(self, cup: int) -> None:
        if not 0 <= cup < self.n:
            raise KeyError(f"unknown cup {cup}")

    def _drain(self) -> None:
        for t, idx, val in self.core.drain_pours():
            self.trace.add(t, "pour", cups=list(idx), rates=[float(v) for v in val])

    # -- manual pouring --
    def _as_rates(self, allocation) -> np.ndarray:
        rates = np.zeros(self.n)
        items = allocation.items() if isinstance(allocation, dict) else enumerate(allocation)
        for cup, r in items:
            cup = int(cup)
            self._check_cup(cup)
            if r < 0:
                raise ValueError("negative pour rate")
            rates[cup] = float(r)
        if rates.sum() > 1 + RATE_TOL:
            raise ValueError("rate budget exceeded")
        return rates

    def set_rates(self, allocation) -> None:
        """Set the pour rates in force from now on (manual mode only)."""
        if self.adversary is not None:
            raise RuntimeError("rates are controlled by the adversary")
        self.core.set_rates(self._as_rates(allocation))
        self._drain()

    def pour(self, allocation, duration: float) -> "World":
        """Pour at ``allocation`` rates for ``duration`` with the player standing still.

        The previous rates are restored afterwards.
        """
        if not duration > 0:
            raise ValueError("duration must be positive")
        rates = self._as_rates(allocation)
        previous = self.core.rates()
        self.core.set_rates(rates)
        self._drain()
        self.idle_until(self.clock + duration)
        self.core.set_rates(previous)
        self._drain()
        return self

    # -- motion --
    def idle_until(self, t: float) -> None:
        self.core.idle_until(t)
        self._drain()

    def move_to(self, target, t_stop: float = INF) -> bool:
        """Walk straight toward ``target``; stop early at ``t_stop``. True on arrival."""
        src = (self.core.px, self.core.py)
        arrived = self.core.move_to(float(target[0]), float(target[1]), t_stop)
        self._drain()
        if (self.core.px, self.core.py) != src:
            self.trace.add(self.clock, "move", frm=list(src), to=[self.core.px, self.core.py])
        return arrived

    def empty(self, cup: int) -> float:
        self._check_cup(cup)
        lvl = float(self.core.empty(cup))
        self.trace.add(self.clock, "empty", cup=int(cup), level=lvl)
        self._drain()
        return lvl

    def visit(self, point, cup_id: int = -1) -> None:
        """Empty whatever cup sits at waypoint ``point`` (known id or exact match)."""
        if cup_id is not None and cup_id >= 0:
            self.empty(int(cup_id))
            return
        cup = self._index.get((float(point[0]), float(point[1])))
        if cup is not None:
            self.empty(cup)

    def advance(self, plan, t_stop: float = INF) -> int:
        """Walk ``plan`` (a Path or Tour) from its first waypoint.

        Returns the index of the next unreached waypoint, ``len(plan)`` when
        the whole plan was walked before ``t_stop``.
        """
        wp = np.asarray(plan.waypoints, dtype=float)
        ids = getattr(plan, "ids", None)
        if len(wp) == 0:
            return 0
        if math.hypot(wp[0, 0] - self.core.px, wp[0, 1] - self.core.py) > ANCHOR_TOL * max(1.0, self.D):
            raise ValueError("plan not anchored at the current position")
        self.visit(wp[0], int(ids[0]) if ids is not None else -1)
        for j in range(1, len(wp)):
            if not self.move_to(wp[j], t_stop):
                return j
            self.visit(wp[j], int(ids[j]) if ids is not None else -1)
        return len(wp)

    # -- water-age queries --
    def checkpoint(self) -> None:
        """Remember cumulative pours at the current time for later window queries."""
        self._checkpoints[self.clock] = self.cumulative()

    def cumulative_at(self, t: float) -> np.ndarray:
        if t == self.clock:
            return self.cumulative()
        if t in self._checkpoints:
            return self._checkpoints[t]
        if not self.record_pours or t > self.clock:
            raise ValueError(f"no record of cumulative pours at t={t}")
        total = np.zeros(self.n)
        pours = self.trace.of_kind("pour")
        for j, (t0, _, p) in enumerate(pours):
            t1 = pours[j + 1][0] if j + 1 < len(pours) else INF
            span = min(t, t1) - t0
            if span > 0:
                total[p["cups"]] += np.asarray(p["rates"]) * span
        return total

    def _window(self, t1: float, t2: float) -> np.ndarray:
        if not 0 <= t1 <= t2 <= self.clock:
            raise ValueError("need 0 <= t1 <= t2 <= now")
        return window_water(self.cumulative_at(t1), t1, self.cumulative_at(t2), t2,
                            self.last_emptied(), self.poured_at_empty())

    def water_in_window(self, cup: int, t1: float, t2: float) -> float:
        """Water poured into ``cup`` during ``[t1, t2]`` still there now."""
        self._check_cup(cup)
        return float(self._window(t1, t2)[cup])

    def max_water_window(self, t1: float, t2: float) -> float:
        return float(self._window(t1, t2).max())


# -- replay -----------------------------------------------------------------

@dataclass
class ReplayReport:
    max_level_error: float = 0.0
    max_final_error: float = 0.0
    poured: float = 0.0
    emptied: float = 0.0
    in_cups: float = 0.0
    errors: list = field(default_factory=list)

    @property
    def conservation_error(self) -> float:
        return abs(self.poured - self.emptied - self.in_cups)


def replay(trace: GameTrace, tol: float = 1e-9) -> ReplayReport:
    """Rebuild water levels from ``pour``/``empty`` events with a deposit ledger."""
    meta = trace.meta
    if not meta:
        raise ValueError("trace has no start record")
    n = len(meta["cups"])
    rep = LedgerReplay(n)
    report = ReplayReport()
    for t, kind, p in trace.events:
        if kind == "pour":
            rep.set_rates(t, dict(zip(p["cups"], p["rates"])))
        elif kind == "empty":
            lvl = rep.empty(p["cup"], t)
            err = abs(lvl - p["level"])
            report.max_level_error = max(report.max_level_error, err)
            if err > tol:
                report.errors.append(f"level mismatch for cup {p['cup']} at t={t}: {lvl} vs {p['level']}")
        elif kind == "end":
            rep.advance(t)
            final = rep.ledger.levels()
            for c, (a, b) in enumerate(zip(final, p.get("levels", final))):
                err = abs(a - b)
                report.max_final_error = max(report.max_final_error, err)
                if err > tol:
                    report.errors.append(f"final level mismatch for cup {c}: {a} vs {b}")
    report.poured = rep.ledger.poured
    report.emptied = rep.ledger.emptied
    report.in_cups = sum(rep.ledger.levels())
    return report


# -- orchestration ----------------------------------------------------------

def run_game(scenario, backend: str | None = None, probe=None) -> GameTrace:
    """Play ``scenario`` to its horizon and return the trace.

    Stops are taken at coroutine invocation epochs, sample times and the
    horizon; between stops the core handles adversary epochs.  Tie order at
    one instant: adversary epoch, coroutine invocations, waypoint arrival.
    ``probe(world)``, if given, is called at every sample time.
    """
    from .strategies import make_strategy

    cups = scenario.build_cups()
    world = World(cups, start=scenario.start, adversary=scenario.adversary,
                  delta_adv=scenario.delta_adv, record_pours=scenario.record_pours,
                  backend=backend)
    trace = world.trace
    horizon = float(scenario.horizon)
    bound = 120.0 * world.D
    trace.stats.update(scenario_id=scenario.id, n=world.n, D=world.D,
                       adversary=scenario.adversary.kind, strategy=scenario.strategy,
                       horizon=horizon, bound_120D=bound)

    if world.D == 0:
        # the player stands on the only cup and keeps it empty
        trace.add(horizon, "end", levels=[0.0], max_backlog=0.0)
        trace.stats.update(max_backlog=0.0, feasible=True)
        return trace

    strategy = make_strategy(scenario.strategy)
    strategy.bind(world, horizon)
    dt_sample = scenario.sample_interval_for(world.D)
    k_sample = 1

    while True:
        t_epoch = strategy.next_epoch()
        t_sample = k_sample * dt_sample
        t_stop = min(horizon, t_epoch, t_sample)
        if world.clock < t_stop:
            strategy.act(world, t_stop)
        if world.clock == t_epoch:
            strategy.on_epoch(world)
        if world.clock == t_sample:
            lvl = world.max_level()
            trace.add(world.clock, "sample", max_backlog=lvl)
            if lvl > bound:
                trace.violations.append(f"sampled backlog {lvl} > 120D at t={world.clock}")
            strategy.on_sample(world)
            if probe is not None:
                probe(world)
            k_sample += 1
        if world.clock >= horizon:
            break

    strategy.finish(world)
    levels = world.levels()
    exact = max(float(world.core.max_backlog), float(levels.max()))
    trace.add(world.clock, "end", levels=[float(v) for v in levels], max_backlog=exact)
    if exact > bound:
        trace.violations.append(f"max backlog {exact} > 120D = {bound}")
    trace.violations.extend(strategy.violations)
    trace.stats.update(max_backlog=exact, consultations=int(world.core.consultations),
                       total_emptied=float(world.core.total_emptied),
                       feasible=strategy.feasible)
    trace.stats.update(strategy.stats())
    return trace
