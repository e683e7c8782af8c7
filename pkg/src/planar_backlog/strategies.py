"""Player strategies: the multi-level coroutine schedule and two baselines.

Coroutine ``i`` wakes at every positive multiple of ``tau_i = 10**i * 10 D``,
picks the ``k_i = 25**i`` cups holding the most water poured since the last
multiple of ``10 tau_i``, and walks a closed tour through them of length at
most ``tau_i / 2**(i+1) = 5**(i+1) D``.  A lower-numbered coroutine preempts
higher-numbered ones; since every tour returns to where it started,
suspended tours resume unaffected.

The coroutine strategy also checks the analysis while it runs: schedule
feasibility, the per-invocation bound ``H_l tau_i/k_i < 3 tau_i/k_i`` on
leftover water, and the period decomposition behind the ``120 D`` bound.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .engine import INF, ScheduleError, window_water
from .few_tour import Tour, closed_tour
from .tauk_game import harmonic

TOL = 1e-9


# -- schedule arithmetic ----------------------------------------------------

@dataclass(frozen=True)
class ScheduleParams:
    D: float
    n_max: int

    def k(self, i: int) -> int:
        return 25 ** i

    def tau(self, i: int) -> float:
        return 10 ** i * 10 * self.D

    def tour_budget(self, i: int) -> float:
        """Longest tour coroutine ``i`` may walk: ``tau_i / 2**(i+1)``."""
        return self.tau(i) / 2 ** (i + 1)

    @property
    def levels(self) -> range:
        return range(self.n_max + 1)

    @classmethod
    def for_horizon(cls, D: float, horizon: float) -> "ScheduleParams":
        """Levels up to the first one whose period exceeds the horizon."""
        i = 0
        while 10 ** i * 10 * D <= horizon:
            i += 1
        return cls(D, i)


def invocation_epochs(i: int, horizon: float, params: ScheduleParams) -> list[tuple[float, int, int]]:
    """Times ``(10L + l) tau_i <= horizon`` with their ``(L, l)``, ``l`` in 1..10."""
    tau = params.tau(i)
    out = []
    j = 1
    while j * tau <= horizon:
        out.append((j * tau, (j - 1) // 10, (j - 1) % 10 + 1))
        j += 1
    return out


def period_busy_budget(i: int, params: ScheduleParams) -> float:
    """Walking time of coroutines ``0..i`` within one period of length ``tau_i``."""
    return math.fsum(params.tau(i) / 2 ** (h + 1) for h in range(i + 1))


def backlog_bound(D: float) -> float:
    """``60 D sum_i (2/5)^i + 20 D = 120 D``."""
    if D < 0:
        raise ValueError("D must be nonnegative")
    geometric = Fraction(1) / (1 - Fraction(2, 5))
    return float(60 * geometric + 20) * D


@dataclass(frozen=True)
class TimeDecomposition:
    T: int
    digits: tuple[int, ...]  # l_0 .. l_N, each in 1..10
    partial: tuple[int, ...]  # L_0 .. L_N
    epsilon: float = 0.0

    @property
    def N(self) -> int:
        return len(self.digits) - 1

    def shifted(self, i: int) -> int:
        """``L_i' = 10 L_i + l_i - 1``: the short period ``i`` in units of ``10 tau_{i-1}``."""
        return 10 * self.partial[i] + self.digits[i] - 1


def decompose_time(T: int, epsilon: float = 0.0) -> TimeDecomposition:
    """Write ``T = l_0 + 10 l_1 + ... + 10**N l_N`` with every digit in 1..10."""
    if T < 1:
        raise ValueError("T must be a positive integer")
    digits = []
    rest = T
    while rest > 0:
        d = (rest - 1) % 10 + 1
        digits.append(d)
        rest = (rest - d) // 10
    # L_i = sum_{j > i} 10**(j-i-1) l_j, accumulated from the top digit down
    partial = [0] * len(digits)
    for i in range(len(digits) - 2, -1, -1):
        partial[i] = 10 * partial[i + 1] + digits[i + 1]
    return TimeDecomposition(T, tuple(digits), tuple(partial), epsilon)


# -- strategy base ----------------------------------------------------------

class Strategy:
    name = "idle"
    feasible: bool | None = None

    def __init__(self):
        self.violations: list[str] = []

    def bind(self, world, horizon: float) -> None:
        self.horizon = horizon

    def next_epoch(self) -> float:
        return INF

    def on_epoch(self, world) -> None:
        pass

    def act(self, world, t_stop: float) -> None:
        world.idle_until(t_stop)

    def on_sample(self, world) -> None:
        pass

    def finish(self, world) -> None:
        pass

    def stats(self) -> dict:
        return {}


# -- coroutine strategy -----------------------------------------------------

@dataclass
class CoroutineFrame:
    level: int
    L: int
    ell: int
    tour: Tour
    anchor: tuple[float, float]
    t_invoke: float
    next: int = 1  # index of the next waypoint to reach
    t_return: float | None = None

    def __post_init__(self):
        if not 1 <= self.ell <= 10:
            raise ValueError("ell out of range")

    @property
    def done(self) -> bool:
        return self.next >= len(self.tour)


@dataclass
class LeftoverRecord:
    level: int
    L: int
    ell: int
    t_check: float
    leftover: float  # max per-cup (i, L, l)-water left at (10L + l + 1) tau_i
    harmonic_bound: float  # H_l tau_i / k_i
    bound: float  # 3 tau_i / k_i


@dataclass
class DecompositionRecord:
    t: float
    backlog: float
    terms: list = field(default_factory=list)  # (label, value, bound)

    @property
    def term_sum(self) -> float:
        return math.fsum(v for _, v, _ in self.terms)

    @property
    def bound_sum(self) -> float:
        return math.fsum(b for _, _, b in self.terms)


class CoroutineStrategy(Strategy):
    name = "coroutine"

    def __init__(self, keep_decompositions: bool = False):
        super().__init__()
        self.keep_decompositions = keep_decompositions

    def bind(self, world, horizon):
        super().bind(world, horizon)
        self.world = world
        self.params = ScheduleParams.for_horizon(world.D, horizon)
        self.tau0 = self.params.tau(0)
        self.m = 1  # next epoch at m * tau0
        self.snap = {0: np.zeros(world.n)}  # cumulative pours at grid index
        self.stack: list[CoroutineFrame] = []
        self.frames: list[CoroutineFrame] = []
        self.busy = defaultdict(lambda: [0.0] * (self.params.n_max + 1))
        self.due = defaultdict(list)  # grid index -> frames whose leftover is checked then
        self.leftovers: list[LeftoverRecord] = []
        self.decompositions: list[DecompositionRecord] = []
        self.max_decomposition_ratio = 0.0
        self.n_decompositions = 0
        self.feasible = True
        self.bound = backlog_bound(world.D)

    def next_epoch(self):
        return self.m * self.tau0

    def grid_time(self, g: int) -> float:
        return g * self.tau0

    # movement
    def act(self, world, t_stop):
        if not self.stack:
            world.idle_until(t_stop)
            return
        fr = self.stack[-1]
        x, y = fr.tour.waypoints[fr.next]
        t0 = world.clock
        arrived = world.move_to((x, y), t_stop)
        self.busy[self.m - 1][fr.level] += world.clock - t0
        if not arrived or world.clock == self.next_epoch():
            # an invocation due now goes before the arrival
            return
        world.visit((x, y), int(fr.tour.ids[fr.next]))
        fr.next += 1
        if fr.done:
            self.stack.pop()
            fr.t_return = world.clock
            world.trace.add(world.clock, "return", level=fr.level, L=fr.L, ell=fr.ell)
            if fr.t_return >= fr.t_invoke + self.params.tau(fr.level):
                self._fail(f"level {fr.level} invocation at t={fr.t_invoke} returned late at {fr.t_return}")
            if self.stack:
                top = self.stack[-1]
                world.trace.add(world.clock, "resume", level=top.level, L=top.L, ell=top.ell)

    def _fail(self, msg):
        self.feasible = False
        self.violations.append(msg)

    # invocations
    def select_cups(self, world, i: int, L: int) -> np.ndarray:
        """Ids of the ``k_i`` cups with the most water poured since ``10 L tau_i``."""
        g_lo = 10 * L * 10 ** i
        w = window_water(self.snap[g_lo], self.grid_time(g_lo), world.cumulative(), world.clock,
                         world.last_emptied(), world.poured_at_empty())
        k = min(self.params.k(i), world.n)
        return np.argsort(-w, kind="stable")[:k]

    def plan_coroutine(self, world, i: int, L: int, ell: int) -> CoroutineFrame:
        sel = self.select_cups(world, i, L)
        p = world.player_pos
        tour = closed_tour(p, world.cups.xy[sel], world.square, ids=sel)
        budget = self.params.tour_budget(i)
        if tour.length > budget * (1 + 1e-12):
            raise ScheduleError(f"tour of length {tour.length} exceeds budget {budget} at level {i}")
        return CoroutineFrame(i, L, ell, tour, (p.x, p.y), world.clock)

    def on_epoch(self, world):
        m = self.m
        self.snap[m] = world.cumulative()
        for fr in self.due.pop(m, []):
            self._check_leftover(world, fr)
        if world.clock < self.horizon:
            new = []
            for i in self.params.levels:
                if m % 10 ** i:
                    break
                j = m // 10 ** i
                L, ell = (j - 1) // 10, (j - 1) % 10 + 1
                if any(f.level == i for f in self.stack):
                    self._fail(f"level {i} still running at its next invocation t={world.clock}")
                    raise ScheduleError(f"duplicate level {i} on the frame stack")
                fr = self.plan_coroutine(world, i, L, ell)
                new.append(fr)
                self.due[m + 10 ** i].append(fr)
                world.trace.add(world.clock, "invoke", level=i, L=L, ell=ell,
                                cups=[int(c) for c in fr.tour.ids if c >= 0],
                                tour_length=fr.tour.length)
            # lowest level on top of the stack
            for fr in reversed(new):
                self.stack.append(fr)
            self.frames.extend(new)
        self.m += 1

    def _check_leftover(self, world, fr: CoroutineFrame):
        i, L, ell = fr.level, fr.L, fr.ell
        g_lo = 10 * L * 10 ** i
        g_hi = (10 * L + ell) * 10 ** i
        w = window_water(self.snap[g_lo], self.grid_time(g_lo), self.snap[g_hi], self.grid_time(g_hi),
                         world.last_emptied(), world.poured_at_empty())
        k, tau = self.params.k(i), self.params.tau(i)
        rec = LeftoverRecord(i, L, ell, world.clock, float(w.max()), harmonic(ell) * tau / k, 3 * tau / k)
        self.leftovers.append(rec)
        if fr.t_return is None:
            self._fail(f"level {i} invocation (L={L}, l={ell}) unfinished at its check time")
        if not rec.leftover < rec.bound:
            self.violations.append(
                f"leftover ({i},{L},{ell})-water {rec.leftover} >= 3 tau_i/k_i = {rec.bound}")

    # analysis at sample times
    def decompose(self, world) -> DecompositionRecord:
        """Split the current backlog into period terms, each with its bound."""
        t = world.clock
        cur, le, ple = world.cumulative(), world.last_emptied(), world.poured_at_empty()
        rec = DecompositionRecord(t, float((cur - ple).max()))
        T = min(int(t // self.tau0), self.m - 1)
        eps = t - self.grid_time(T)
        labels, bounds, lo, hi = [], [], [], []
        if T >= 1:
            dec = decompose_time(T, eps)
            P = self.params
            for i, (ell, L) in enumerate(zip(dec.digits, dec.partial)):
                s = 10 ** i
                a, b, c = 10 * L * s, (10 * L + ell - 1) * s, (10 * L + ell) * s
                short_bound = 3 * P.tau(i - 1) / P.k(i - 1) if i > 0 else P.tau(0)
                labels += [f"long{i}", f"short{i}"]
                bounds += [3 * P.tau(i) / P.k(i), short_bound]
                lo += [a, b]
                hi += [b, c]
        values = []
        if lo:
            # all grid windows at once: rows are windows, columns cups
            g_lo, g_hi = np.array(lo), np.array(hi)
            p_lo = np.stack([self.snap[g] for g in lo])
            p_hi = np.stack([self.snap[g] for g in hi])
            t_lo = (g_lo * self.tau0)[:, None]
            t_hi = (g_hi * self.tau0)[:, None]
            lower = np.where(le > t_lo, ple, p_lo)
            w = np.where(le >= t_hi, 0.0, p_hi - lower)
            w[g_lo == g_hi] = 0.0
            values = np.maximum(w, 0.0).max(axis=1).tolist()
        rem = window_water(self.snap[T], self.grid_time(T), cur, t, le, ple)
        rec.terms = list(zip(labels, values, bounds)) + [("remainder", float(rem.max()), eps)]
        return rec

    def on_sample(self, world):
        rec = self.decompose(world)
        self.n_decompositions += 1
        if self.keep_decompositions:
            self.decompositions.append(rec)
        bound = self.bound
        self.max_decomposition_ratio = max(self.max_decomposition_ratio, rec.backlog / bound)
        for label, value, b in rec.terms:
            strict = label.startswith("long") or (label.startswith("short") and label != "short0")
            if (value >= b) if strict else (value > b + TOL):
                self.violations.append(f"t={rec.t}: {label} term {value} exceeds {b}")
        if rec.backlog > rec.term_sum + TOL:
            self.violations.append(f"t={rec.t}: backlog {rec.backlog} above its decomposition {rec.term_sum}")
        if rec.bound_sum > bound + TOL:
            self.violations.append(f"t={rec.t}: term bounds sum {rec.bound_sum} > 120D")

    # end of run
    def busy_by_period(self, i: int) -> list[tuple[int, float]]:
        """Walking time of levels ``<= i`` per complete period ``[j tau_i, (j+1) tau_i]``."""
        s = 10 ** i
        n_periods = int(self.horizon // self.params.tau(i))
        out = []
        for j in range(n_periods):
            total = math.fsum(sum(self.busy[g][: i + 1]) for g in range(j * s, (j + 1) * s) if g in self.busy)
            out.append((j, total))
        return out

    def finish(self, world):
        for i in self.params.levels:
            budget = period_busy_budget(i, self.params)
            for j, busy in self.busy_by_period(i):
                if busy > budget + TOL:
                    self._fail(f"levels <= {i} busy {busy} > {budget} in period {j}")
        for fr in self.frames:
            if fr.t_return is None and fr.t_invoke + self.params.tau(fr.level) <= self.horizon:
                self._fail(f"level {fr.level} invocation at t={fr.t_invoke} never returned")

    def stats(self):
        per_level = defaultdict(int)
        for fr in self.frames:
            per_level[fr.level] += 1
        worst = max((r.leftover / r.bound for r in self.leftovers), default=0.0)
        worst_h = max((r.leftover / r.harmonic_bound for r in self.leftovers), default=0.0)
        return {
            "invocations": dict(sorted(per_level.items())),
            "leftover_checks": len(self.leftovers),
            "leftover_max_ratio": worst,
            "leftover_max_harmonic_ratio": worst_h,
            "decomposition_checks": self.n_decompositions,
            "decomposition_max_ratio": self.max_decomposition_ratio,
        }


# -- baselines --------------------------------------------------------------

class GreedyStrategy(Strategy):
    """Head straight for the fullest cup (ties by id); re-plan after each emptying.

    The cup under the player is never a target, so every leg has positive
    length.
    """

    name = "greedy"

    def bind(self, world, horizon):
        super().bind(world, horizon)
        self.target = None

    def _pick(self, world) -> int:
        levels = world.levels()
        here = world._index.get((world.player_pos.x, world.player_pos.y))
        if here is not None:
            levels[here] = -INF
        return int(np.argmax(levels))

    def act(self, world, t_stop):
        if self.target is None:
            self.target = self._pick(world)
        c = self.target
        if world.move_to(world.cups.xy[c], t_stop):
            world.visit(world.cups.xy[c], c)
            self.target = None


class StaticLoopStrategy(Strategy):
    """Walk one fixed closed tour through every cup, forever."""

    name = "static-loop"

    def bind(self, world, horizon):
        super().bind(world, horizon)
        ids = np.arange(world.n)
        self.tour = closed_tour(world.player_pos, world.cups.xy, world.square, ids=ids)
        self.next = 1

    def act(self, world, t_stop):
        x, y = self.tour.waypoints[self.next]
        if world.move_to((x, y), t_stop):
            world.visit((x, y), int(self.tour.ids[self.next]))
            self.next += 1
            if self.next == len(self.tour):
                self.next = 1


def make_strategy(name: str, **kwargs) -> Strategy:
    classes = {"coroutine": CoroutineStrategy, "greedy": GreedyStrategy,
               "static-loop": StaticLoopStrategy}
    try:
        return classes[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}") from None
