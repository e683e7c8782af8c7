"""Acceptance checks, runnable as a suite from the CLI or from tests.

Every check returns a :class:`CheckResult`.  The ``full`` suite runs each
check at its stated scale; ``quick`` shrinks the sweeps for smoke testing.
Independent game runs can be farmed out to worker processes.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .adversaries import KINDS
from .engine import replay, run_game
from .few_tour import closed_tour, level_tour_bound, few_bound, few_path
from .geometry import Square
from .ledger import LedgerReplay
from .scenario import Scenario
from .strategies import ScheduleParams, backlog_bound, decompose_time, period_busy_budget
from .tauk_game import equalizer_final_level, make_adversary, run_tauk

TOL = 1e-9
ADVERSARY_KINDS = tuple(KINDS)
UNIT = Square((0.0, 0.0), 1.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _map(fn, items, workers):
    if workers and workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# -- the abstract game --------------------------------------------------------

TAUK_TAUS = (0.5, 1.0, 10.0)
TAUK_KS = (1, 2, 5, 25)


@_timed
def check_tauk_bound(r_max: int = 50, random_seeds: int = 100) -> CheckResult:
    """Max level after every round j stays within ``H_j tau / k``."""
    runs = bad = 0
    worst = 0.0
    first = ""
    for tau, k in itertools.product(TAUK_TAUS, TAUK_KS):
        games = [(r, make_adversary("equalizing")) for r in range(1, r_max + 1)]
        games += [(r_max, make_adversary("single-cup")), (r_max, make_adversary("spread"))]
        games += [(r_max, make_adversary("random", seed)) for seed in range(random_seeds)]
        for r, adversary in games:
            tr = run_tauk(r, tau, k, adversary)
            runs += 1
            for rec in tr.rounds:
                worst = max(worst, rec.max_level * k / (tau * sum(1 / i for i in range(1, rec.round + 1))))
            v = tr.bound_violations(TOL)
            if v:
                bad += 1
                first = first or f"tau={tau} k={k} r={r} round {v[0]}"
    detail = f"{runs} games, worst level/bound {worst:.6f}"
    if bad:
        detail += f", {bad} violating (first: {first})"
    return CheckResult("tauk-bound", bad == 0, detail)


@_timed
def check_tauk_tightness(r_max: int = 50) -> CheckResult:
    """Equalizing adversary ends at ``tau * sum_j 1/(jk+1)``."""
    worst = 0.0
    for tau, k in itertools.product(TAUK_TAUS, TAUK_KS):
        for r in range(1, r_max + 1):
            got = run_tauk(r, tau, k, make_adversary("equalizing")).final_max()
            worst = max(worst, abs(got - equalizer_final_level(r, tau, k)))
    r21 = run_tauk(2, 1.0, 1, make_adversary("equalizing")).final_max()
    ok = worst <= TOL and abs(r21 - 5 / 6) <= TOL
    return CheckResult("tauk-tightness", ok,
                       f"max |final - oracle| = {worst:.3e}; r=2,k=1,tau=1 gives {r21:.12f}")


# -- tours --------------------------------------------------------------------

@_timed
def check_few_path(instances: int = 1000, n_max: int = 500, seed: int = 0) -> CheckResult:
    """Strip path length is at most ``sqrt(2n) + 1.75`` in the unit square."""
    rng = np.random.default_rng(seed)
    bad, worst = 0, 0.0
    for _ in range(instances):
        n = int(rng.integers(1, n_max + 1))
        xy = rng.random((n, 2))
        length = few_path(xy, UNIT).length
        bound = few_bound(n)
        worst = max(worst, length / bound)
        bad += length > bound
    return CheckResult("few-path", bad == 0, f"{instances} instances, worst length/bound {worst:.4f}, {bad} violations")


@_timed
def check_closed_tours(instances: int = 100, levels=(0, 1, 2), seed: int = 1) -> CheckResult:
    """Closed tour from a random start through ``25**i`` points is at most ``5**(i+1)``."""
    rng = np.random.default_rng(seed)
    bad, parts = 0, []
    for i in levels:
        worst = 0.0
        for _ in range(instances):
            qs = rng.random((25 ** i, 2))
            p = rng.random(2)
            t = closed_tour(p, qs, UNIT)
            worst = max(worst, t.length / level_tour_bound(i, 1.0))
            bad += t.length > level_tour_bound(i, 1.0)
        parts.append(f"i={i}: worst {worst:.4f}")
    return CheckResult("closed-tour", bad == 0, f"{'; '.join(parts)}; {bad} violations")


# -- coroutine runs -------------------------------------------------------------

SMALL_NS = (2, 10, 50, 200)


def _scenario(n: int, kind: str, delta: float, horizon: float, sample: float | None = None,
              record: bool = False, strategy: str = "coroutine") -> Scenario:
    return Scenario(
        cups={"kind": "uniform", "n": n, "side": 1.0, "seed": 1000 + n, "diameter": 1.0},
        adversary={"kind": kind, "seed": 7},
        strategy=strategy, horizon=horizon, delta_adv=delta, sample_interval=sample,
        record_pours=record, id=f"{strategy}-n{n}-{kind}-d{delta}-h{horizon:g}",
    )


def _run_summary(sc: Scenario) -> dict:
    tr = run_game(sc)
    st = tr.stats
    strat_viol = [v for v in tr.violations if "120D" not in v]
    return {
        "id": sc.id,
        "max_backlog": st["max_backlog"],
        "bound": st["bound_120D"],
        "feasible": st.get("feasible"),
        "violations": list(tr.violations),
        "schedule_violations": [v for v in strat_viol if "leftover" not in v and "term" not in v
                                and "decomposition" not in v],
        "leftover_violations": [v for v in strat_viol if "leftover" in v],
        "leftover_checks": st.get("leftover_checks", 0),
        "leftover_max_ratio": st.get("leftover_max_ratio", 0.0),
        "invocations": st.get("invocations", {}),
    }


def schedule_runs(ns=SMALL_NS, kinds=ADVERSARY_KINDS, deltas=(0.1,), horizon: float = 3000.0,
                  workers: int | None = None) -> list[dict]:
    scs = [_scenario(n, k, d, horizon) for n, k, d in itertools.product(ns, kinds, deltas)]
    return _map(_run_summary, scs, workers)


@_timed
def check_schedule(runs: list[dict]) -> CheckResult:
    """Every invocation returns in time and per-period busy time fits its budget."""
    bad = [r for r in runs if not r["feasible"] or r["schedule_violations"]]
    inv = sum(sum(r["invocations"].values()) for r in runs)
    detail = f"{len(runs)} runs, {inv} invocations, busy budgets {[round(period_busy_budget(i, ScheduleParams(1.0, 2)), 3) for i in range(3)]}"
    if bad:
        detail += f"; infeasible: {bad[0]['id']}: {(bad[0]['schedule_violations'] or ['?'])[0]}"
    return CheckResult("schedule-feasibility", not bad, detail)


@_timed
def check_leftover(runs: list[dict]) -> CheckResult:
    """Leftover age-class water at each check time is below ``3 tau_i / k_i``."""
    bad = [r for r in runs if r["leftover_violations"]]
    checks = sum(r["leftover_checks"] for r in runs)
    worst = max((r["leftover_max_ratio"] for r in runs), default=0.0)
    ok = not bad and checks > 0
    detail = f"{checks} invocation checks, worst leftover/(3 tau/k) {worst:.4f}"
    if bad:
        detail += f"; {bad[0]['id']}: {bad[0]['leftover_violations'][0]}"
    return CheckResult("leftover-bound", ok, detail)


@_timed
def check_main_bound(ns=SMALL_NS, kinds=ADVERSARY_KINDS, deltas=(0.1, 0.01), horizon: float = 1e5,
                     sample: float = 2.5, workers: int | None = None) -> CheckResult:
    """Backlog stays at most ``120 D`` on every run of the grid."""
    scs = [_scenario(n, k, d, horizon, sample) for n, k, d in itertools.product(ns, kinds, deltas)]
    runs = _map(_run_summary, scs, workers)
    bad = [r for r in runs if r["max_backlog"] > r["bound"] or r["violations"]]
    worst = max(runs, key=lambda r: r["max_backlog"] / r["bound"])
    detail = (f"{len(runs)} runs, worst backlog {worst['max_backlog']:.4f} D "
              f"({worst['id']}) vs bound {worst['bound']:.0f} D")
    if bad:
        detail += f"; failing: {bad[0]['id']}: {(bad[0]['violations'] or ['over bound'])[0]}"
    return CheckResult("main-bound", not bad, detail)


@_timed
def check_lower_bound(burn_in: float = 20.0, horizon: float = 200.0) -> CheckResult:
    """Greedy on two cups under the diameter adversary settles at backlog about D."""
    sc = Scenario(cups={"kind": "two-point", "distance": 1.0}, adversary={"kind": "diameter-endpoints"},
                  strategy="greedy", horizon=horizon, id="lower-bound")
    tr = run_game(sc)
    b = tr.max_backlog(after=burn_in)
    ok = 0.9 <= b <= 1.1
    return CheckResult("lower-bound", ok, f"steady-state backlog {b:.6f} D (target [0.9, 1.1])")


# -- water-age calculus -----------------------------------------------------------

def _water_trace(seed: int) -> dict:
    """Play a small random game, probing window water at each sample.

    The same windows are then recomputed from a deposit ledger replay of the
    trace; returns the worst property and cross-check errors.
    """
    rng = random.Random(seed)
    horizon = rng.uniform(40.0, 120.0)
    n = rng.randint(2, 12)
    sc = Scenario(
        cups={"kind": "uniform", "n": n, "seed": seed, "diameter": 1.0},
        adversary={"kind": rng.choice(ADVERSARY_KINDS), "seed": seed},
        strategy=rng.choice(("coroutine", "greedy", "static-loop")),
        horizon=horizon, delta_adv=rng.choice((0.03, 0.1, 0.25)),
        sample_interval=rng.uniform(1.3, 4.1), record_pours=True, id=f"water-{seed}",
    )
    cuts = sorted(rng.uniform(0, horizon) for _ in range(8))
    windows = [(a, b) for a, b in itertools.combinations(cuts, 2)]
    triples = list(itertools.combinations(cuts[::2], 3))

    fast: dict = {}

    def probe(world):
        t = world.clock
        fast[t] = {w: world.max_water_window(*w) for w in windows if w[1] <= t}
        fast[t]["full"] = world.max_water_window(0.0, t)
        fast[t]["level"] = world.max_level()

    tr = run_game(sc, probe=probe)
    rep = LedgerReplay(n)
    slow: dict = {}
    for t, kind, p in tr.events:
        if kind == "pour":
            rep.set_rates(t, dict(zip(p["cups"], p["rates"])))
        elif kind == "empty":
            rep.empty(p["cup"], t)
        elif kind == "sample":
            rep.advance(t)
            led = rep.ledger
            row = {w: led.max_water_window(*w) for w in windows if w[1] <= t}
            row["full"] = led.max_water_window(0.0, t)
            row["level"] = max(led.levels())
            for a, b, c in triples:
                if c <= t:
                    # subadditive split of a window at an interior time
                    row[("split", a, b, c)] = (led.max_water_window(a, c)
                                               - led.max_water_window(a, b) - led.max_water_window(b, c))
            mid = rng.uniform(0, t)
            row["full_split"] = row["full"] - led.max_water_window(0.0, mid) - led.max_water_window(mid, t)
            slow[t] = row

    times = sorted(slow)
    mono = 0.0  # largest increase of a fixed window between evaluations
    for w in windows:
        vals = [slow[t][w] for t in times if w in slow[t]]
        mono = max([mono] + [b - a for a, b in zip(vals, vals[1:])])
    split = max([0.0] + [v for t in times for key, v in slow[t].items()
                         if (isinstance(key, tuple) and key[0] == "split") or key == "full_split"])
    cross = max([0.0] + [abs(fast[t][key] - slow[t][key]) for t in times for key in fast[t]])
    full_vs_level = max([0.0] + [abs(slow[t]["full"] - slow[t]["level"]) for t in times])
    report = replay(tr)
    return {"seed": seed, "samples": len(times), "mono": mono, "split": split, "cross": cross,
            "full_vs_level": full_vs_level, "replay": report.max_level_error,
            "conservation": report.conservation_error}


@_timed
def check_water_calculus(traces: int = 100, workers: int | None = None) -> CheckResult:
    """Window water is nonincreasing in evaluation time and subadditive under splits."""
    res = _map(_water_trace, list(range(traces)), workers)
    keys = ("mono", "split", "cross", "full_vs_level", "replay")
    worst = {k: max(r[k] for r in res) for k in keys}
    samples = sum(r["samples"] for r in res)
    ok = all(worst[k] <= TOL for k in keys) and samples > 0
    detail = f"{traces} traces, {samples} samples; worst " + ", ".join(f"{k} {worst[k]:.2e}" for k in keys)
    return CheckResult("water-calculus", ok, detail)


@_timed
def check_time_decomposition(t_max: int = 10 ** 6) -> CheckResult:
    """Digits of every ``T`` lie in 1..10 and rebuild ``T``; the bound constant is 120."""
    bad = 0
    for T in range(1, t_max + 1):
        dec = decompose_time(T)
        if sum(d * 10 ** i for i, d in enumerate(dec.digits)) != T or not all(1 <= d <= 10 for d in dec.digits):
            bad += 1
    b = backlog_bound(1.0)
    ok = bad == 0 and b == 120.0
    return CheckResult("time-decomposition", ok, f"T = 1..{t_max}: {bad} bad; backlog_bound(1) = {b}")


# -- suites -----------------------------------------------------------------------

def default_workers() -> int:
    return max(1, (os.cpu_count() or 1))


def run_suite(name: str = "full", workers: int | None = None) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; have {sorted(SUITES)}")
    return SUITES[name](workers if workers is not None else default_workers())


def _full(workers):
    runs = schedule_runs(workers=workers)
    return [
        check_tauk_bound(),
        check_tauk_tightness(),
        check_few_path(),
        check_closed_tours(),
        check_schedule(runs),
        check_leftover(runs),
        check_main_bound(workers=workers),
        check_lower_bound(),
        check_water_calculus(workers=workers),
        check_time_decomposition(),
    ]


def _quick(workers):
    runs = schedule_runs(ns=(2, 10), kinds=("uniform", "random"), horizon=300.0, workers=workers)
    return [
        check_tauk_bound(r_max=10, random_seeds=5),
        check_tauk_tightness(r_max=10),
        check_few_path(instances=50, n_max=100),
        check_closed_tours(instances=10, levels=(0, 1)),
        check_schedule(runs),
        check_leftover(runs),
        check_main_bound(ns=(2, 10), kinds=("farthest-from-player",), deltas=(0.1,), horizon=1000.0,
                         workers=workers),
        check_lower_bound(),
        check_water_calculus(traces=5, workers=workers),
        check_time_decomposition(t_max=10 ** 4),
    ]


SUITES = {"full": _full, "quick": _quick}


def format_table(results: list[CheckResult]) -> str:
    w = max(len(r.name) for r in results)
    lines = [f"{'check':<{w}}  result  seconds  detail"]
    for r in results:
        lines.append(f"{r.name:<{w}}  {'PASS' if r.passed else 'FAIL':<6}  {r.seconds:7.1f}  {r.detail}")
    return "\n".join(lines)
