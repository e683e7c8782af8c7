"""Time the compiled core against the pure-Python one on the adversary epoch loop.

    python benchmarks/bench_core.py [--n 200] [--horizon 500] [--delta 0.01]

Each backend plays the same greedy game; the runs must produce identical
traces, and the table shows seconds and adversary consultations per second.
"""

import argparse
import time

from planar_backlog._backend import BACKENDS
from planar_backlog.engine import run_game
from planar_backlog.scenario import Scenario


def bench(backend, sc, repeat):
    best, trace = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        trace = run_game(sc, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, trace


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--horizon", type=float, default=500.0)
    ap.add_argument("--delta", type=float, default=0.01)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--kinds", nargs="+", default=["random", "farthest-from-player", "fullest-cup"])
    args = ap.parse_args(argv)

    print(f"{'adversary':<22}{'backend':<10}{'seconds':>9}{'consult/s':>12}  speedup")
    for kind in args.kinds:
        sc = Scenario(cups={"kind": "uniform", "n": args.n, "seed": 1, "diameter": 1.0},
                      adversary={"kind": kind, "seed": 2}, strategy="greedy",
                      horizon=args.horizon, delta_adv=args.delta, record_pours=False)
        results = {name: bench(name, sc, args.repeat) for name in sorted(BACKENDS, reverse=True)}
        events = {name: [e for e in tr.events if e[1] != "start"] for name, (_, tr) in results.items()}
        if len({repr(v) for v in events.values()}) != 1:
            raise SystemExit(f"backends disagree on {kind}")
        base = results["python"][0]
        for name, (sec, tr) in results.items():
            rate = tr.stats["consultations"] / sec
            print(f"{kind:<22}{name:<10}{sec:9.3f}{rate:12.0f}  {base / sec:6.1f}x")


if __name__ == "__main__":
    main()
