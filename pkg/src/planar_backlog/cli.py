"""Command line entry point: ``planar-backlog {run,tauk,tour,verify}``.

Exit codes: 0 when every check passed, 1 on an invariant violation, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .engine import run_game
from .few_tour import closed_tour, few_bound, few_path
from .geometry import PointSet, Square, bounding_square, diameter
from .scenario import ConfigError, Scenario
from .tauk_game import harmonic_level_bound, make_adversary, run_tauk

OK, VIOLATION, CONFIG = 0, 1, 2

SUMMARY_COLUMNS = ["scenario-id", "n", "D", "adversary", "strategy", "horizon", "max_backlog",
                   "max_backlog_over_D", "bound_120D", "feasible"]


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(float(x)) if isinstance(x, float) else str(x)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# -- run ------------------------------------------------------------------------

def _load_scenario(args) -> Scenario:
    sc = Scenario.load(args.scenario) if args.scenario else Scenario()
    d = sc.to_dict()
    if args.horizon is not None:
        d["horizon"] = args.horizon
    if args.delta_adv is not None:
        d["delta_adv"] = args.delta_adv
    sc = Scenario.from_dict(d)
    if args.seed is not None:
        sc = sc.with_seed(args.seed)
    return sc


def resolved_config(sc: Scenario) -> dict:
    """Scenario dict with the data-dependent defaults filled in."""
    d = sc.to_dict()
    ps = sc.build_cups()
    D = diameter(ps)
    if d["delta_adv"] is None:
        d["delta_adv"] = D / 10 if D > 0 else 1.0
    if d["sample_interval"] is None:
        d["sample_interval"] = sc.sample_interval_for(D) if D > 0 else 1.0
    if d["start"] == "center":
        c = bounding_square(ps).center
        d["start"] = [c.x, c.y]
    return d


def cmd_run(args) -> int:
    try:
        sc = _load_scenario(args)
        config = resolved_config(sc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG
    if args.print_config:
        print(json.dumps(config, indent=2, sort_keys=True))
        return OK
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace = run_game(sc)
    trace.write(out / "trace.jsonl")
    st = trace.stats
    D = st["D"]
    _write_csv(out / "summary.csv", SUMMARY_COLUMNS, [[
        st["scenario_id"], st["n"], _fmt(D), st["adversary"], st["strategy"], _fmt(st["horizon"]),
        _fmt(st["max_backlog"]), _fmt(st["max_backlog"] / D if D > 0 else 0.0),
        _fmt(st["bound_120D"]), _fmt(st.get("feasible") if sc.strategy == "coroutine" else None),
    ]])
    _write_csv(out / "backlog.csv", ["t", "max_backlog", "bound_120D"],
               [[_fmt(t), _fmt(b), _fmt(st["bound_120D"])] for t, b in trace.samples])
    activity = [[_fmt(t), kind, p["level"], p["L"], p["ell"], _fmt(p.get("tour_length"))]
                for t, kind, p in trace.events if kind in ("invoke", "return", "resume")]
    _write_csv(out / "activity.csv", ["t", "event", "level", "L", "ell", "tour_length"], activity)
    for v in trace.violations:
        print(f"violation: {v}", file=sys.stderr)
    print(f"{st['scenario_id']}: max backlog {st['max_backlog']:.6g} (bound {st['bound_120D']:.6g}), "
          f"{len(trace.violations)} violations")
    return VIOLATION if trace.violations else OK


# -- tauk -----------------------------------------------------------------------

def cmd_tauk(args) -> int:
    if args.r < 0 or args.k < 1 or not args.tau > 0:
        print("config error: need r >= 0, k >= 1, tau > 0", file=sys.stderr)
        return CONFIG
    try:
        adversary = make_adversary(args.adversary, args.seed)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG
    tr = run_tauk(args.r, args.tau, args.k, adversary)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["round", "max_level", "bound"])
    for rec in tr.rounds:
        w.writerow([rec.round, _fmt(rec.max_level), _fmt(harmonic_level_bound(rec.round, args.tau, args.k))])
    return VIOLATION if tr.bound_violations() else OK


# -- tour -----------------------------------------------------------------------

def _read_points(path) -> np.ndarray:
    text = Path(path).read_text()
    if text.lstrip().startswith("["):
        return np.asarray(json.loads(text), dtype=float).reshape(-1, 2)
    return np.loadtxt(io.StringIO(text.replace(",", " ")), ndmin=2)[:, :2]


def cmd_tour(args) -> int:
    try:
        if args.points_file:
            xy = _read_points(args.points_file)
        elif args.n is not None and args.n >= 1:
            xy = np.random.default_rng(args.seed).random((args.n, 2)) * args.side
        else:
            raise ValueError("give --n >= 1 or --points-file")
        ps = PointSet(xy)
        if args.points_file:
            sq = bounding_square(ps)
            sq = Square(sq.origin, max(sq.side, args.side)) if args.side else sq
        else:
            sq = Square((0.0, 0.0), args.side)
        start = args.start
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG
    if args.closed:
        p = tuple(start) if start is not None else (sq.origin.x, sq.origin.y)
        try:
            path = closed_tour(p, ps, sq)
        except ValueError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return CONFIG
        # strip path over the points plus the start, then one closing segment
        bound = few_bound(len(ps) + 1, sq.side) + math.sqrt(2) * sq.side
    else:
        path = few_path(ps, sq)
        bound = few_bound(len(ps), sq.side)
    rows = [[_fmt(float(x)), _fmt(float(y)), int(i)] for (x, y), i in zip(path.waypoints, path.ids)]
    dest = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(dest, lineterminator="\n")
        w.writerow(["x", "y", "id"])
        w.writerows(rows)
    finally:
        if args.out:
            dest.close()
    print("length,bound")
    print(f"{_fmt(path.length)},{_fmt(bound)}")
    return OK if path.length <= bound else VIOLATION


# -- verify ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import SUITES, format_table, run_suite

    if args.suite not in SUITES:
        print(f"config error: unknown suite {args.suite!r}; have {sorted(SUITES)}", file=sys.stderr)
        return CONFIG
    results = run_suite(args.suite, workers=args.workers)
    print(format_table(results))
    return OK if all(r.passed for r in results) else VIOLATION


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="planar-backlog", description="Cup-emptying game simulator and checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="play one scenario and write trace and CSVs")
    r.add_argument("--scenario", help="scenario JSON file (defaults used if omitted)")
    r.add_argument("--out-dir", default=".", help="directory for trace.jsonl, summary.csv, backlog.csv")
    r.add_argument("--seed", type=int, help="override adversary and cup-generator seeds")
    r.add_argument("--horizon", type=float)
    r.add_argument("--delta-adv", type=float, help="adversary control interval")
    r.add_argument("--print-config", action="store_true", help="print the resolved scenario and exit")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("tauk", help="play the abstract discrete game, CSV of max level per round")
    t.add_argument("--r", type=int, default=10, help="number of rounds")
    t.add_argument("--tau", type=float, default=1.0, help="water poured per round")
    t.add_argument("--k", type=int, default=1, help="cups emptied per round")
    t.add_argument("--adversary", default="equalizing", help="equalizing, single-cup, spread or random")
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(func=cmd_tauk)

    o = sub.add_parser("tour", help="build a strip path (or closed tour) and compare with its bound")
    o.add_argument("--n", type=int, help="number of random points")
    o.add_argument("--points-file", help="file of x,y rows or a JSON list of pairs")
    o.add_argument("--side", type=float, default=1.0)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--closed", action="store_true", help="closed tour from --start")
    o.add_argument("--start", type=float, nargs=2, metavar=("X", "Y"))
    o.add_argument("--out", help="write waypoints here instead of stdout")
    o.set_defaults(func=cmd_tour)

    v = sub.add_parser("verify", help="run the acceptance checks and print a table")
    v.add_argument("suite", nargs="?", default="full", help="full or quick")
    v.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return CONFIG if exc.code else OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
