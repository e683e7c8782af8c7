import csv
import json

import pytest

from planar_backlog.cli import SUMMARY_COLUMNS, main


def write_scenario(tmp_path, **over):
    d = {"cups": {"kind": "uniform", "n": 8, "seed": 2, "diameter": 1.0},
         "adversary": {"kind": "fullest-cup", "seed": 1}, "horizon": 250.0, "id": "cli-test"}
    d.update(over)
    p = tmp_path / "scenario.json"
    p.write_text(json.dumps(d))
    return p


def test_run_writes_outputs(tmp_path):
    sc = write_scenario(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(sc), "--out-dir", str(out)]) == 0
    for name in ("trace.jsonl", "summary.csv", "backlog.csv", "activity.csv"):
        assert (out / name).exists()
    rows = list(csv.DictReader(open(out / "summary.csv")))
    assert list(rows[0]) == SUMMARY_COLUMNS
    assert rows[0]["feasible"] == "true" and float(rows[0]["max_backlog_over_D"]) <= 120
    b = list(csv.reader(open(out / "backlog.csv")))
    assert b[0] == ["t", "max_backlog", "bound_120D"] and len(b) == 251


def test_run_is_byte_deterministic(tmp_path):
    sc = write_scenario(tmp_path, adversary={"kind": "random", "seed": 5})
    for d in ("a", "b"):
        assert main(["run", "--scenario", str(sc), "--out-dir", str(tmp_path / d), "--seed", "3"]) == 0
    for name in ("trace.jsonl", "summary.csv", "backlog.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_baseline_feasible_is_na(tmp_path):
    sc = write_scenario(tmp_path, strategy="greedy")
    assert main(["run", "--scenario", str(sc), "--out-dir", str(tmp_path)]) == 0
    assert list(csv.DictReader(open(tmp_path / "summary.csv")))[0]["feasible"] == "NA"


def test_print_config_is_explicit(tmp_path, capsys):
    sc = write_scenario(tmp_path)
    assert main(["run", "--scenario", str(sc), "--print-config", "--horizon", "77"]) == 0
    cfg = json.loads(capsys.readouterr().out)
    assert cfg["horizon"] == 77.0
    assert cfg["delta_adv"] == pytest.approx(0.1) and cfg["sample_interval"] == pytest.approx(1.0)
    assert isinstance(cfg["start"], list)


def test_config_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"horizon": -1}')
    assert main(["run", "--scenario", str(bad)]) == 2
    assert main(["run", "--scenario", str(tmp_path / "missing.json")]) == 2
    assert main(["run", "--bogus-flag"]) == 2
    assert main(["tauk", "--k", "0"]) == 2
    assert main(["tour"]) == 2
    assert main(["verify", "nosuchsuite"]) == 2


def test_tauk_csv(capsys):
    assert main(["tauk", "--r", "2", "--k", "1", "--tau", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "round,max_level,bound"
    last = lines[-1].split(",")
    assert float(last[1]) == pytest.approx(5 / 6) and float(last[2]) == pytest.approx(1.5)


def test_tour_random_and_file(tmp_path, capsys):
    assert main(["tour", "--n", "40", "--seed", "1"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "x,y,id" and out[-2] == "length,bound"
    length, bound = map(float, out[-1].split(","))
    assert length <= bound
    pts = tmp_path / "pts.csv"
    pts.write_text("0,0\n1,0\n1,1\n0,1\n")
    assert main(["tour", "--points-file", str(pts), "--closed", "--start", "0", "0",
                 "--out", str(tmp_path / "wp.csv")]) == 0
    assert len((tmp_path / "wp.csv").read_text().splitlines()) == 6


def test_verify_quick(capsys):
    assert main(["verify", "quick", "--workers", "1"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 10
