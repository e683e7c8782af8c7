import json

import numpy as np
import pytest

from planar_backlog.geometry import diameter
from planar_backlog.scenario import ConfigError, Scenario, generate_cups


def test_generators():
    assert len(generate_cups({"kind": "uniform", "n": 7, "seed": 1})) == 7
    g = generate_cups({"kind": "grid", "rows": 2, "cols": 3, "spacing": 0.5})
    assert len(g) == 6 and diameter(g) == pytest.approx(np.hypot(1.0, 0.5))
    assert diameter(generate_cups({"kind": "two-point", "distance": 3.0})) == 3.0
    assert diameter(generate_cups({"kind": "uniform", "n": 30, "diameter": 2.0})) == pytest.approx(2.0)


@pytest.mark.parametrize("bad", [
    {"horizon": 0}, {"delta_adv": -1.0}, {"strategy": "teleport"}, {"extra": 1},
    {"cups": {"kind": "hexagon"}}, {"adversary": {"kind": "evil"}}, {"sample_interval": 0},
])
def test_invalid_configs(bad):
    with pytest.raises(ConfigError):
        Scenario.from_dict(bad).build_cups()


def test_duplicate_points_are_config_errors():
    with pytest.raises(ConfigError):
        generate_cups({"kind": "explicit", "points": [[0, 0], [0, 0]]})


def test_round_trip(tmp_path):
    sc = Scenario(cups=[[0, 0], [1, 2]], adversary={"kind": "random", "seed": 3}, horizon=50.0, start=[0.5, 1.0])
    path = tmp_path / "s.json"
    path.write_text(json.dumps(sc.to_dict()))
    assert Scenario.load(path) == sc


def test_with_seed_reseeds_generators():
    sc = Scenario().with_seed(9)
    assert sc.seed == 9 and sc.adversary.seed == 9 and sc.cups["seed"] == 9


def test_load_missing_file():
    with pytest.raises(ConfigError):
        Scenario.load("/nonexistent/scenario.json")
