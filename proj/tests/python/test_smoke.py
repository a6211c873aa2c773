import json
import os
from pathlib import Path

import pytest

import svdkit

SCENARIOS = Path(os.environ.get("SVDKIT_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def fixture(name):
    return svdkit.load_scenario(str(SCENARIOS / name))


def test_cantor_values():
    assert svdkit.cantor_eval(0.25) == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert svdkit.cantor_eval(0.0) == 0.0
    assert svdkit.cantor_eval(1.0) == 1.0
    assert svdkit.cantor_moment(1.0) == pytest.approx(0.5, abs=1e-12)


def test_scenario_round_trip():
    s = fixture("fig2_enclosed.json")
    assert s.wall_count == 1
    assert svdkit.parse_scenario(s.serialize()) == s


def test_bad_scenario_raises():
    with pytest.raises(ValueError):
        svdkit.parse_scenario("{not json")


def test_verdicts():
    assert svdkit.min_singular(fixture("fig3_crack.json"))["minimally_singular"]
    fig2 = svdkit.min_singular(fixture("fig2_enclosed.json"))
    assert not fig2["minimally_singular"]
    assert fig2["class_count"] == 2


def test_distances():
    s = fixture("fig2_enclosed.json")
    nodes = svdkit.svd_map(s, (0.1, 0.1))
    assert min(d for _, _, d in nodes) == 0.0
    assert svdkit.svd(s, (0.1, 0.1), (0.5, 0.5)) == pytest.approx(1.0)
    assert svdkit.svd(s, (0.1, 0.1), (0.9, 0.9)) == 0.0


def test_run_cli():
    code, out, err = svdkit.run_cli(["min-singular", str(SCENARIOS / "fig2_enclosed.json")])
    assert code == 0, err
    report = json.loads(out)
    assert report["command"] == "min-singular"
    code, _, _ = svdkit.run_cli(["svd-map", str(SCENARIOS / "missing.json")])
    assert code == 2
