import csv
import json

import pytest

from gfq import cli


def _rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_gbs_flatten_writes_outputs(tmp_path):
    out = tmp_path / "gbs.json"
    assert cli.main(["gbs-flatten", "--base", "2", "--depth", "2", "--steps", "5", "--bins", "8", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["name"] == "gbs-flatten"
    assert report["config"]["steps"] == 5
    traj = _rows(tmp_path / "gbs_trajectory.csv")
    assert traj[0] == ["step", "cost", "wall_ms"] and len(traj) == 7
    hist = _rows(tmp_path / "gbs_histogram.csv")
    assert hist[0] == ["bin_lo", "bin_hi", "before", "after"] and len(hist) == 9


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"base": 2, "depth": 1, "steps": 7}))
    out = tmp_path / "r.json"
    cli.main(["gbs-flatten", "--config", str(cfg), "--steps", "2", "--seed", "3", "--out", str(out)])
    report = json.loads(out.read_text())
    assert report["config"]["steps"] == 2 and report["config"]["seed"] == 3 and report["config"]["depth"] == 1


def test_cat_prep_cli(tmp_path):
    out = tmp_path / "cat.json"
    cli.main(["cat-prep", "--cutoff", "40", "--steps", "2", "--out", str(out)])
    report = json.loads(out.read_text())
    assert "fidelity" in report["metrics"]
    assert len(report["amplitudes"]["re"]) == 40
    assert (tmp_path / "cat_trajectory.csv").exists()


def test_cubic_prep_cli_schedule(tmp_path):
    out = tmp_path / "cubic.json"
    cli.main(["cubic-prep", "--cutoff", "30", "--schedule", "1,2", "--steps", "1", "--out", str(out)])
    report = json.loads(out.read_text())
    assert report["config"]["schedule"] == [1, 2]
    assert len(report["extra"]["stages"]) == 2


def test_verify_cubic_prints_json(capsys):
    cli.main(["verify-cubic", "--cutoff", "30"])
    report = json.loads(capsys.readouterr().out)
    assert report["metrics"]["passing_conventions"] == ["xxpp"]


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        cli.main(["nope"])
