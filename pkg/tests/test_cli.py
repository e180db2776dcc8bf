import csv
import json
from pathlib import Path

import pytest

from grmlab.cli import main, parse_channel
from grmlab.exceptions import InvalidChannel
from grmlab.scan import SCAN_COLUMNS

CHANNELS = Path(__file__).resolve().parent.parent / "channels"


def _summary(capsys) -> dict:
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


def test_rate(capsys):
    assert main(["rate", "--q", "3", "--r", "2", "--m", "2"]) == 0
    summary = _summary(capsys)
    assert summary["exact"] == "2/3"
    assert 0.0 < summary["gaussian"] < 1.0


def test_rate_of_non_prime_alphabet(capsys):
    assert main(["rate", "--q", "6", "--r", "1", "--m", "2"]) == 2
    assert "non_prime" in capsys.readouterr().err


def test_overlap_from_file(capsys, tmp_path):
    out = tmp_path / "overlap.json"
    path = str(CHANNELS / "ambiguous_4x2.json")
    assert main(["overlap", "--channel", path, "--out", str(out)]) == 0
    assert _summary(capsys)["trace"] == "26/15"
    assert json.loads(out.read_text())["chi2"] == "11/15"


def test_symmetry_of_mod4_noise(capsys):
    assert main(["symmetry", "--channel", str(CHANNELS / "mod4_noise.json")]) == 0
    summary = _summary(capsys)
    assert summary["order"] == 8
    assert summary["trace_case"] == "not_applicable"
    assert summary["inequality_holds"] is False


def test_builtin_channel_needs_size():
    with pytest.raises(InvalidChannel):
        parse_channel("identity")
    assert parse_channel("qsc:1/10", 3).q == 3
    assert parse_channel("additive:1/2,0,1/2,0").q == 4


def test_usage_errors_exit_two(capsys):
    assert main(["overlap", "--channel", "identity"]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["coset-scan", "--q", "2"]) == 2


def test_coset_scan_csv(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    argv = "coset-scan --q 2 --r 1 --m 2 --channel bsc:1/10 --t-grid 0,1/2,1".split()
    argv += ["--out", str(out)]
    assert main(argv) == 0
    summary = _summary(capsys)
    assert summary["mode"] == "exact"
    assert summary["rows"] == 3
    with open(out, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == list(SCAN_COLUMNS)
    assert len(rows) == 4
    assert rows[1][0] == "0/1"


def test_coset_scan_from_experiment_file(capsys, tmp_path):
    config = tmp_path / "experiment.json"
    config.write_text(
        json.dumps(
            {
                "code": {"q": 2, "generator": [[1, 1]]},
                "channel": {"builtin": "identity", "q": 2},
                "t_grid": "exact-polynomial",
                "out": str(tmp_path / "scan.json"),
            }
        )
    )
    assert main(["coset-scan", "--config", str(config)]) == 0
    assert _summary(capsys)["delta_avg"] == "1/12"
    report = json.loads((tmp_path / "scan.json").read_text())
    assert report["polynomials"]["delta"] == ["0/1", "1/2", "0/1"]


def test_exit_curve(capsys):
    argv = ["exit-curve", "--q", "2", "--r", "1", "--m", "2", "--channel", "bec:1/4"]
    assert main(argv) == 0
    summary = _summary(capsys)
    assert summary["degree"] == 3
    assert summary["holds"] is True


def test_puncture_check(capsys):
    assert main(["puncture-check", "--q", "3", "--r", "1", "--m", "2", "--k", "1"]) == 0
    summary = _summary(capsys)
    assert summary["passed"] is True
    # nine punctured words, three preimages each
    assert summary["multiplicities"] == {"3": 9}


def test_verify_subset(capsys, tmp_path):
    out = tmp_path / "suite.json"
    argv = "verify --q-list 2 --instances 3 --code-instances 1".split()
    argv += ["--checks", "ser_overlap,puncture", "--out", str(out)]
    assert main(argv) == 0
    assert _summary(capsys)["failed"] == []
    assert [r["check"] for r in json.loads(out.read_text())] == ["puncture", "ser_overlap"]


def test_verify_unknown_check(capsys):
    assert main(["verify", "--checks", "no_such_check", "--q-list", "2"]) == 2
