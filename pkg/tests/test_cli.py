import json

import pytest

from confsasaki.cli import main


def test_list(capsys):
    assert main(["--list"]) == 0
    out = capsys.readouterr().out
    assert "eq2.1" in out and "cr_r7" in out and "linear_z" in out


def test_unknown_check_exit_2(capsys):
    assert main(["--checks", "eq9.9"]) == 2
    assert "unknown check id 'eq9.9'" in capsys.readouterr().err


def test_bad_tolerance_exit_2():
    assert main(["--checks", "eq2.1", "--tol", "-1"]) == 2


def test_passing_run_writes_report(tmp_path, capsys):
    path = tmp_path / "r.json"
    code = main(["--space", "sasakian:n=2", "--factor", "linear_z:a=0.3", "--immersion", "invariant_1_in_2",
                 "--checks", "eq2.1,eq2.15,eq3.2", "--samples", "3", "--probes", "2", "--report", str(path)])
    assert code == 0
    rep = json.loads(path.read_text())
    assert [c["id"] for c in rep["checks"]] == ["eq2.1", "eq2.15", "eq3.2"]
    assert all(c["immersion"] == "invariant_1_in_2" for c in rep["checks"][1:])
    assert rep["config"]["samples"] == 3
    assert "pass=" in capsys.readouterr().out


def test_corrupted_structure_exit_1(tmp_path):
    code = main(["--space", "sasakian:n=1,phi_scale=1.01", "--checks", "eq2.1,eq2.2", "--samples", "2",
                 "--report", str(tmp_path / "r.json")])
    assert code == 1
    rep = json.loads((tmp_path / "r.json").read_text())
    assert all(c["status"] == "fail" and c["relative_residual"] >= 1e-4 for c in rep["checks"])


def test_immersion_space_mismatch_exit_2(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["--space", "sasakian:n=1", "--checks", "eq2.15", "--immersion", "cr_r7", "--samples", "1",
                 "--report", str(path)]) == 2
    assert "n=3" in capsys.readouterr().err
    assert not path.exists()


def test_immersion_without_space_picks_model(tmp_path):
    path = tmp_path / "r.json"
    assert main(["--immersion", "anti_xaxis_r3", "--checks", "eq4.1", "--samples", "2", "--report", str(path)]) == 0
    rec = json.loads(path.read_text())["checks"]
    assert len(rec) == 1 and rec[0]["space"].startswith("sasakian:n=1")


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"spaces": ["sasakian:n=1"], "factors": ["quad:c=0.05"], "checks": ["eq2.7"],
                               "samples": 5, "probes": 1, "seed": 3, "report": str(tmp_path / "a.json")}))
    assert main(["--config", str(cfg), "--samples", "2", "--report", str(tmp_path / "b.json")]) == 0
    assert not (tmp_path / "a.json").exists()
    rep = json.loads((tmp_path / "b.json").read_text())
    assert rep["config"]["samples"] == 2 and rep["config"]["seed"] == 3
    assert rep["checks"][0]["space"] == "sasakian:n=1|quad:c=0.05"


def test_config_targets(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"targets": [{"space": "sasakian:n=1", "factor": "const:c=0.1",
                                            "immersion": "anti_xaxis_r3", "checks": ["eq4.1"]}],
                               "samples": 2, "report": str(tmp_path / "r.json")}))
    assert main(["--config", str(cfg)]) == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert [c["id"] for c in rep["checks"]] == ["eq4.1"]


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"colour": 1}'])
def test_malformed_config_exit_2(tmp_path, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    assert main(["--config", str(cfg)]) == 2


def test_missing_config_exit_2(tmp_path):
    assert main(["--config", str(tmp_path / "absent.json")]) == 2


def test_report_round_trip(tmp_path):
    args = ["--space", "sasakian:n=1", "--factor", "linear_z:a=0.1", "--checks", "eq2.9", "--samples", "2"]
    main(args + ["--report", str(tmp_path / "1.json")])
    main(args + ["--report", str(tmp_path / "2.json")])
    a, b = (json.loads((tmp_path / f"{i}.json").read_text()) for i in (1, 2))
    for r in (a, b):
        r.pop("seconds")
        for c in r["checks"]:
            c.pop("seconds")
    assert a == b
