import csv
import json

import pytest

from tiered_deploy.cli import main
from tiered_deploy.io import read_solution


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def config_file(tmp_path):
    cfg = {
        "region": {"kind": "rect", "bounds": [[0, 10], [0, 10]]},
        "density": {"kind": "gaussian_mixture",
                    "components": [{"amp": 5.0, "center": [8, 1], "inv_scale": 0.5},
                                   {"amp": 5.0, "center": [2, 2], "inv_scale": 0.5}]},
        "N": 5, "M": 2, "beta": 1.0, "trials": 2, "maxIterations": 15,
        "resolution": 20, "seed": 11, "algorithm": "both",
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def test_analytic_prop1(capsys):
    code, out, _ = run(capsys, "analytic", "prop1", "--n", "4", "--beta", "1", "--interval=-0.5,0.5")
    assert code == 0
    data = json.loads(out)
    assert data["distortion"] == pytest.approx(17 / 384, rel=1e-12)
    assert [p[0] for p in data["aps"]] == pytest.approx([-3 / 16, -1 / 16, 1 / 16, 3 / 16])


def test_analytic_theorem1_and_lemma2(capsys):
    code, out, _ = run(capsys, "analytic", "theorem1", "--n", "3", "--m", "3", "--beta", "2",
                       "--interval", "0,1")
    assert code == 0 and json.loads(out)["distortion"] == pytest.approx(1 / 108, rel=1e-12)
    code, out, _ = run(capsys, "analytic", "lemma2", "--n", "5", "--m", "2", "--beta", "1")
    assert code == 0 and json.loads(out)["sizes"] == [3, 2]


def test_analytic_reports_invalid_args(capsys):
    code, _, err = run(capsys, "analytic", "lemma2", "--n", "1", "--m", "2")
    assert code == 2 and "N >= M" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["analytic", "nonsense", "--n", "2"])
    assert exc.value.code == 2


def test_optimize_writes_reproducible_outputs(capsys, tmp_path, config_file):
    outs = []
    for name in ("a", "b"):
        code, out, _ = run(capsys, "optimize", "--config", str(config_file), "--out",
                           str(tmp_path / name))
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    for fname in ("report.json", "ttl_best_solution.json", "otl_best_solution.json"):
        assert (tmp_path / "a" / fname).read_bytes() == (tmp_path / "b" / fname).read_bytes()
    summary = json.loads(outs[0])
    assert set(summary["mean_savings_pct"]) == {"otl", "ttl"}


def test_optimize_algorithm_override(capsys, tmp_path, config_file):
    code, out, _ = run(capsys, "optimize", "--config", str(config_file), "--algorithm", "ttl")
    assert code == 0 and list(json.loads(out)["mean_savings_pct"]) == ["ttl"]


def test_bad_config_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"region": {"kind": "interval", "bounds": [0, 1]},
                                "density": {"kind": "uniform"}, "N": 2, "M": 1, "extra": 1}))
    code, _, err = run(capsys, "optimize", "--config", str(path))
    assert code == 2 and "extra" in err
    path.write_text("{not json")
    assert run(capsys, "optimize", "--config", str(path))[0] == 2


def test_zero_density_config_rejected(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"region": {"kind": "interval", "bounds": [0, 1]},
                                "density": {"kind": "grid_table", "values": [0, 0, 0, 0]},
                                "N": 2, "M": 1, "resolution": 4}))
    code, _, err = run(capsys, "optimize", "--config", str(path))
    assert code == 2 and "zero" in err


def test_missing_config_is_runtime_error(capsys, tmp_path):
    code, _, err = run(capsys, "optimize", "--config", str(tmp_path / "nope.json"))
    assert code == 1 and "nope.json" in err


def test_export_formats(capsys, tmp_path, config_file):
    run(capsys, "optimize", "--config", str(config_file), "--out", str(tmp_path / "run"))
    solution_path = tmp_path / "run" / "ttl_best_solution.json"
    solution, grid = read_solution(solution_path)

    code, out, _ = run(capsys, "export", "--solution", str(solution_path), "--format", "json",
                       "--out", str(tmp_path / "json"))
    assert code == 0
    again, _ = read_solution(tmp_path / "json" / "ttl_best_solution.json")
    assert again.to_dict() == solution.to_dict()

    code, out, _ = run(capsys, "export", "--solution", str(solution_path), "--format", "plotdata",
                       "--out", str(tmp_path / "plot"))
    assert code == 0
    with open(tmp_path / "plot" / "ttl_best_solution_raster.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == grid.size
    assert set(rows[0]) == {"x", "y", "ap_index", "bs_index"}
    with open(tmp_path / "plot" / "ttl_best_solution_trace.csv") as fh:
        trace = list(csv.DictReader(fh))
    assert len(trace) == solution.iterations + 1
    assert set(trace[0]) == {"iteration", "distortion", "sensor_term", "ap_term"}
    with open(tmp_path / "plot" / "ttl_best_solution_nodes.csv") as fh:
        kinds = [r["kind"] for r in csv.DictReader(fh)]
    assert kinds.count("ap") == 5 and kinds.count("bs") == 2


def test_export_unwritable_path(capsys, tmp_path, config_file):
    run(capsys, "optimize", "--config", str(config_file), "--out", str(tmp_path / "run"))
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "export", "--solution", str(tmp_path / "run" / "ttl_best_solution.json"),
                       "--format", "csv", "--out", str(blocker / "sub"))
    assert code == 1 and str(blocker) in err
