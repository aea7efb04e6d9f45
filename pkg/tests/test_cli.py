import json

import numpy as np
import pytest

from gmmlab import verification
from gmmlab.cli import main
from gmmlab.dataio import read_dataset, write_dataset
from gmmlab.model import model_to_json, sample_dataset

from conftest import make_model


@pytest.fixture
def model_file(tmp_path):
    model = make_model(np.full(30, 0.3), np.ones(30))
    path = tmp_path / "model.json"
    path.write_text(model_to_json(model))
    return path, model


def test_sample_deterministic_and_clean_labels(tmp_path, model_file):
    path, _ = model_file
    out1 = tmp_path / "d1.json"
    out2 = tmp_path / "d2.json"
    assert main(["sample", "--model", str(path), "--n", "8", "--seed", "5", "--out", str(out1)]) == 0
    assert main(["sample", "--model", str(path), "--n", "8", "--seed", "5", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["y"] == doc["y_c"]  # flip_prob = 0
    assert doc["n"] == 8 and doc["p"] == 30


def test_sample_default_seed_is_zero(tmp_path, model_file):
    path, _ = model_file
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["sample", "--model", str(path), "--n", "5", "--out", str(a)]) == 0
    assert main(["sample", "--model", str(path), "--n", "5", "--seed", "0", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_preset_dimensions(tmp_path):
    out = tmp_path / "ds.json"
    code = main(
        ["sample", "--preset", "fig1", "--eta", "0.1", "--n", "100", "--out", str(out), "--binary"]
    )
    assert code == 0
    ds = read_dataset(out)
    assert ds.X.shape == (100, 1500)
    assert (tmp_path / "ds.bin").exists()


def test_binary_roundtrip(tmp_path):
    model = make_model(np.full(6, 0.2), np.ones(6))
    ds = sample_dataset(model, 4, seed=9)
    write_dataset(ds, tmp_path / "d.json", binary=True)
    back = read_dataset(tmp_path / "d.json", model)
    assert np.array_equal(back.X, ds.X)
    assert np.array_equal(back.y, ds.y)
    assert np.allclose(back.noise, ds.noise)


def test_estimate_and_risk_pipeline(tmp_path, model_file):
    path, _ = model_file
    data = tmp_path / "d.json"
    clf = tmp_path / "clf.json"
    assert main(["sample", "--model", str(path), "--n", "6", "--out", str(data)]) == 0
    assert main(
        ["estimate", "--data", str(data), "--estimator", "ls", "--out", str(clf)]
    ) == 0
    doc = json.loads(clf.read_text())
    assert doc["kind"] == "ls" and len(doc["w"]) == 30
    code = main(["risk", "--model", str(path), "--classifier", str(clf), "--mc", "5000"])
    assert code == 0


def test_estimate_ridge_requires_tau(tmp_path, model_file):
    path, _ = model_file
    data = tmp_path / "d.json"
    main(["sample", "--model", str(path), "--n", "6", "--out", str(data)])
    assert main(["estimate", "--data", str(data), "--estimator", "ridge"]) == 2


def test_rank_deficient_is_computation_error(tmp_path, capsys):
    # p < n: min-norm interpolation impossible; exit 3 with JSON stderr
    model = make_model(np.full(3, 0.2), np.ones(3))
    path = tmp_path / "m.json"
    path.write_text(model_to_json(model))
    data = tmp_path / "d.json"
    main(["sample", "--model", str(path), "--n", "9", "--out", str(data)])
    capsys.readouterr()
    assert main(["estimate", "--data", str(data), "--estimator", "ls"]) == 3
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "NotInterpolableError"


def test_check_thm2_preset(capsys):
    code = main(["check", "thm2", "--preset", "fig2", "--p", "300", "--n", "10"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["theorem_id"] == "thm2"
    assert isinstance(doc["all_hold"], bool)


def test_check_thm2_with_model_file(tmp_path, capsys):
    # the frozen thm2 example: n=10, p=300, ||eta|| = 1
    model = make_model(np.full(300, 1 / np.sqrt(300)), np.ones(300))
    path = tmp_path / "m.json"
    path.write_text(model_to_json(model))
    assert main(["check", "thm2", "--model", str(path), "--n", "10"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["all_hold"] is True
    assert all(c["holds"] for c in doc["clauses"])


def test_check_unknown_constant_exit_2(tmp_path):
    model = make_model(np.full(20, 0.1), np.ones(20))
    path = tmp_path / "m.json"
    path.write_text(model_to_json(model))
    assert main(["check", "thm2", "--model", str(path), "--n", "4",
                 "--constants", "C9=1"]) == 2


def test_check_csv_format(tmp_path, capsys):
    model = make_model(np.full(20, 0.1), np.ones(20))
    path = tmp_path / "m.json"
    path.write_text(model_to_json(model))
    assert main(["check", "thm2", "--model", str(path), "--n", "4", "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "theorem_id,all_hold,clauses,constants"


def test_figure_writes_csvs(tmp_path):
    code = main(
        ["figure", "fig1", "--trials", "1", "--out", str(tmp_path), "--threads", "2"]
    )
    assert code == 0
    assert (tmp_path / "fig1_left.csv").exists()
    assert (tmp_path / "fig1_right.csv").exists()


def test_sweep_config(tmp_path):
    config = {
        "points": [
            {"id": "a", "preset": "fig2", "preset_params": {"p": 60, "eta_norm_sq": 3.0},
             "n": 10, "estimators": ["ls", "avg"]},
        ],
        "trials": 3,
        "base_seed": 1,
        "outputs": ["exact_risk"],
    }
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps(config))
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert "risk:ls" in summary["aggregates"]["a"]
    assert summary["config"]["trials"] == 3
    assert summary["config"]["points"][0]["estimators"] == ["ls", "avg"]


def test_sweep_unknown_key_rejected(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"points": [], "bogus": 1}))
    assert main(["sweep", "--config", str(cfg)]) == 2


def test_bad_model_json_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["sample", "--model", str(path), "--n", "3", "--out", str(tmp_path / "o.json")]) == 2


def test_missing_model_exit_2(tmp_path):
    assert main(["sample", "--n", "3", "--out", str(tmp_path / "o.json")]) == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_verify_quick_identity(capsys):
    assert main(["verify", "--quick", "--suite", "identity", "--suite", "chernoff"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "identity: 100/100 pass"
    assert lines[1] == "chernoff: 1000/1000 pass"


def test_verify_failure_exit_code(monkeypatch):
    def broken_suite(**kw):
        return verification.SuiteResult("broken", passed=0, total=1, failures=["boom"])

    monkeypatch.setitem(verification.ALL_SUITES, "identity", broken_suite)
    assert main(["verify", "--suite", "identity"]) == 4
