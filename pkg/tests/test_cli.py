import json

import numpy as np
import pytest

from rpclass.cli import main


def _write_config(tmp_path, n_jobs=1):
    config = {
        "schema_version": 1,
        "data": {"kind": "synthetic", "model": "gaussian_common_cov", "p": 4, "delta": 2.0},
        "methods": [
            {"name": "LDA"},
            {"name": "RP_LDA", "d": 2, "b1": 5, "b2": 2},
        ],
        "n_train": 40,
        "n_test": 100,
        "repetitions": 3,
        "seed": 9,
        "n_jobs": n_jobs,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


def test_jl_check_prints_bound(capsys):
    assert main(["jl-check", "--n", "1000", "--eps", "0.1", "--delta", "0.01"]) == 0
    out = capsys.readouterr().out
    assert "18422" in out


def test_jl_check_with_distortion_trials(capsys):
    code = main(
        ["jl-check", "--n", "15", "--eps", "0.5", "--delta", "0.1",
         "--p", "400", "--trials", "5"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "trials within" in out


def test_bench_writes_byte_identical_reports(tmp_path, capsys):
    config = _write_config(tmp_path)
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    assert main(["bench", "--config", str(config), "--out", str(out1)]) == 0
    assert main(["bench", "--config", str(config), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert "RP_LDA" in capsys.readouterr().out


def test_bench_missing_config_is_usage_error(tmp_path, capsys):
    assert main(["bench", "--config", str(tmp_path / "absent.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_bench_malformed_config_is_usage_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["bench", "--config", str(path)]) == 2


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


def _write_training_csv(tmp_path, name, n=60, seed=0):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, n)
    labels[:2] = [0, 1]
    features = rng.normal(size=(n, 5)) + 1.5 * labels[:, None]
    path = tmp_path / name
    with open(path, "w") as handle:
        for row, label in zip(features, labels):
            handle.write(",".join(repr(float(v)) for v in row) + f",{label}\n")
    return path, features, labels


def test_train_and_predict_round_trip(tmp_path, capsys):
    train_path, _, _ = _write_training_csv(tmp_path, "train.csv", seed=1)
    test_path, _, test_labels = _write_training_csv(tmp_path, "test.csv", seed=2)
    model_path = tmp_path / "model.npz"
    assert (
        main(
            ["train", "--data", str(train_path), "--method", "RP_LDA",
             "--d", "2", "--b1", "6", "--b2", "2", "--seed", "4",
             "--out", str(model_path)]
        )
        == 0
    )
    assert model_path.exists()
    predictions_path = tmp_path / "predictions.csv"
    assert (
        main(
            ["predict", "--model", str(model_path), "--data", str(test_path),
             "--label-column", "-1", "--out", str(predictions_path)]
        )
        == 0
    )
    out = capsys.readouterr().out
    assert "test error" in out
    lines = predictions_path.read_text().strip().splitlines()
    assert lines[0] == "prediction"
    assert len(lines) == 1 + len(test_labels)
    assert set(lines[1:]) <= {"0", "1"}


def test_train_sketched_and_predict_without_labels(tmp_path, capsys):
    train_path, features, _ = _write_training_csv(tmp_path, "train.csv", seed=3)
    model_path = tmp_path / "sketched.npz"
    assert (
        main(
            ["train", "--data", str(train_path), "--method", "SKETCH_LDA",
             "--d", "2", "--out", str(model_path)]
        )
        == 0
    )
    # feature-only csv
    bare = tmp_path / "bare.csv"
    with open(bare, "w") as handle:
        for row in features[:7]:
            handle.write(",".join(repr(float(v)) for v in row) + "\n")
    assert main(["predict", "--model", str(model_path), "--data", str(bare)]) == 0
    out = [line for line in capsys.readouterr().out.splitlines() if line in ("0", "1")]
    assert len(out) == 7


def test_fetch_data_network_failure_is_runtime_error(tmp_path, capsys):
    code = main(
        ["fetch-data", "--cache-dir", str(tmp_path),
         "--url", "http://127.0.0.1:9/none.csv"]
    )
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_b1_sweep_cli(tmp_path, capsys):
    config_path = tmp_path / "sweep config.json"
    config = {
        "schema_version": 1,
        "data": {"kind": "synthetic", "model": "sparse_linear", "p": 10,
                  "n_relevant": 2, "delta": 2.0},
        "methods": [{"name": "RP_LDA", "d": 2, "b2": 3}],
        "n_train": 40,
        "n_test": 80,
        "repetitions": 1,
        "seed": 2,
    }
    config_path.write_text(json.dumps(config))
    out_path = tmp_path / "sweep.csv"
    code = main(
        ["b1-sweep", "--config", str(config_path), "--grid", "2,4",
         "--ensembles", "3", "--out", str(out_path)]
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert "B1,mean_error,sd_error" in printed
    assert out_path.read_text().startswith("B1,mean_error,sd_error")
