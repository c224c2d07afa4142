"""End-to-end command-line interface behavior and exit codes."""

import filecmp
import json

import numpy as np
import pytest

from speedclass.cli import main

FEATURE_NAMES = [
    "spd_lim", "tfc_flw", "traf_lig", "tfc_sgn", "toll_booth", "curvature", "slope",
]

GENERATE_ARGS = ["generate", "--seed", "3", "--routes", "2", "--length-km", "2"]


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("recordings")
    assert main(GENERATE_ARGS + ["--out", str(d)]) == 0
    return d


@pytest.fixture(scope="module")
def model_file(tmp_path_factory, data_dir):
    path = tmp_path_factory.mktemp("model") / "tree.json"
    code = main([
        "train", "--seed", "1", "--data", str(data_dir),
        "--algorithms", "DecisionTree", "--out", str(path),
    ])
    assert code == 0
    return path


class TestParsing:
    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "generate" in capsys.readouterr().out

    def test_missing_subcommand_is_usage_error(self, capsys):
        assert main([]) == 2
        assert "error:" in capsys.readouterr().out

    def test_unknown_flag_is_usage_error(self):
        assert main(GENERATE_ARGS + ["--out", "x", "--nope"]) == 2

    def test_missing_required_seed(self, tmp_path):
        assert main(["generate", "--out", str(tmp_path)]) == 2


class TestGenerate:
    def test_writes_recordings_and_manifest(self, data_dir):
        assert (data_dir / "recording_00.csv").is_file()
        assert (data_dir / "recording_01.csv").is_file()
        manifest = json.loads((data_dir / "manifest.json").read_text())
        assert manifest["format"] == "speedclass-manifest"
        assert manifest["version"] == 1
        assert manifest["seed"] == 3
        assert len(manifest["recordings"]) == 2
        entry = manifest["recordings"][0]
        assert entry["file"] == "recording_00.csv"
        assert set(entry["seeds"]) == {"route", "stops", "humanize", "congestion"}
        assert entry["samples"] > 0

    def test_rerun_is_byte_identical(self, data_dir, tmp_path):
        assert main(GENERATE_ARGS + ["--out", str(tmp_path)]) == 0
        for name in ("recording_00.csv", "recording_01.csv", "manifest.json"):
            assert filecmp.cmp(data_dir / name, tmp_path / name, shallow=False), name

    def test_zero_routes_is_usage_error(self, tmp_path, capsys):
        args = ["generate", "--seed", "1", "--routes", "0", "--out", str(tmp_path)]
        assert main(args) == 2
        assert "--routes" in capsys.readouterr().out

    def test_kind_override(self, tmp_path):
        args = [
            "generate", "--seed", "5", "--routes", "1", "--length-km", "2",
            "--kind", "highway", "--out", str(tmp_path),
        ]
        assert main(args) == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["recordings"][0]["kind"] == "highway"


class TestTrain:
    def test_model_file_schema(self, model_file):
        doc = json.loads(model_file.read_text())
        assert doc["format"] == "speedclass-model-file"
        assert doc["version"] == 1
        assert doc["feature_names"] == FEATURE_NAMES
        assert len(doc["standardizer"]["mean"]) == 7
        assert len(doc["standardizer"]["std_dev"]) == 7
        assert doc["model"]["format"] == "speedclass-model"
        assert doc["model"]["algorithm"] == "DecisionTree"

    def test_prints_training_summary(self, data_dir, tmp_path, capsys):
        path = tmp_path / "m.json"
        code = main([
            "train", "--seed", "2", "--data", str(data_dir),
            "--algorithms", "GaussianNB", "--out", str(path),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "GaussianNB" in out and "training accuracy" in out

    def test_unknown_algorithm_lists_valid_names(self, data_dir, tmp_path, capsys):
        code = main([
            "train", "--seed", "1", "--data", str(data_dir),
            "--algorithms", "NeuralNet", "--out", str(tmp_path / "m.json"),
        ])
        assert code == 2
        out = capsys.readouterr().out
        assert "unknown algorithm" in out
        for name in ("GradientBoosting", "AdaBoost", "KNNeighbors"):
            assert name in out

    def test_two_algorithms_rejected(self, data_dir, tmp_path):
        code = main([
            "train", "--seed", "1", "--data", str(data_dir),
            "--algorithms", "DecisionTree", "GaussianNB",
            "--out", str(tmp_path / "m.json"),
        ])
        assert code == 2

    def test_bad_csv_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("foo,bar\n1,2\n")
        code = main([
            "train", "--seed", "1", "--data", str(bad),
            "--algorithms", "DecisionTree", "--out", str(tmp_path / "m.json"),
        ])
        assert code == 3
        assert "error:" in capsys.readouterr().out

    def test_missing_data_path_is_usage_error(self, tmp_path):
        code = main([
            "train", "--seed", "1", "--data", str(tmp_path / "nowhere"),
            "--algorithms", "DecisionTree", "--out", str(tmp_path / "m.json"),
        ])
        assert code == 2


def _empty_velocity_csv(path):
    header = "t,velocity_kmh_raw,spd_lim,tfc_flw,traf_lig,tfc_sgn,toll_booth,curvature,slope"
    rows = [f"{i},,50,45,0,1,0,0.001,0.01" for i in range(12)]
    path.write_text(header + "\n" + "\n".join(rows) + "\n")


class TestEvaluate:
    def test_prints_class_table(self, model_file, data_dir, capsys):
        code = main([
            "evaluate", "--model", str(model_file), "--data", str(data_dir),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "Class" in out and "Weighted AVG" in out and "Accuracy:" in out

    def test_out_directory_reports(self, model_file, data_dir, tmp_path):
        out = tmp_path / "reports"
        code = main([
            "evaluate", "--model", str(model_file), "--data", str(data_dir),
            "--out", str(out),
        ])
        assert code == 0
        assert (out / "class_table.txt").is_file()
        doc = json.loads((out / "report.json").read_text())
        assert doc["format"] == "speedclass-evaluation"
        assert doc["algorithm"] == "DecisionTree"
        assert 0.0 <= doc["accuracy"] <= 1.0

    def test_feature_mismatch_is_data_error(self, model_file, data_dir, tmp_path, capsys):
        doc = json.loads(model_file.read_text())
        doc["feature_names"] = list(reversed(doc["feature_names"]))
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(doc))
        code = main([
            "evaluate", "--model", str(tampered), "--data", str(data_dir),
        ])
        assert code == 3
        assert "feature mismatch" in capsys.readouterr().out

    def test_empty_data_is_data_error(self, model_file, tmp_path, capsys):
        csv = tmp_path / "empty.csv"
        _empty_velocity_csv(csv)
        code = main(["evaluate", "--model", str(model_file), "--data", str(csv)])
        assert code == 3
        assert "empty" in capsys.readouterr().out

    def test_missing_model_file_is_data_error(self, data_dir, tmp_path):
        code = main([
            "evaluate", "--model", str(tmp_path / "missing.json"),
            "--data", str(data_dir),
        ])
        assert code == 3


class TestCompare:
    ARGS = ["compare", "--seed", "4", "--algorithms", "DecisionTree,GaussianNB"]

    def test_writes_tables_and_report(self, data_dir, tmp_path):
        out = tmp_path / "cmp"
        assert main(self.ARGS + ["--data", str(data_dir), "--out", str(out)]) == 0
        cv = (out / "cross_validation.txt").read_text()
        holdout = (out / "holdout_comparison.txt").read_text()
        assert "DecisionTree AVG" in cv and "GaussianNB STD" in cv
        assert "DecisionTree" in holdout and "GaussianNB" in holdout
        doc = json.loads((out / "report.json").read_text())
        assert doc["format"] == "speedclass-comparison"
        assert set(doc["algorithms"]) == {"DecisionTree", "GaussianNB"}
        for entry in doc["algorithms"].values():
            assert entry["cross_validation"]["metric_means"]["accuracy"] >= 0.0
            assert entry["holdout"]["accuracy"] >= 0.0

    def test_rerun_is_byte_identical(self, data_dir, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(self.ARGS + ["--data", str(data_dir), "--out", str(a)]) == 0
        assert main(self.ARGS + ["--data", str(data_dir), "--out", str(b)]) == 0
        for name in ("cross_validation.txt", "holdout_comparison.txt", "report.json"):
            assert filecmp.cmp(a / name, b / name, shallow=False), name

    def test_paper_fidelity_skips_knn_without_state(self, data_dir, tmp_path):
        out = tmp_path / "pf"
        args = [
            "compare", "--seed", "4", "--algorithms", "KNNeighbors,DecisionTree",
            "--paper-fidelity", "--data", str(data_dir), "--out", str(out),
        ]
        assert main(args) == 0
        cv = (out / "cross_validation.txt").read_text()
        holdout = (out / "holdout_comparison.txt").read_text()
        assert "KNNeighbors" not in cv
        assert "DecisionTree AVG" in cv
        assert "KNNeighbors" in holdout
        doc = json.loads((out / "report.json").read_text())
        assert doc["algorithms"]["KNNeighbors"]["cross_validation"] is None
        assert doc["algorithms"]["KNNeighbors"]["holdout"]["accuracy"] >= 0.0

    def test_fit_on_all_changes_reports(self, data_dir, tmp_path):
        a, b = tmp_path / "plain", tmp_path / "fit_all"
        base = ["compare", "--seed", "4", "--algorithms", "GaussianNB",
                "--data", str(data_dir)]
        assert main(base + ["--out", str(a)]) == 0
        assert main(base + ["--fit-on-all", "--out", str(b)]) == 0
        da = json.loads((a / "report.json").read_text())
        db = json.loads((b / "report.json").read_text())
        assert da["fit_on_all"] is False
        assert db["fit_on_all"] is True

    def test_bad_test_fraction_is_usage_error(self, data_dir, tmp_path):
        code = main(self.ARGS + [
            "--data", str(data_dir), "--out", str(tmp_path / "x"),
            "--test-fraction", "1.5",
        ])
        assert code == 2

    def test_single_fold_is_usage_error(self, data_dir, tmp_path):
        code = main(self.ARGS + [
            "--data", str(data_dir), "--out", str(tmp_path / "x"), "--folds", "1",
        ])
        assert code == 2

    def test_unknown_algorithm_is_usage_error(self, data_dir, tmp_path):
        code = main([
            "compare", "--seed", "4", "--algorithms", "Perceptron",
            "--data", str(data_dir), "--out", str(tmp_path / "x"),
        ])
        assert code == 2


def _read_columns(path):
    lines = path.read_text().splitlines()
    names = lines[0].split()
    data = np.array([[float(v) for v in line.split()] for line in lines[1:]])
    return names, data


class TestSimulate:
    def test_three_columns_without_model(self, tmp_path):
        out = tmp_path / "profile.txt"
        args = [
            "simulate", "--seed", "9", "--length-km", "2", "--out", str(out),
        ]
        assert main(args) == 0
        names, data = _read_columns(out)
        assert names == ["distance_m", "recorded_kmh", "rule_kmh"]
        assert data.shape[1] == 3
        assert np.all(np.diff(data[:, 0]) >= 0)  # distance never decreases

    def test_recorded_tracks_rule_within_noise(self, tmp_path, capsys):
        out = tmp_path / "profile.txt"
        args = [
            "simulate", "--seed", "9", "--length-km", "3",
            "--noise-amplitude", "3.0", "--out", str(out),
        ]
        assert main(args) == 0
        _, data = _read_columns(out)
        rmse = float(np.sqrt(np.mean((data[:, 1] - data[:, 2]) ** 2)))
        assert rmse <= 2.0 * 3.0
        assert "RMSE recorded vs rule-based" in capsys.readouterr().out

    def test_zero_noise_makes_recorded_equal_rule(self, tmp_path):
        out = tmp_path / "profile.txt"
        args = [
            "simulate", "--seed", "9", "--length-km", "2",
            "--noise-amplitude", "0", "--out", str(out),
        ]
        assert main(args) == 0
        _, data = _read_columns(out)
        np.testing.assert_array_equal(data[:, 1], data[:, 2])

    def test_model_adds_predicted_column(self, model_file, tmp_path, capsys):
        out = tmp_path / "profile.txt"
        args = [
            "simulate", "--seed", "9", "--length-km", "2",
            "--model", str(model_file), "--out", str(out),
        ]
        assert main(args) == 0
        names, data = _read_columns(out)
        assert names == ["distance_m", "recorded_kmh", "rule_kmh", "predicted_kmh"]
        # predictions are class midpoints: 5, 15, 25, ...
        assert np.all((data[:, 3] - 5.0) % 10.0 == 0.0)
        assert "RMSE recorded vs predicted" in capsys.readouterr().out

    def test_missing_model_is_usage_error(self, tmp_path, capsys):
        args = [
            "simulate", "--seed", "9", "--model", str(tmp_path / "none.json"),
            "--out", str(tmp_path / "p.txt"),
        ]
        assert main(args) == 2
        assert "does not exist" in capsys.readouterr().out

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        base = ["simulate", "--seed", "12", "--length-km", "2"]
        assert main(base + ["--out", str(a)]) == 0
        assert main(base + ["--out", str(b)]) == 0
        assert a.read_text() == b.read_text()
