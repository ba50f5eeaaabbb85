"""
실험 명령 통합 테스트

bench-regret / bench-offline / bench-scale의 산출물과 재현성을 검증합니다.
"""

import csv
import json

import pytest

from chmcts.main import main


@pytest.fixture(autouse=True)
def _work_in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def _rows(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def _bench_regret(out_dir, workers: str = "1") -> int:
    return main(
        [
            "bench-regret",
            "--fixture",
            "theorem1",
            "--strategy",
            "zooming",
            "--strategy",
            "hypervolume",
            "--trials",
            "300",
            "--replications",
            "2",
            "--seed",
            "3",
            "--workers",
            workers,
            "--out",
            str(out_dir),
        ]
    )


@pytest.mark.integration
class TestRegretExperiment:
    """bench-regret"""

    def test_outputs(self, tmp_path, capsys):
        assert _bench_regret(tmp_path / "run") == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["status"] == "ok"

        out = tmp_path / "run"
        rows = _rows(out / "regret.csv")
        assert list(rows[0]) == ["trial", "strategy", "replication", "context_w0", "cum_regret"]
        assert len(rows) == 2 * 2 * 300
        assert rows[0]["trial"] == "1"
        assert {r["strategy"] for r in rows} == {"zooming", "hypervolume"}
        assert (out / "regret.svg").is_file()
        assert (out / "run-manifest.json").is_file()

        document = json.loads((out / "regret-summary.json").read_text())
        assert document["ground_truth"]["ccs"] == [[1.0, 0.0], [0.0, 1.0]]
        assert {s["strategy"] for s in document["summaries"]} == {"zooming", "hypervolume"}

    def test_common_contexts(self, tmp_path):
        assert _bench_regret(tmp_path / "run") == 0
        rows = _rows(tmp_path / "run" / "regret.csv")
        by_strategy = {
            strategy: [r["context_w0"] for r in rows if r["strategy"] == strategy]
            for strategy in ("zooming", "hypervolume")
        }
        assert by_strategy["zooming"] == by_strategy["hypervolume"]

    def test_same_seed_same_bytes(self, tmp_path):
        assert _bench_regret(tmp_path / "first") == 0
        assert _bench_regret(tmp_path / "second") == 0
        first = (tmp_path / "first" / "regret.csv").read_bytes()
        assert first == (tmp_path / "second" / "regret.csv").read_bytes()

    @pytest.mark.slow
    def test_worker_count_does_not_change_results(self, tmp_path):
        assert _bench_regret(tmp_path / "inline", workers="1") == 0
        assert _bench_regret(tmp_path / "pool", workers="2") == 0
        inline = (tmp_path / "inline" / "regret.csv").read_bytes()
        assert inline == (tmp_path / "pool" / "regret.csv").read_bytes()

    @pytest.mark.slow
    def test_zooming_regret_vanishes_on_theorem1(self, tmp_path):
        """마지막 10⁴ 시행의 평균 LCR < 0.05 (10⁵ 시행)"""
        out = tmp_path / "theorem1"
        code = main(
            [
                "bench-regret",
                "--fixture",
                "theorem1",
                "--strategy",
                "zooming",
                "--trials",
                "100000",
                "--replications",
                "1",
                "--seed",
                "0",
                "--workers",
                "1",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        cumulative = [float(r["cum_regret"]) for r in _rows(out / "regret.csv")]
        assert len(cumulative) == 100000
        assert (cumulative[-1] - cumulative[-10001]) / 10000 < 0.05

    @pytest.mark.slow
    def test_sublinear_regret_on_gdst7(self, tmp_path):
        """GDST(7, 0.01): zooming만 마지막 10% 평균 후회가 처음 10%의 절반 미만"""
        config = tmp_path / "regret.json"
        config.write_text(
            json.dumps(
                {
                    "experiment": "regret",
                    "instance": {"columns": 7, "noise": 0.01},
                    "strategies": ["zooming", "hypervolume", "pareto-ucb"],
                    "trials": 100000,
                    "replications": 5,
                }
            )
        )
        out = tmp_path / "gdst7"
        code = main(
            ["bench-regret", "--config", str(config), "--workers", "0", "--out", str(out)]
        )
        assert code == 0

        document = json.loads((out / "regret-summary.json").read_text())
        ratios = {s["strategy"]: s["decile_ratio"] for s in document["summaries"]}
        assert ratios["zooming"] < 0.5
        assert ratios["hypervolume"] >= 0.75
        assert ratios["pareto-ucb"] >= 0.75


@pytest.mark.integration
class TestOfflineExperiment:
    """bench-offline"""

    def test_outputs_with_chvi_row(self, tmp_path):
        config = tmp_path / "offline.json"
        config.write_text(
            json.dumps(
                {
                    "experiment": "offline",
                    "instance": {"columns": 3, "seed": 1, "horizon": 8},
                    "strategies": ["zooming", "chebychev"],
                    "backup_budget": 400,
                    "checkpoints": 8,
                    "replications": 1,
                }
            )
        )
        out = tmp_path / "offline"
        code = main(["bench-offline", "--config", str(config), "--workers", "1", "--out", str(out)])
        assert code == 0

        rows = _rows(out / "offline.csv")
        assert list(rows[0]) == ["backups", "strategy", "replication", "hypervolume"]
        zooming = [r for r in rows if r["strategy"] == "zooming"]
        assert [int(r["backups"]) for r in zooming] == [50, 100, 150, 200, 250, 300, 350, 400]
        (chvi,) = [r for r in rows if r["strategy"] == "chvi"]
        for row in zooming:
            assert float(row["hypervolume"]) <= float(chvi["hypervolume"]) + 1e-9

    def test_wrong_experiment_in_config(self, tmp_path, capsys):
        config = tmp_path / "scale.json"
        config.write_text(json.dumps({"experiment": "scale", "columns": [3], "backup_budget": 5}))
        code = main(["bench-offline", "--config", str(config), "--out", str(tmp_path / "o")])
        assert code == 1
        assert json.loads(capsys.readouterr().out)["status"] == "failed"


@pytest.mark.integration
class TestScaleExperiment:
    """bench-scale"""

    def test_ratios(self, tmp_path):
        config = tmp_path / "scale.json"
        config.write_text(
            json.dumps(
                {
                    "experiment": "scale",
                    "instance": {"seed": 2, "horizon": 12},
                    "strategies": ["zooming"],
                    "backup_budget": 200,
                }
            )
        )
        out = tmp_path / "scale"
        code = main(
            [
                "bench-scale",
                "--config",
                str(config),
                "--columns",
                "3-4",
                "--noise",
                "0",
                "0.01",
                "--workers",
                "1",
                "--out",
                str(out),
            ]
        )
        assert code == 0

        rows = _rows(out / "scale.csv")
        assert list(rows[0]) == ["columns", "noise", "strategy", "ratio", "replication"]
        assert {(r["columns"], r["noise"]) for r in rows} == {
            ("3", "0.0"),
            ("3", "0.01"),
            ("4", "0.0"),
            ("4", "0.01"),
        }
        for row in rows:
            assert 0.0 <= float(row["ratio"]) <= 1.0 + 1e-9
        for row in rows:
            if row["strategy"] == "chvi" and row["noise"] == "0.0":
                assert float(row["ratio"]) == pytest.approx(1.0, abs=1e-6)

        summary = json.loads((out / "scale-summary.json").read_text())
        assert set(summary["ground_truth"]["reference_hypervolume"]) == {"3", "4"}
