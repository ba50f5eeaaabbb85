"""
CLI 통합 테스트

main(argv)로 명령을 실행하고 종료 코드, stdout 요약 JSON, 출력 파일을 검증합니다.
"""

import json

import pytest

from chmcts.main import main


@pytest.fixture(autouse=True)
def _work_in_tmp(tmp_path, monkeypatch):
    """기본 출력 디렉토리(results/)가 작업 디렉토리 아래에 생기므로 임시 디렉토리에서 실행"""
    monkeypatch.chdir(tmp_path)


def _run(capsys, *argv: str) -> tuple[int, dict | None]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.mark.integration
class TestSolveCommand:
    """solve 명령"""

    def test_solve_example1(self, capsys, tmp_path):
        out = tmp_path / "solution.json"
        code, summary = _run(
            capsys,
            "solve",
            "--fixture",
            "example1",
            "--out",
            str(out),
            "--front-csv",
            str(tmp_path / "front.csv"),
            "--weights",
            "0.5",
            "0.5",
        )
        assert code == 0
        assert summary["status"] == "ok"
        assert summary["result"]["backup_count"] == 8
        assert json.loads(out.read_text())["root_ccs"] == [[6.0, 0.0], [0.0, 6.0]]
        assert (tmp_path / "front.csv").read_text().splitlines() == ["v0,v1", "6.0,0.0", "0.0,6.0"]

        manifest = json.loads((tmp_path / "run-manifest.json").read_text())
        assert manifest["command"] == "solve"
        assert manifest["run_id"] == summary["run_id"]

    def test_missing_model_file(self, capsys, tmp_path):
        code, summary = _run(capsys, "solve", "--model", str(tmp_path / "nope.json"))
        assert code == 1
        assert summary["status"] == "failed"

    def test_model_and_fixture_are_exclusive(self, capsys):
        code, summary = _run(capsys, "solve", "--fixture", "example1", "--model", "x.json")
        assert code == 1
        assert summary is None


@pytest.mark.integration
class TestSearchCommand:
    """search 명령"""

    def test_search_matches_exact(self, capsys, tmp_path):
        code, summary = _run(
            capsys,
            "search",
            "--fixture",
            "example1",
            "--strategy",
            "chebychev",
            "--trials",
            "3000",
            "--compare-exact",
            "--seed",
            "4",
            "--out",
            str(tmp_path / "search.json"),
        )
        assert code == 0
        assert summary["result"]["matches_exact"] is True
        manifest = json.loads((tmp_path / "run-manifest.json").read_text())
        assert manifest["master_seed"] == 4

    def test_budget_required(self, capsys):
        code, _ = _run(capsys, "search", "--fixture", "example1")
        assert code == 1

    def test_unknown_strategy(self, capsys):
        code, _ = _run(
            capsys, "search", "--fixture", "example1", "--strategy", "x", "--trials", "5"
        )
        assert code == 1

    def test_zero_budget(self, capsys):
        code, summary = _run(capsys, "search", "--fixture", "theorem1", "--trials", "0")
        assert code == 2
        assert summary["exit_code"] == 2


@pytest.mark.integration
class TestGenEnvAndFixtures:
    """gen-env / fixtures 명령"""

    def test_gen_env_then_solve(self, capsys, tmp_path):
        model = tmp_path / "gdst.json"
        code, summary = _run(
            capsys, "gen-env", "--columns", "3", "--horizon", "10", "--out", str(model), "--ascii"
        )
        assert code == 0
        assert summary["result"]["columns"] == 3
        assert (tmp_path / "gdst.meta.json").is_file()

        code, summary = _run(capsys, "solve", "--model", str(model))
        assert code == 0
        assert len(summary["result"]["front"]["points"]) >= 1

    def test_fixture_listing(self, capsys):
        code, summary = _run(capsys, "fixtures")
        assert code == 0
        assert {"example1", "theorem1"} <= {entry["name"] for entry in summary["result"]}

    def test_fixture_export(self, capsys, tmp_path):
        out = tmp_path / "exported" / "theorem1.json"
        code, _ = _run(capsys, "fixtures", "--name", "theorem1", "--out", str(out))
        assert code == 0
        assert json.loads(out.read_text())["num_states"] == 3

    def test_out_needs_name(self, capsys, tmp_path):
        code, _ = _run(capsys, "fixtures", "--out", str(tmp_path / "x.json"))
        assert code == 1


@pytest.mark.integration
class TestBenchArguments:
    """bench-* 명령의 사용 오류"""

    def test_missing_config(self, capsys, tmp_path):
        code, summary = _run(
            capsys, "bench-regret", "--config", str(tmp_path / "missing.json"), "--workers", "1"
        )
        assert code == 1
        assert summary["status"] == "failed"

    def test_unknown_flag(self, capsys):
        code, _ = _run(capsys, "bench-regret", "--fixture", "example1", "--bogus")
        assert code == 1

    def test_bad_column_range(self, capsys):
        code, _ = _run(capsys, "bench-scale", "--columns", "9-3", "--backup-budget", "10")
        assert code == 1

    def test_unknown_command(self, capsys):
        code, _ = _run(capsys, "train")
        assert code == 1
