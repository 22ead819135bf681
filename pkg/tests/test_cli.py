from __future__ import annotations

import json

from monobreak.cli import THREADS_ENV, main

from .conftest import OPS_JSON, ORDERS_DEMO
from .test_report import EXPECTED_TEXT


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_with_ops_reproduces_published_output(capsys):
    code, out, err = run_cli(
        capsys, "analyze", str(ORDERS_DEMO), "--ops", str(OPS_JSON)
    )
    assert code == 0
    assert out == EXPECTED_TEXT
    assert "GraphNumber" not in err


def test_static_only_and_ops_are_mutually_exclusive(capsys):
    code, out, err = run_cli(
        capsys, "analyze", str(ORDERS_DEMO), "--static-only", "--ops", str(OPS_JSON)
    )
    assert code == 1
    assert out == ""
    assert "mutually exclusive" in err


def test_static_only_mode_and_dot_without_dynamic_edge(capsys, tmp_path):
    dot_file = tmp_path / "graph.dot"
    code, out, err = run_cli(
        capsys,
        "analyze",
        str(ORDERS_DEMO),
        "--static-only",
        "--format",
        "json",
        "--dot",
        str(dot_file),
    )
    assert code == 0
    data = json.loads(out)
    assert data["mode"] == "static_only"
    dot = dot_file.read_text()
    assert '"models.Item" -- "views.ViewItem"' in dot
    assert '"models.Item" -- "views.ViewOrder"' not in dot
    assert "green" not in dot


def test_combined_dot_contains_dynamic_edge(capsys, tmp_path):
    dot_file = tmp_path / "graph.dot"
    code, _, _ = run_cli(
        capsys,
        "analyze",
        str(ORDERS_DEMO),
        "--ops",
        str(OPS_JSON),
        "--dot",
        str(dot_file),
    )
    assert code == 0
    assert '"models.Item" -- "views.ViewOrder"' in dot_file.read_text()


def test_missing_project_directory_fails(capsys, tmp_path):
    code, out, err = run_cli(capsys, "analyze", str(tmp_path / "gone"))
    assert code == 1
    assert out == ""
    assert "error:" in err


def test_unreadable_ops_file_fails(capsys, tmp_path):
    bad = tmp_path / "ops.json"
    bad.write_text("{broken")
    code, out, err = run_cli(capsys, "analyze", str(ORDERS_DEMO), "--ops", str(bad))
    assert code == 1
    assert out == ""
    assert "error:" in err


def test_json_format(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", str(ORDERS_DEMO), "--ops", str(OPS_JSON), "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    assert len(data["services"]) == 2
    assert data["services"][1]["shared"] == ["models.Item"]


def test_services_target(capsys):
    code, out, _ = run_cli(
        capsys,
        "analyze",
        str(ORDERS_DEMO),
        "--ops",
        str(OPS_JSON),
        "--services",
        "3",
        "--format",
        "json",
    )
    assert code == 0
    assert len(json.loads(out)["services"]) == 3


def test_services_target_too_large_fails(capsys):
    code, _, err = run_cli(
        capsys, "analyze", str(ORDERS_DEMO), "--services", "99"
    )
    assert code == 1
    assert "99" in err


def test_unweighted_betweenness_flag_accepted(capsys):
    code, out, _ = run_cli(
        capsys,
        "analyze",
        str(ORDERS_DEMO),
        "--ops",
        str(OPS_JSON),
        "--unweighted-betweenness",
    )
    assert code == 0
    assert out == EXPECTED_TEXT


def test_warnings_go_to_stderr_not_stdout(capsys):
    code, out, err = run_cli(
        capsys, "analyze", str(ORDERS_DEMO), "--ops", str(OPS_JSON)
    )
    assert code == 0
    assert "warning:" not in out
    assert "warning:" in err


def test_repeat_runs_are_byte_identical(capsys):
    _, first, _ = run_cli(capsys, "analyze", str(ORDERS_DEMO), "--ops", str(OPS_JSON))
    _, second, _ = run_cli(capsys, "analyze", str(ORDERS_DEMO), "--ops", str(OPS_JSON))
    assert first == second


def test_invalid_threads_env_fails(capsys, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "lots")
    code, _, err = run_cli(capsys, "analyze", str(ORDERS_DEMO))
    assert code == 1
    assert THREADS_ENV in err


def test_zero_threads_env_fails(capsys, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "0")
    code, _, err = run_cli(capsys, "analyze", str(ORDERS_DEMO))
    assert code == 1
    assert "thread count" in err


def test_threads_env_respected(capsys, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "4")
    code, out, _ = run_cli(capsys, "analyze", str(ORDERS_DEMO), "--ops", str(OPS_JSON))
    assert code == 0
    assert out == EXPECTED_TEXT


def test_config_file_extends_bases_and_ignores(capsys, tmp_path):
    project = tmp_path / "proj"
    (project / "vendor").mkdir(parents=True)
    (project / "vendor" / "junk.py").write_text("class Junk(BaseHandler): pass\n")
    (project / "api.py").write_text(
        "from .store import Store\n\n"
        "class Endpoint(BaseHandler):\n    data = Store.objects.all()\n"
    )
    (project / "store.py").write_text("class Store(CustomModel):\n    pass\n")
    config = tmp_path / "monobreak.toml"
    config.write_text(
        '[scanner]\nextra_model_bases = ["CustomModel"]\n'
        'extra_view_bases = ["BaseHandler"]\nignore_dirs = ["vendor"]\n'
    )
    code, out, _ = run_cli(
        capsys,
        "analyze",
        str(project),
        "--config",
        str(config),
        "--format",
        "json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["totals"] == {"files": 2, "views": 1, "models": 1}
    (service,) = data["services"]
    assert service["files"] == ["api.Endpoint", "store.Store"]


def test_invalid_config_fails(capsys, tmp_path):
    config = tmp_path / "bad.toml"
    config.write_text("[scanner\n")
    code, _, err = run_cli(
        capsys, "analyze", str(ORDERS_DEMO), "--config", str(config)
    )
    assert code == 1
    assert "error:" in err


def test_empty_project_reports_zero_totals(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "analyze", str(tmp_path))
    assert code == 0
    assert out == "Total Files: 0\nDjango_Views: 0\nDjango_Models: 0\n"
