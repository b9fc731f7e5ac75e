import json
import shutil
import subprocess
import sys

import pytest

from anonkit.cli import bundled_config, main, resolve_seed
from anonkit.errors import ConfigError


def run_cli(*argv):
    return main([str(a) for a in argv])


def test_run_single_technique_writes_three_files(tmp_path, capsys):
    assert run_cli("run", "--config", "ref_sensitive", "--technique", "generalize",
                   "--out", tmp_path) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["anonymized.csv", "report.json", "report.md"]
    doc = json.loads((tmp_path / "report.json").read_text("utf-8"))
    assert doc["technique"] == "generalize" and doc["seed"] == 42 and doc["runtime_ms"] is None
    cidade = next(c for c in doc["columns"] if c["name"] == "Cidade")
    assert cidade["loss_percent"] == 100.0
    md = (tmp_path / "report.md").read_text("utf-8")
    assert "| Cidade | 4.3 | 0.0 | 100.0% |" in md and "runtime:" in md
    assert "generalize: 250 rows" in capsys.readouterr().out


def test_run_all_writes_subdirectories(tmp_path):
    assert run_cli("run", "--config", "ref_sensitive", "--out", tmp_path, "--n", 60) == 0
    for technique in ("aggregate", "generalize", "perturb", "kanon"):
        assert (tmp_path / technique / "report.json").is_file()
    kanon = json.loads((tmp_path / "kanon" / "report.json").read_text("utf-8"))
    assert kanon["k_achieved"] >= 5


def test_run_is_byte_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run_cli("run", "--config", "ref_sensitive", "--technique", "kanon",
                       "--out", tmp_path / d) == 0
    for name in ("anonymized.csv", "report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_record_runtime(tmp_path):
    run_cli("run", "--config", "ref_personal", "--technique", "aggregate",
            "--out", tmp_path, "--record-runtime")
    assert json.loads((tmp_path / "report.json").read_text("utf-8"))["runtime_ms"] > 0


def test_bad_config_exits_3_with_path(tmp_path, capsys):
    cfg = json.loads(bundled_config("ref_personal").read_text("utf-8"))
    cfg["k"] = 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cfg), "utf-8")
    assert run_cli("run", "--config", bad, "--out", tmp_path / "o") == 3
    assert "/k" in capsys.readouterr().err


def test_missing_config_is_io_error(tmp_path):
    assert run_cli("run", "--config", tmp_path / "nope.json", "--out", tmp_path) == 8


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as err:
        run_cli("run", "--technique", "generalize")
    assert err.value.code == 2


def test_run_with_input_csv(tmp_path):
    data = tmp_path / "data.csv"
    assert run_cli("generate", "--n", 40, "--seed", 7, "--variant", "personal", "--out", data) == 0
    assert run_cli("run", "--config", "ref_personal", "--input", data,
                   "--technique", "aggregate", "--out", tmp_path / "o") == 0
    header = (tmp_path / "o" / "anonymized.csv").read_text("utf-8").splitlines()[0]
    assert header == "Faixa Etária,Cidade,Estado,Estado Civil,Cor"


def test_bad_input_cell_exits_4(tmp_path):
    data = tmp_path / "data.csv"
    run_cli("generate", "--n", 5, "--variant", "personal", "--out", data)
    text = data.read_text("utf-8").splitlines()
    text[1] = text[1] + ",extra"
    data.write_text("\n".join(text) + "\n", "utf-8")
    assert run_cli("run", "--config", "ref_personal", "--input", data, "--out", tmp_path / "o") == 4


def test_generate_to_stdout_is_deterministic(capfdbinary):
    run_cli("generate", "--n", 5, "--seed", 1)
    first = capfdbinary.readouterr().out
    run_cli("generate", "--n", 5, "--seed", 1)
    assert capfdbinary.readouterr().out == first
    assert first.decode("utf-8").count("\n") == 6


def test_evaluate_and_verify_k(tmp_path, capsys):
    run_cli("run", "--config", "ref_sensitive", "--technique", "kanon", "--out", tmp_path)
    data = tmp_path / "orig.csv"
    run_cli("generate", "--n", 250, "--seed", 42, "--out", data)
    capsys.readouterr()
    assert run_cli("evaluate", "--original", data, "--anonymized", tmp_path / "anonymized.csv",
                   "--schema", "ref_sensitive", "--format", "json", "--label", "kanon") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["technique"] == "kanon"
    assert next(c for c in doc["columns"] if c["name"] == "CPF")["loss_percent"] == 100.0

    qi = "Faixa Etária,Cidade,Estado,Estado Civil,Cor"
    assert run_cli("verify-k", "--input", tmp_path / "anonymized.csv", "--qi", qi, "--k", 5) == 0
    assert run_cli("verify-k", "--input", data, "--qi", qi, "--k", 5) == 1
    assert "NOT k-anonymous" in capsys.readouterr().out
    assert run_cli("verify-k", "--input", data, "--qi", "Renda", "--k", 2) == 4


def test_infeasible_k_exits_7(tmp_path):
    assert run_cli("run", "--config", "ref_sensitive", "--technique", "kanon", "--n", 10,
                   "--k", 11, "--out", tmp_path) == 7


def test_seed_precedence(monkeypatch):
    monkeypatch.delenv("ANONKIT_SEED", raising=False)
    assert resolve_seed(None, None) == 0
    monkeypatch.setenv("ANONKIT_SEED", "9")
    assert resolve_seed(None, None) == 9
    assert resolve_seed(None, 5) == 5
    assert resolve_seed(3, 5) == 3
    monkeypatch.setenv("ANONKIT_SEED", "x")
    with pytest.raises(ConfigError):
        resolve_seed(None, None)


def test_cli_seed_overrides_config(tmp_path):
    run_cli("run", "--config", "ref_personal", "--technique", "generalize", "--out", tmp_path,
            "--seed", 123)
    assert json.loads((tmp_path / "report.json").read_text("utf-8"))["seed"] == 123


@pytest.mark.skipif(shutil.which("anonkit") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["anonkit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("anonkit ")
    proc = subprocess.run([sys.executable, "-m", "anonkit.cli", "verify-k", "--input",
                           str(tmp_path / "missing.csv"), "--qi", "a", "--k", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 8
