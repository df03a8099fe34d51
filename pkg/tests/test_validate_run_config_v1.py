import json
import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def _run(path: Path) -> subprocess.CompletedProcess:
    env = {**os.environ, "PYTHONPATH": str(ROOT)}
    return subprocess.run(
        [sys.executable, "scripts/validate_run_config_v1.py", "--path", str(path)],
        cwd=ROOT,
        env=env,
        capture_output=True,
        text=True,
    )


def test_example_validates():
    p = _run(ROOT / "docs" / "examples" / "run_config.v1.example.json")
    assert p.returncode == 0, p.stdout + p.stderr
    assert "OK: run_config.v1 valid" in p.stdout


def test_invalid_doc_lists_errors(tmp_path):
    doc = {
        "schema": "fracmap.run_config.v1",
        "subcommand": "orbit",
        "orbit": {"q": 2.0},
        "threads": 0,
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    p = _run(path)
    assert p.returncode == 1
    assert "ERR: run_config.v1 validation failed:" in p.stdout
    assert "- orbit.q must be in (0, 1]" in p.stdout
    assert '- threads must be an integer >= 1 or "auto"' in p.stdout


def test_unreadable_file(tmp_path):
    p = _run(tmp_path / "missing.json")
    assert p.returncode == 1
    assert p.stdout.startswith("ERR: cannot read")
