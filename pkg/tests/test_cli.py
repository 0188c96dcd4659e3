import json
import subprocess
import sys
from pathlib import Path

import pytest

from biphoton.cli import main
from biphoton.runner import COMMANDS

GOLDEN = Path(__file__).parent / "golden"


def _run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


@pytest.fixture(autouse=True)
def _no_env_output_dir(monkeypatch):
    monkeypatch.delenv("BIPHOTON_OUTPUT_DIR", raising=False)


@pytest.mark.parametrize("command", COMMANDS)
def test_matches_golden(command, tmp_path, capsys):
    status, out, _ = _run(capsys, command, "--out", str(tmp_path))
    assert status == 0
    expected = sorted(p.name for p in (GOLDEN / command).iterdir())
    assert sorted(p.name for p in tmp_path.iterdir()) == expected
    for name in expected:
        assert (tmp_path / name).read_bytes() == (GOLDEN / command / name).read_bytes(), name
    summary_file = tmp_path / f"{command.replace('-', '_')}.json"
    assert json.loads(out) == json.loads(summary_file.read_text())


@pytest.mark.parametrize("command", ["delay-scan", "mz-scan", "wavefunction"])
def test_rerun_is_byte_identical(command, tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("spectrum: {model: sinc}\nscan: {start: -100 fs, stop: 100 fs, mask_delays: [50 fs]}\n")
    for name in ("a", "b"):
        assert _run(capsys, command, "--config", str(cfg), "--out", str(tmp_path / name))[0] == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_seed_changes_counts_only(tmp_path, capsys):
    _run(capsys, "pi-step", "--out", str(tmp_path / "a"))
    _run(capsys, "pi-step", "--out", str(tmp_path / "b"), "--seed", str(2**64 - 1))
    a = (tmp_path / "a" / "pi_step.csv").read_text().splitlines()
    b = (tmp_path / "b" / "pi_step.csv").read_text().splitlines()
    assert a != b
    assert [r.split(",")[:2] for r in a] == [r.split(",")[:2] for r in b]


def test_env_sets_default_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("BIPHOTON_OUTPUT_DIR", str(tmp_path / "env"))
    assert _run(capsys, "info")[0] == 0
    assert (tmp_path / "env" / "info.json").exists()
    assert _run(capsys, "info", "--out", str(tmp_path / "flag"))[0] == 0
    assert (tmp_path / "flag" / "info.json").exists()


def _one_line_error(err, kind):
    lines = err.strip().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith(f"error[{kind}]: ")
    return lines[0]


@pytest.mark.parametrize("text, needle", [
    ("spectrum: {bandwidth: -3 nm}", "spectrum.bandwidth"),
    ("spectrum: {colour: blue}", "spectrum.colour"),
    ("spectrum: [unclosed", "malformed"),
])
def test_config_errors_exit_2(text, needle, tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text(text)
    status, out, err = _run(capsys, "info", "--config", str(cfg), "--out", str(tmp_path))
    assert status == 2 and out == ""
    assert needle in _one_line_error(err, "config")


def test_missing_config_exits_2(tmp_path, capsys):
    status, _, err = _run(capsys, "info", "--config", str(tmp_path / "nope.yaml"))
    assert status == 2
    _one_line_error(err, "config")


def test_bad_seed_exits_2(tmp_path, capsys):
    status, _, err = _run(capsys, "info", "--seed", str(2**64), "--out", str(tmp_path))
    assert status == 2
    assert "--seed" in _one_line_error(err, "config")


def test_missing_mask_file_exits_3(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(f"mask: {{kind: file, path: {tmp_path / 'absent.txt'}}}\n")
    status, _, err = _run(capsys, "wavefunction", "--config", str(cfg), "--out", str(tmp_path))
    assert status == 3
    assert "wavefunction" in _one_line_error(err, "runtime")


def test_unwritable_output_exits_3(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    status, _, err = _run(capsys, "info", "--out", str(blocker / "sub"))
    assert status == 3
    _one_line_error(err, "runtime")


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "biphoton", "regime", "--out", str(tmp_path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["verdict"] == "ENTANGLED_PAIR_COINCIDENCE"


def test_regenerate_script_reproduces_golden(tmp_path):
    script = Path(__file__).parent.parent / "scripts" / "regenerate_golden.py"
    proc = subprocess.run([sys.executable, str(script), "--dest", str(tmp_path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    for path in GOLDEN.rglob("*"):
        if path.is_file():
            assert (tmp_path / path.relative_to(GOLDEN)).read_bytes() == path.read_bytes()
