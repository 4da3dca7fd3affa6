"""Command line behavior: exit codes, stderr messages, artifact listing."""

import subprocess
import sys

from conftest import GRID, TAIL_ROWS, write_artifact

from polycond_report.cli import main


def test_successful_render_lists_outputs(tail_dir, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main(["--in", str(tail_dir), "--out", str(out_dir)])
    captured = capsys.readouterr()
    assert code == 0
    lines = captured.out.strip().splitlines()
    assert lines == [str(out_dir / "tail_small.svg"), str(out_dir / "summary.html")]
    assert (out_dir / "summary.html").is_file()


def test_empty_input_dir_exits_nonzero(tmp_path, capsys):
    empty = tmp_path / "in"
    empty.mkdir()
    code = main(["--in", str(empty), "--out", str(tmp_path / "out")])
    captured = capsys.readouterr()
    assert code == 2
    assert "nothing to render" in captured.err
    assert not (tmp_path / "out").exists()


def test_schema_error_exits_nonzero_naming_column(tmp_path, capsys):
    d = tmp_path / "in"
    d.mkdir()
    cols = ["epsilon_or_delta", "guess", "ci_low", "ci_high", "trials"]
    write_artifact(d, "bad", "tail", cols, TAIL_ROWS)
    code = main(["--in", str(d), "--out", str(tmp_path / "out")])
    captured = capsys.readouterr()
    assert code == 2
    assert "missing column 'estimate'" in captured.err


def test_module_entry_point(tail_dir, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "polycond_report.cli",
         "--in", str(tail_dir), "--out", str(tmp_path / "out")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "summary.html" in proc.stdout


def test_help_mentions_flags():
    proc = subprocess.run(
        [sys.executable, "-m", "polycond_report.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "--in" in proc.stdout and "--out" in proc.stdout
