import subprocess
import sys

import pytest

from rnldpc.channel_sim import CSV_HEADER
from rnldpc.cli import build_parser, run_cli


def test_encode_t1(tmp_path, capsys):
    src = tmp_path / "src.txt"
    src.write_text("1 2 3\n")
    assert run_cli(["encode", "--code", "t1", "--in", str(src)]) == 0
    assert capsys.readouterr().out == "1 2 3 3 8 12\n"


def test_encode_binary_and_decode_roundtrip(tmp_path, capsys):
    src = tmp_path / "src.txt"
    src.write_text("1 0 1\n")
    assert run_cli(["encode", "--code", "t1", "--variant", "binary", "--in", str(src)]) == 0
    assert capsys.readouterr().out == "1 0 1 1 0 0\n"
    rx = tmp_path / "rx.txt"
    rx.write_text("6 2 3 3 8 12\n")
    out = tmp_path / "dec.txt"
    assert run_cli(["decode", "--code", "t1", "--in", str(rx), "--out", str(out)]) == 0
    assert out.read_text() == "1 2 3 3 8 12\n"


def test_expand_base_file(tmp_path, capsys):
    base = tmp_path / "b.txt"
    base.write_text("2 2 1\n1 0\n")
    assert run_cli(["expand", "--base", str(base), "--variant", "binary"]) == 0
    assert capsys.readouterr().out.split("\n")[:-1] == ["0 1 1", "0 2 1", "1 0 1", "1 3 1"]


def test_complexity_output(capsys):
    assert run_cli(["complexity", "--code", "wifi-r23"]) == 0
    out = capsys.readouterr().out
    assert "syndrome (ADD)" in out and "2403" in out


def test_simulate_alpha_zero(capsys):
    assert run_cli(["simulate", "--code", "t1", "--alphas", "0", "--frames", "50",
                    "--workers", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1].split(",")[6] == "0.0"


def test_simulate_byte_identical(tmp_path):
    args = ["simulate", "--code", "wifi-r23", "--decoder", "gdsu", "--alphas", "0.005",
            "--frames", "1000", "--seed", "7", "--workers", "1"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    [],
    ["simulate", "--code", "t1"],
    ["simulate", "--code", "t1", "--alphas", "0.1", "--frames", "0"],
    ["simulate", "--code", "nope", "--alphas", "0.1"],
    ["simulate", "--code", "t1", "--base", "x", "--alphas", "0.1"],
    ["simulate", "--code", "t1", "--alphas", "a,b"],
    ["simulate", "--code", "t1", "--alphas", "0.1", "--amp-model", "constant:-2"],
    ["encode", "--code", "t1", "--variant", "complex"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run_cli(argv) == 2


def test_runtime_errors_exit_1(tmp_path, capsys):
    assert run_cli(["encode", "--code", "t1", "--in", str(tmp_path / "missing.txt")]) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2 1\n7 0\n")
    assert run_cli(["expand", "--base", str(bad)]) == 1
    assert "shift 7 >= z=3" in capsys.readouterr().err
    short = tmp_path / "short.txt"
    short.write_text("1 2\n")
    assert run_cli(["encode", "--code", "t1", "--in", str(short)]) == 1
    assert run_cli(["simulate", "--code", "t1", "--alphas", "1.5"]) == 1


def test_help_lists_every_flag():
    sub = build_parser()._subparsers._group_actions[0].choices
    text = sub["simulate"].format_help()
    for flag in ("--code", "--base", "--decoder", "--alphas", "--frames", "--max-iters", "--beta",
                 "--t", "--seed", "--workers", "--quantize-bits", "--quantize-scale",
                 "--amp-model", "--source", "--out", "--consensus"):
        assert flag in text
    assert "default: 300" in text


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "rnldpc", "encode", "--code", "t1"],
                         input="1 2 3\n", capture_output=True, text=True, check=True)
    assert out.stdout == "1 2 3 3 8 12\n"
