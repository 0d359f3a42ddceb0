from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from mellinfrac.cli import RunConfig, main


def run(*args: str) -> subprocess.CompletedProcess[str]:
    return subprocess.run([sys.executable, "-m", "mellinfrac.cli", *args],
                          capture_output=True, text=True, check=False)


def test_integrate_example(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["integrate", "--f", "power:b=1", "--alpha", "0.5", "--c", "1",
                 "--x", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "x,re,im"
    x, re, im = (float(v) for v in lines[1].split(","))
    assert x == 1.0
    assert abs(re - 0.7071067811865476) < 1e-9
    assert im == 0.0


def test_differentiate_log(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["differentiate", "--f", "log_k:k=1", "--alpha", "0.5", "--c", "1",
                 "--x", "2.718281828459045"]) == 0
    re = float(capsys.readouterr().out.strip().splitlines()[1].split(",")[1])
    assert abs(re - 1.5) < 1e-6


def test_diffusion_alpha_two_exits_2() -> None:
    proc = run("solve", "--problem", "diffusion", "--alpha", "2", "--f", "log_gauss",
               "--grid", "0.5,2,5")
    assert proc.returncode == 2
    assert "cos(alpha*pi/4)" in proc.stderr


def test_bad_config_exits_2(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["integrate", "--f", "nosuch:b=1", "--alpha", "0.5", "--x", "1"]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_computation_error_exits_1(capsys: pytest.CaptureFixture[str]) -> None:
    # f = 1 at c = 0 has no Hadamard integral
    assert main(["integrate", "--f", "const", "--alpha", "0.5", "--c", "0", "--x", "1"]) == 1
    assert "Divergent" in capsys.readouterr().err


def test_config_round_trip(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["solve", "--problem", "diffusion", "--alpha", "4", "--f", "log_gauss",
                 "--grid", "0.5,2,5", "--echo-config"]) == 0
    first = capsys.readouterr().out
    path = tmp_path / "run.json"
    path.write_text(first)
    assert main(["solve", "--config", str(path), "--echo-config"]) == 0
    assert capsys.readouterr().out == first
    assert RunConfig.from_json(first).to_json() == first


def test_solve_outputs_deterministic(tmp_path: Path) -> None:
    args = ["solve", "--problem", "diffusion", "--alpha", "4", "--f", "log_gauss",
            "--grid", "0.5,2,9", "--y", "0.1,0.2"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([*args, "-o", str(a)]) == 0
    assert main([*args, "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "x,y,w"
    assert len(a.read_text().splitlines()) == 1 + 2 * 9
    meta = json.loads(a.with_suffix(".json").read_text())
    assert meta["alpha"] == 4.0
    assert meta["provenance"] == "spectral"


def test_verify_fundamental() -> None:
    proc = run("verify", "--suite", "fundamental")
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
    proc = run("verify", "--suite", "nosuch")
    assert proc.returncode == 2


if __name__ == "__main__":
    pytest.main([__file__, *sys.argv[1:]])
