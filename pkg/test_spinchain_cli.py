#!/usr/bin/env python3
"""
Tests for spinchain_cli.py and config.py
Runs the command line in-process against a temporary working directory
"""

import math
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pandas as pd
import pytest

import spinchain_cli
from config import SpinchainConfig
from spin_model import ModelParams
from entanglement import thermal_concurrence
from spinchain_cli import (
    EXIT_OK,
    EXIT_OUTPUT,
    EXIT_USAGE,
    main,
    run_verification,
)

FIG5_PLATEAU = 0.8 / math.sqrt(4.64)


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    """Run every command from an empty directory with progress bars off"""
    monkeypatch.chdir(tmp_path)
    for name in ("SPINCHAIN_THREADS", "SPINCHAIN_T_SCAN_POINTS", "SPINCHAIN_ZERO_THRESHOLD",
                 "SPINCHAIN_ORACLE_STRIDE", "SPINCHAIN_LOG_LEVEL", "SPINCHAIN_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("SPINCHAIN_PROGRESS", "false")
    monkeypatch.setenv("SPINCHAIN_OUTPUT_DIR", str(tmp_path / "out"))
    return tmp_path


# ==================== Configuration ====================

def test_config_from_env(monkeypatch):
    monkeypatch.setenv("SPINCHAIN_THREADS", "3")
    monkeypatch.setenv("SPINCHAIN_LOG_LEVEL", "debug")
    config = SpinchainConfig.from_env()
    assert config.threads == 3
    assert config.worker_count == 3
    assert config.log_level == "DEBUG"
    assert config.progress is False
    assert config.validate()
    assert "Spin-Chain Entanglement Configuration" in str(config)


def test_config_from_env_file(workspace):
    (workspace / ".env").write_text("SPINCHAIN_ORACLE_STRIDE=11\n")
    assert SpinchainConfig.from_env().oracle_stride == 11


def test_config_validation_collects_errors():
    config = SpinchainConfig(threads=-1, t_scan_points=1, log_level="LOUD")
    with pytest.raises(ValueError) as excinfo:
        config.validate()
    message = str(excinfo.value)
    assert message.startswith("Configuration validation failed")
    assert "SPINCHAIN_THREADS" in message
    assert "SPINCHAIN_T_SCAN_POINTS" in message
    assert "Invalid log level" in message


def test_bad_environment_is_a_usage_error(monkeypatch):
    monkeypatch.setenv("SPINCHAIN_T_SCAN_POINTS", "many")
    assert main(["verify", "--draws", "1"]) == EXIT_USAGE


# ==================== Commands ====================

def test_critical_for_fig7a(capsys):
    assert main(["critical", "--figure", "fig7a"]) == EXIT_OK
    out = capsys.readouterr().out
    line = next(line for line in out.splitlines() if line.strip().startswith("D_xc:"))
    assert float(line.split()[-1]) == pytest.approx(1.576, abs=1e-3)
    assert "T_c up to 10" in out


def test_critical_from_flags(capsys):
    args = ["critical", "--axis", "x", "--jx", "0.8", "--jy", "0.5", "--jz", "0.2",
            "--d", "1", "--b-nonuniform", "1.5", "--t-max", "6"]
    assert main(args) == EXIT_OK
    out = capsys.readouterr().out
    line = next(line for line in out.splitlines() if line.strip().startswith("B_xc:"))
    assert float(line.split()[-1]) == pytest.approx(2.632, abs=1e-3)


def test_critical_needs_model():
    assert main(["critical", "--axis", "x", "--jx", "1"]) == EXIT_USAGE


def test_single_point_sweep_at_huge_temperature(workspace):
    out = workspace / "hot.csv"
    args = ["sweep", "--axis", "z", "--jx", "1", "--jy", "0.5", "--jz", "0.2",
            "--sweep1", "T", "1e9", "1e9", "1", "--output", str(out)]
    assert main(args) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "T,-,concurrence"
    assert len(lines) == 2
    t, second, c = lines[1].split(",")
    assert float(t) == 1e9
    assert second == ""
    assert float(c) == 0.0


def test_sweep_default_output(workspace):
    args = ["sweep", "--axis", "x", "--jx", "0.8", "--jy", "0.5", "--jz", "0.2",
            "--temperature", "0.5", "--sweep1", "D", "0", "4", "9", "--verify"]
    assert main(args) == EXIT_OK
    frame = pd.read_csv(workspace / "out" / "sweep.csv")
    assert len(frame) == 9


def test_sweep_config_file_with_flag_override(workspace):
    config = workspace / "fig7.cfg"
    config.write_text(
        "AXIS=x\nJX=0.8\nJY=0.5\nJZ=0.2\nB_UNIFORM=3\nB_NONUNIFORM=1.5\n"
        "TEMPERATURE=0.5\n"
        "SWEEP1_NAME=D\nSWEEP1_MIN=0\nSWEEP1_MAX=4\nSWEEP1_COUNT=5\n"
    )
    out = workspace / "override.csv"
    args = ["sweep", "--config", str(config), "--temperature", "1.0", "--output", str(out)]
    assert main(args) == EXIT_OK

    frame = pd.read_csv(out)
    np.testing.assert_allclose(frame["D"], [0.0, 1.0, 2.0, 3.0, 4.0])
    for d, c in zip(frame["D"], frame["concurrence"]):
        p = ModelParams.x(0.8, 0.5, 0.2, d=d, b_uniform=3.0, b_nonuniform=1.5)
        assert c == pytest.approx(thermal_concurrence(p, 1.0), rel=1e-8, abs=1e-12)


def test_two_axis_sweep(workspace):
    out = workspace / "grid.csv"
    args = ["sweep", "--axis", "z", "--jx", "1", "--jy", "0.5", "--jz", "0.2",
            "--sweep1", "D", "0", "6", "4", "--sweep2", "T", "0.1", "4", "3", "--output", str(out)]
    assert main(args) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["D", "T", "concurrence"]
    assert len(frame) == 12


@pytest.mark.parametrize("args", [
    ["figure", "fig9"],
    ["sweep", "--axis", "z", "--jx", "1", "--jy", "0.5", "--jz", "0.2",
     "--temperature", "1", "--sweep1", "D", "2", "1", "10"],
    ["sweep", "--axis", "z", "--jx", "1", "--jy", "0.5", "--jz", "0.2",
     "--sweep1", "D", "0", "1", "10"],
    ["sweep", "--axis", "z", "--jx", "1", "--jy", "0.5", "--jz", "0.2",
     "--temperature", "1", "--sweep1", "D", "0", "1", "ten"],
    ["sweep", "--config", "missing.cfg"],
    ["figure", "fig1a", "--points", "1"],
    ["verify", "--draws", "0"],
])
def test_usage_errors(args):
    assert main(args) == EXIT_USAGE


def test_unwritable_output(workspace):
    (workspace / "blocker").write_text("not a directory")
    args = ["sweep", "--axis", "z", "--jx", "1", "--jy", "0.5", "--jz", "0.2",
            "--temperature", "1", "--sweep1", "D", "0", "1", "3",
            "--output", str(workspace / "blocker" / "out.csv")]
    assert main(args) == EXIT_OUTPUT


def test_figure_fig5(workspace, capsys):
    assert main(["figure", "fig5", "--points", "200", "--output-dir", str(workspace / "fig5")]) == EXIT_OK
    written = sorted(p.name for p in (workspace / "fig5").iterdir())
    assert written == ["fig5-D0.5.csv", "fig5-D0.csv", "fig5-D1.csv"]

    frame = pd.read_csv(workspace / "fig5" / "fig5-D0.csv")
    assert frame["concurrence"].iloc[0] == pytest.approx(FIG5_PLATEAU, abs=1e-6)
    jumps = np.abs(np.diff(frame["concurrence"].to_numpy()))
    b_jump = frame["b"].iloc[int(np.argmax(jumps))]
    assert b_jump == pytest.approx(2.016, abs=0.03)
    assert "fig5: 3 dataset(s)" in capsys.readouterr().out


def test_figure_with_oracle_check(workspace, capsys):
    assert main(["figure", "fig7a", "--points", "40", "--verify"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "critical temperatures" in out
    assert "✓ oracle" in out
    assert (workspace / "out" / "fig7a-Dxc.csv").is_file()


def test_verify_command(capsys):
    assert main(["verify", "--draws", "20", "--seed", "3"]) == EXIT_OK
    assert "All checks passed" in capsys.readouterr().out


def test_verification_report_covers_every_check():
    report = run_verification(60, seed=5, progress=False)
    assert report.passed, report.failures
    assert set(report.deviations) >= {"oracle", "spectrum", "duality", "gibbs_pattern"}
    assert report.checks["oracle"] == 60


def test_verification_accounts_for_every_x_draw():
    report = run_verification(200, seed=5, progress=False)
    assert report.passed, report.failures
    skipped = sum(report.skipped.get("ground_state", {}).values())
    assert report.checks.get("ground_state", 0) + skipped == report.checks["gibbs_pattern"]
    assert report.elapsed > 0.0


def test_verify_prints_skipped_ground_state_draws(monkeypatch, capsys):
    monkeypatch.setattr(spinchain_cli, "GROUND_STATE_MARGIN", 10.0)
    report = run_verification(30, seed=2, progress=False)
    assert "ground_state" not in report.checks
    assert report.skipped["ground_state"] == {"near the level crossing": report.checks["gibbs_pattern"]}

    assert main(["verify", "--draws", "30", "--seed", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert f"{report.checks['gibbs_pattern']:>6} draws skipped (near the level crossing)" in out


@pytest.mark.bench
def test_full_verification_runtime():
    report = run_verification(10000, seed=0, progress=False)
    assert report.passed, report.failures[:5]
    assert report.checks["oracle"] == 10000
    assert report.deviations["oracle"] <= 1e-8
    assert report.elapsed < 30.0


def main_tests():
    return pytest.main([__file__, "-v"])


if __name__ == "__main__":
    sys.exit(main_tests())
