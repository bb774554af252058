#!/usr/bin/env python3
"""
Tests for critical_analysis.py
Critical fields, critical temperatures, revival detection and grid sweeps
"""

import math
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pandas as pd
import pytest

from spin_model import MeanAnisotropy, ModelParams, couplings_from_mean_anisotropy
from entanglement import (
    crossing_gap_x,
    ground_state_concurrence,
    ground_state_concurrence_x,
    thermal_concurrence,
)
from critical_analysis import (
    SweepAxis,
    SweepSpec,
    concurrence_at,
    critical_Bx_by_scan,
    critical_Bx_from_degeneracy,
    critical_bx,
    critical_dx,
    critical_temperatures,
    detect_revival,
    revivals_from_result,
    sweep,
    with_parameter,
)

J_FIG7 = (0.8, 0.5, 0.2)


def fig5_model(d=0.0):
    j_y, j_z = couplings_from_mean_anisotropy(MeanAnisotropy(0.5, 0.8))
    return ModelParams.x(-1.0, j_y, j_z, d=d, b_uniform=1.0)


# ==================== Critical fields ====================

def test_critical_values_of_the_reference_models():
    assert critical_bx(ModelParams.x(*J_FIG7, d=1.6, b_uniform=3.0)) == pytest.approx(1.4745, abs=1e-3)
    assert critical_dx(ModelParams.x(*J_FIG7, b_uniform=3.0, b_nonuniform=1.5)) == pytest.approx(1.576, abs=1e-3)
    assert critical_Bx_from_degeneracy(ModelParams.x(*J_FIG7, d=1.0, b_nonuniform=1.5)) == \
        pytest.approx(2.632, abs=1e-3)
    assert critical_bx(fig5_model()) == pytest.approx(2.016, abs=1e-3)


def test_ground_state_jump_sits_at_critical_bx():
    p = fig5_model()
    b_c = critical_bx(p)
    fields = np.linspace(1.9, 2.1, 20001)
    curve = np.array([ground_state_concurrence_x(p.with_fields(b_nonuniform=b)) for b in fields])
    steps = np.abs(np.diff(curve))
    k = int(np.argmax(steps))
    assert curve[0] - curve[-1] > 0.1
    jump = 0.5 * (fields[k] + fields[k + 1])
    assert abs(jump - b_c) <= 1e-3
    assert curve[0] == pytest.approx(0.8 / math.sqrt(4.64), abs=1e-12)


def test_critical_values_sit_on_the_crossing():
    p = ModelParams.x(*J_FIG7, d=1.6, b_uniform=3.0)
    assert abs(crossing_gap_x(p.with_fields(b_nonuniform=critical_bx(p)))) <= 1e-12

    q = ModelParams.x(*J_FIG7, d=1.0, b_nonuniform=1.5)
    assert abs(crossing_gap_x(q.with_fields(b_uniform=critical_Bx_from_degeneracy(q)))) <= 1e-12


def test_critical_bx_and_dx_round_trip():
    p = ModelParams.x(*J_FIG7, d=1.6, b_uniform=3.0)
    q = p.with_fields(b_nonuniform=critical_bx(p))
    assert critical_dx(q) == pytest.approx(1.6, abs=1e-12)


def test_no_critical_field():
    # w1' < 2J_x: raising b_x or D_x never reaches the crossing
    assert critical_bx(ModelParams.x(2.0, 0.5, 0.2)) is None
    assert critical_dx(ModelParams.x(2.0, 0.5, 0.2)) is None
    # b_x already beyond the crossing
    assert critical_dx(ModelParams.x(*J_FIG7, b_uniform=3.0, b_nonuniform=5.0)) is None


def test_critical_fields_need_axis_x():
    with pytest.raises(ValueError, match="axis-x"):
        critical_bx(ModelParams.z(*J_FIG7))


def test_critical_Bx_boundary_cases():
    assert critical_Bx_from_degeneracy(ModelParams.x(-0.5, 0.5, 0.5)) == 0.0
    assert critical_Bx_from_degeneracy(ModelParams.x(-0.5, 1.0, 0.0)) is None
    assert critical_Bx_from_degeneracy(ModelParams.x(-3.0, 0.5, 0.2)) is None


def test_critical_Bx_scan_agrees_with_degeneracy():
    p = ModelParams.x(*J_FIG7, d=1.0, b_nonuniform=1.5)
    assert critical_Bx_by_scan(p) == pytest.approx(critical_Bx_from_degeneracy(p), abs=1e-9)
    assert critical_Bx_by_scan(p, b_max=1.0) is None


# ==================== Critical temperatures ====================

def test_fig7a_critical_temperatures():
    p = ModelParams.x(*J_FIG7, d=1.0, b_uniform=3.0, b_nonuniform=1.5)
    found = critical_temperatures(p, 10.0)
    assert len(found) == 2
    assert found[0] == pytest.approx(0.30, abs=0.05)
    assert 3.0 < found[1] < 6.0


def test_dm_along_x_raises_critical_temperature():
    tc_z = critical_temperatures(ModelParams.z(1.0, 0.5, 0.2, d=3.0), 10.0)
    tc_x = critical_temperatures(ModelParams.x(1.0, 0.5, 0.2, d=3.0), 10.0)
    assert tc_z and tc_x
    assert max(tc_x) > max(tc_z)


def test_critical_temperature_flips_concurrence():
    p = ModelParams.z(1.0, 0.5, 0.2, d=3.0)
    (tc,) = critical_temperatures(p, 10.0)
    assert thermal_concurrence(p, tc - 1e-6) > 0.0
    assert thermal_concurrence(p, tc + 1e-6) <= 1e-9


def test_no_critical_temperature_without_entanglement():
    assert critical_temperatures(ModelParams.z(0.0, 0.0, 0.0), 5.0) == []


@pytest.mark.parametrize("t_max", [0.0, -1.0])
def test_critical_temperature_scan_needs_positive_range(t_max):
    with pytest.raises(ValueError, match="Temperature"):
        critical_temperatures(ModelParams.z(*J_FIG7), t_max)


# ==================== Revivals ====================

def field_sweep(axis, name="B", temperature=0.1, count=200):
    return SweepSpec(base=ModelParams.build(axis, 1.0, 0.8, 0.2),
                     axis1=SweepAxis(name, 0.0, 4.0, count), temperature=temperature)


def test_fig3a_revivals():
    z = detect_revival(field_sweep("z"), workers=2)
    x = detect_revival(field_sweep("x"), workers=2)
    assert z.has_revival and x.has_revival
    assert z.revivals[0][0] == pytest.approx(1.22, abs=0.05)
    assert x.revivals[0][0] == pytest.approx(1.55, abs=0.05)
    assert x.revivals[0][0] > z.revivals[0][0]
    assert "U" in str(z)


def test_revival_needs_one_axis():
    spec = field_sweep("z", count=3)
    spec = SweepSpec(base=spec.base, axis1=spec.axis1, axis2=SweepAxis("D", 0.0, 1.0, 2),
                     temperature=0.1)
    with pytest.raises(ValueError, match="one-parameter"):
        detect_revival(spec)


def test_no_entanglement_at_high_temperature():
    spec = SweepSpec(base=ModelParams.z(1.0, 0.5, 0.2), axis1=SweepAxis("T", 50.0, 100.0, 20))
    report = detect_revival(spec)
    assert report.intervals == []
    assert not report.has_revival
    assert "whole T range" in str(report)


def test_ground_state_revival_report():
    spec = SweepSpec(base=fig5_model(), axis1=SweepAxis("b", 0.0, 4.0, 101), temperature=0.0)
    report = revivals_from_result(sweep(spec, progress=False))
    assert report.intervals
    assert report.intervals[0][0] == 0.0


# ==================== Sweeps ====================

def test_with_parameter():
    p = ModelParams.x(*J_FIG7)
    assert with_parameter(p, "J_y", 0.9).j_y == 0.9
    assert with_parameter(p, "b", 1.5).b_nonuniform == 1.5
    with pytest.raises(ValueError, match="Unknown model parameter"):
        with_parameter(p, "Q", 1.0)


@pytest.mark.parametrize("axis1, temperature, message", [
    (SweepAxis("Q", 0.0, 1.0, 10), 1.0, "unknown sweep parameter"),
    (SweepAxis("D", 2.0, 1.0, 10), 1.0, "must be <"),
    (SweepAxis("D", 0.0, 1.0, 0), 1.0, "count"),
    (SweepAxis("D", 0.0, 1.0, 1), 1.0, "single-point"),
    (SweepAxis("T", 0.0, 1.0, 10), None, "swept temperatures"),
    (SweepAxis("T", 0.5, 1.0, 10), 1.0, "fixed while T is swept"),
    (SweepAxis("D", 0.0, 1.0, 10), None, "temperature is required"),
    (SweepAxis("D", 0.0, 1.0, 10), -1.0, "finite and >= 0"),
])
def test_sweep_validation(axis1, temperature, message):
    spec = SweepSpec(base=ModelParams.z(*J_FIG7), axis1=axis1, temperature=temperature)
    with pytest.raises(ValueError, match=message):
        spec.validate()


def test_single_point_grid():
    spec = SweepSpec(base=ModelParams.z(*J_FIG7), axis1=SweepAxis("T", 1.0, 1.0, 1),
                     axis2=SweepAxis("D", 0.0, 1.0, 2))
    result = sweep(spec, progress=False)
    assert len(result.rows) == 2
    assert [row[:2] for row in result.rows] == [(1.0, 0.0), (1.0, 1.0)]


def test_grid_order_second_axis_fastest():
    spec = SweepSpec(base=ModelParams.x(*J_FIG7), axis1=SweepAxis("D", 0.0, 1.0, 2),
                     axis2=SweepAxis("B", 0.0, 2.0, 3), temperature=1.0)
    result = sweep(spec, workers=4, progress=False)
    assert [row[:2] for row in result.rows] == [
        (0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (1.0, 0.0), (1.0, 1.0), (1.0, 2.0)]
    for v1, v2, c in result.rows:
        p = ModelParams.x(*J_FIG7, d=v1, b_uniform=v2)
        assert c == thermal_concurrence(p, 1.0)


def test_sweep_is_deterministic_across_workers():
    spec = SweepSpec(base=ModelParams.x(*J_FIG7, b_uniform=3.0, b_nonuniform=1.5),
                     axis1=SweepAxis("D", 0.0, 4.0, 41), axis2=SweepAxis("T", 0.05, 4.0, 9))
    single = sweep(spec, workers=1, progress=False)
    pooled = sweep(spec, workers=4, progress=False)
    assert single.rows == pooled.rows


def test_zero_temperature_sweep_uses_ground_state():
    p = fig5_model(d=0.5)
    assert concurrence_at(p, 0.0) == ground_state_concurrence(p)
    spec = SweepSpec(base=p, axis1=SweepAxis("b", 0.0, 4.0, 5), temperature=0.0)
    result = sweep(spec, verify_stride=1, progress=False)
    assert result.oracle_checks == 0
    assert result.concurrences[0] == pytest.approx(0.8 / math.sqrt(4.64))


def test_sweep_oracle_verification():
    spec = SweepSpec(base=ModelParams.x(*J_FIG7, b_uniform=3.0, b_nonuniform=1.5),
                     axis1=SweepAxis("D", 0.0, 4.0, 50), temperature=0.5)
    result = sweep(spec, verify_stride=7, progress=False)
    assert result.oracle_checks == 8
    assert result.max_oracle_deviation <= 1e-8
    with pytest.raises(ValueError, match="stride"):
        sweep(spec, verify_stride=0, progress=False)


def test_csv_layout(tmp_path):
    spec = SweepSpec(base=ModelParams.z(*J_FIG7), axis1=SweepAxis("D", 0.0, 1.0, 3), temperature=1.0)
    path = sweep(spec, progress=False).write_csv(tmp_path / "nested" / "d.csv")

    raw = path.read_bytes()
    assert b"\r\n" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "D,-,concurrence"
    assert len(lines) == 4
    assert lines[2].startswith("0.5,,")

    frame = pd.read_csv(path)
    assert list(frame.columns) == ["D", "-", "concurrence"]
    assert frame["concurrence"].between(0.0, 1.0).all()


def test_csv_layout_2d(tmp_path):
    spec = SweepSpec(base=ModelParams.z(*J_FIG7), axis1=SweepAxis("D", 0.0, 1.0, 2),
                     axis2=SweepAxis("T", 0.5, 1.0, 2))
    path = sweep(spec, progress=False).write_csv(tmp_path / "surface.csv")
    assert path.read_text().splitlines()[0] == "D,T,concurrence"


def main():
    return pytest.main([__file__, "-v"])


if __name__ == "__main__":
    sys.exit(main())
