"""
Critical Parameters and Parameter Sweeps
========================================

- Closed-form critical values of the axis-X ground-state transition
  (b_xc, D_xc and the B_xc that puts the model on the level crossing)
- Critical temperatures of the thermal concurrence, refined by bisection
- Entanglement revival intervals along a one-parameter sweep
- 1D/2D grid sweeps evaluated in a thread pool, emitted as CSV

Zero touches: where the family holding lambda_max changes, the concurrence
drops to zero on a window that can be far narrower than any scan spacing
(there C <= |lambda_1 - lambda_3| - lambda_2 - lambda_4 with lambda_1 = lambda_3).
Scans watch the sign of lambda_1 - lambda_3 between grid points, refine the
switch with Brent's method and the window edges by bisection.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect, brentq
from tqdm import tqdm

from spin_model import Axis, ModelParams
from spectrum import splittings_x
from entanglement import (
    crossing_gap_x,
    ground_state_concurrence,
    leading_family_gap,
    oracle_concurrence,
    thermal_concurrence,
)
from thermal_state import require_positive_temperature

logger = logging.getLogger(__name__)

TEMPERATURE = "T"
MODEL_PARAMETERS = ("J_x", "J_y", "J_z", "D", "B", "b")
SWEEP_PARAMETERS = (TEMPERATURE,) + MODEL_PARAMETERS

DEFAULT_THRESHOLD = 1e-9
DEFAULT_T_SCAN_POINTS = 400
T_SCAN_FLOOR = 1e-3
BISECT_XTOL = 1e-9
SWITCH_XTOL = 1e-15
# touch windows narrower than this are reported as one critical point
TOUCH_WIDTH = 2e-6
DEFAULT_B_SCAN_MAX = 20.0


def with_parameter(p: ModelParams, name: str, value: float) -> ModelParams:
    """Copy of `p` with one of J_x, J_y, J_z, D, B, b replaced"""
    value = float(value)
    if name == "J_x":
        return p.with_couplings(value, p.j_y, p.j_z)
    if name == "J_y":
        return p.with_couplings(p.j_x, value, p.j_z)
    if name == "J_z":
        return p.with_couplings(p.j_x, p.j_y, value)
    if name == "D":
        return p.with_fields(d=value)
    if name == "B":
        return p.with_fields(b_uniform=value)
    if name == "b":
        return p.with_fields(b_nonuniform=value)
    raise ValueError(f"Unknown model parameter '{name}' (expected one of {', '.join(MODEL_PARAMETERS)})")


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: `count` evenly spaced values from minimum to maximum"""
    name: str
    minimum: float
    maximum: float
    count: int

    def problems(self) -> List[str]:
        issues = []
        if self.name not in SWEEP_PARAMETERS:
            issues.append(f"unknown sweep parameter '{self.name}' "
                          f"(expected one of {', '.join(SWEEP_PARAMETERS)})")
        if not (math.isfinite(self.minimum) and math.isfinite(self.maximum)):
            issues.append(f"{self.name}: range bounds must be finite")
        if self.count == 1:
            if self.minimum != self.maximum:
                issues.append(f"{self.name}: a single-point axis needs min == max")
        elif self.count < 2:
            issues.append(f"{self.name}: count must be >= 2, got {self.count}")
        elif not self.minimum < self.maximum:
            issues.append(f"{self.name}: min {self.minimum:g} must be < max {self.maximum:g}")
        if self.name == TEMPERATURE and not self.minimum > 0.0:
            issues.append(f"T: swept temperatures must be > 0, got min {self.minimum:g}")
        return issues

    def values(self) -> np.ndarray:
        return np.linspace(self.minimum, self.maximum, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """
    Grid over one or two named parameters around a base model

    `temperature` is required unless T is swept; a temperature of 0 evaluates
    the ground-state concurrence instead of the thermal one.
    """
    base: ModelParams
    axis1: SweepAxis
    axis2: Optional[SweepAxis] = None
    temperature: Optional[float] = None

    def validate(self) -> "SweepSpec":
        issues = list(self.axis1.problems())
        if self.axis2 is not None:
            issues.extend(self.axis2.problems())
            if self.axis2.name == self.axis1.name:
                issues.append(f"both axes sweep '{self.axis1.name}'")
        if TEMPERATURE in self.names:
            if self.temperature is not None:
                issues.append("temperature is fixed while T is swept")
        elif self.temperature is None:
            issues.append("temperature is required when T is not swept")
        elif not (math.isfinite(self.temperature) and self.temperature >= 0.0):
            issues.append(f"temperature must be finite and >= 0, got {self.temperature!r}")
        if issues:
            raise ValueError("Sweep validation failed:\n  - " + "\n  - ".join(issues))
        return self

    @property
    def names(self) -> Tuple[str, ...]:
        if self.axis2 is None:
            return (self.axis1.name,)
        return (self.axis1.name, self.axis2.name)

    @property
    def size(self) -> int:
        return self.axis1.count * (self.axis2.count if self.axis2 is not None else 1)

    def grid(self) -> List[Tuple[float, Optional[float]]]:
        """Grid points in row order, axis2 fastest"""
        first = self.axis1.values()
        if self.axis2 is None:
            return [(float(x), None) for x in first]
        second = self.axis2.values()
        return [(float(x), float(y)) for x in first for y in second]

    def point(self, v1: float, v2: Optional[float] = None) -> Tuple[ModelParams, float]:
        """(model, temperature) at one grid point"""
        p = self.base
        t = self.temperature
        assignments = [(self.axis1.name, v1)]
        if self.axis2 is not None:
            assignments.append((self.axis2.name, v2))
        for name, value in assignments:
            if name == TEMPERATURE:
                t = float(value)
            else:
                p = with_parameter(p, name, value)
        return p, t

    def describe(self) -> str:
        text = (f"{self.base.axis.value}-model {self.base.describe()}; "
                f"{self.axis1.name} in [{self.axis1.minimum:g}, {self.axis1.maximum:g}] x{self.axis1.count}")
        if self.axis2 is not None:
            text += (f", {self.axis2.name} in [{self.axis2.minimum:g}, "
                     f"{self.axis2.maximum:g}] x{self.axis2.count}")
        if self.temperature is not None:
            text += f", T={self.temperature:g}"
        return text


def concurrence_at(p: ModelParams, t: float) -> float:
    """Thermal concurrence for T > 0, ground-state concurrence at T = 0"""
    if t == 0.0:
        return ground_state_concurrence(p)
    return thermal_concurrence(p, t)


@dataclass
class SweepResult:
    """Rows of (axis1 value, axis2 value or None, concurrence) in grid order"""
    spec: SweepSpec
    rows: List[Tuple[float, Optional[float], float]]
    max_oracle_deviation: Optional[float] = None
    oracle_checks: int = 0

    @property
    def concurrences(self) -> np.ndarray:
        return np.array([row[2] for row in self.rows], dtype=float)

    @property
    def axis1_values(self) -> np.ndarray:
        return np.array([row[0] for row in self.rows], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        second = self.spec.axis2.name if self.spec.axis2 is not None else "-"
        return pd.DataFrame(self.rows, columns=[self.spec.axis1.name, second, "concurrence"])

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.9g", lineterminator="\n")
        logger.info(f"Wrote {len(self.rows)} rows to {path}")
        return path


@dataclass
class RevivalReport:
    """Maximal intervals of the swept parameter where the concurrence exceeds `threshold`"""
    parameter: str
    threshold: float
    intervals: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def revivals(self) -> List[Tuple[float, float]]:
        """Every interval after the first"""
        return self.intervals[1:]

    @property
    def has_revival(self) -> bool:
        return len(self.intervals) > 1

    def __str__(self) -> str:
        if not self.intervals:
            return f"C <= {self.threshold:g} over the whole {self.parameter} range"
        parts = [f"[{lo:.6g}, {hi:.6g}]" for lo, hi in self.intervals]
        return f"C > {self.threshold:g} for {self.parameter} in " + " U ".join(parts)


def critical_bx(p: ModelParams) -> Optional[float]:
    """b_xc = sqrt((2J_x - w1')^2 - (J_y + J_z)^2 - 4D_x^2)/2, or None without a transition in b_x"""
    p.require_axis(Axis.X, "critical_bx")
    w1, _ = splittings_x(p)
    return _critical_field(p, w1, p.d)


def critical_dx(p: ModelParams) -> Optional[float]:
    """D_xc = sqrt((2J_x - w1')^2 - (J_y + J_z)^2 - 4b_x^2)/2, or None without a transition in D_x"""
    p.require_axis(Axis.X, "critical_dx")
    w1, _ = splittings_x(p)
    return _critical_field(p, w1, p.b_nonuniform)


def _critical_field(p: ModelParams, w1: float, other: float) -> Optional[float]:
    # below w1' = 2J_x the level crossing cannot be reached by raising b_x or D_x
    if w1 < 2.0 * p.j_x:
        return None
    radicand = (2.0 * p.j_x - w1) ** 2 - (p.j_y + p.j_z) ** 2 - 4.0 * other ** 2
    if radicand < 0.0:
        return None
    return 0.5 * math.sqrt(radicand)


def critical_Bx_from_degeneracy(p: ModelParams) -> Optional[float]:
    """
    B_x >= 0 on the level crossing J_x = (w1' - w2')/2

    4B_x^2 = (2J_x + w2')^2 - (J_y - J_z)^2, requiring 2J_x + w2' >= 0.
    """
    p.require_axis(Axis.X, "critical_Bx_from_degeneracy")
    _, w2 = splittings_x(p)
    reach = 2.0 * p.j_x + w2
    if reach < 0.0:
        return None
    radicand = reach ** 2 - (p.j_y - p.j_z) ** 2
    if radicand < 0.0:
        return None
    return 0.5 * math.sqrt(radicand)


def critical_Bx_by_scan(p: ModelParams, b_max: float = DEFAULT_B_SCAN_MAX) -> Optional[float]:
    """Bisection on J_x - (w1' - w2')/2 over B_x in [0, b_max]"""
    p.require_axis(Axis.X, "critical_Bx_by_scan")

    def gap(b_uniform):
        return crossing_gap_x(p.with_fields(b_uniform=b_uniform))

    low, high = gap(0.0), gap(b_max)
    if low == 0.0:
        return 0.0
    if low * high > 0.0:
        logger.debug(f"No level crossing for B_x in [0, {b_max:g}]")
        return None
    return float(bisect(gap, 0.0, b_max, xtol=1e-13))


def _scan(xs: np.ndarray, values: np.ndarray, evaluate: Callable[[float], float],
          gap: Optional[Callable[[float], float]],
          threshold: float) -> Tuple[List[Tuple[float, float]], List[float]]:
    """
    Intervals where evaluate(x) > threshold, and the points where that changes

    Returns (intervals, critical points). A zero touch splits an interval at its
    window edges; as a critical point it counts once (at the family switch) when
    narrower than TOUCH_WIDTH, else twice (at both edges).
    """
    def excess(x):
        return evaluate(x) - threshold

    above = values > threshold
    intervals: List[Tuple[float, float]] = []
    critical: List[float] = []
    start = float(xs[0]) if above[0] else None

    for i in range(len(xs) - 1):
        a, b = float(xs[i]), float(xs[i + 1])
        if above[i] != above[i + 1]:
            edge = float(bisect(excess, a, b, xtol=BISECT_XTOL))
            critical.append(edge)
            if above[i + 1]:
                start = edge
            else:
                intervals.append((start, edge))
                start = None
            continue

        if not above[i] or gap is None:
            continue
        ga, gb = gap(a), gap(b)
        if ga * gb >= 0.0:
            continue

        switch = float(brentq(gap, a, b, xtol=SWITCH_XTOL))
        if excess(switch) > 0.0:
            # window narrower than the switch can be resolved
            left = right = switch
        else:
            left = float(bisect(excess, a, switch, xtol=BISECT_XTOL))
            right = float(bisect(excess, switch, b, xtol=BISECT_XTOL))
        logger.debug(f"Zero touch at {switch:.9g} (window [{left:.9g}, {right:.9g}])")
        if right - left < TOUCH_WIDTH:
            critical.append(switch)
        else:
            critical.extend([left, right])
        intervals.append((start, left))
        start = right

    if start is not None:
        intervals.append((start, float(xs[-1])))
    return intervals, critical


def critical_temperatures(p: ModelParams, t_max: float,
                          points: int = DEFAULT_T_SCAN_POINTS,
                          threshold: float = DEFAULT_THRESHOLD) -> List[float]:
    """
    Temperatures in (0, t_max] where the thermal concurrence vanishes

    Scans `points` log-spaced temperatures from min(1e-3, t_max/10) to t_max and
    refines every change of (C > threshold) by bisection, plus zero touches.
    """
    require_positive_temperature(t_max)
    if points < 2:
        raise ValueError(f"A temperature scan needs at least 2 points, got {points}")

    floor = min(T_SCAN_FLOOR, t_max / 10.0)
    ts = np.geomspace(floor, t_max, points)
    values = np.array([thermal_concurrence(p, t) for t in ts])
    _, critical = _scan(ts, values,
                        lambda t: thermal_concurrence(p, t),
                        lambda t: leading_family_gap(p, t),
                        threshold)
    logger.debug(f"Critical temperatures for {p.describe()}: {critical}")
    return sorted(critical)


def detect_revival(spec: SweepSpec, threshold: float = DEFAULT_THRESHOLD,
                   workers: Optional[int] = None, progress: bool = False) -> RevivalReport:
    """Concurrence intervals along a one-parameter sweep; intervals after the first are revivals"""
    spec.validate()
    if spec.axis2 is not None:
        raise ValueError("Revival detection needs a one-parameter sweep, got two axes")
    return revivals_from_result(sweep(spec, workers=workers, progress=progress), threshold)


def revivals_from_result(result: SweepResult, threshold: float = DEFAULT_THRESHOLD) -> RevivalReport:
    """Revival intervals of an already evaluated one-parameter sweep"""
    spec = result.spec
    if spec.axis2 is not None:
        raise ValueError("Revival detection needs a one-parameter sweep, got two axes")
    if not threshold >= 0.0:
        raise ValueError(f"Threshold must be >= 0, got {threshold!r}")
    xs = result.axis1_values
    values = result.concurrences

    def evaluate(x):
        return concurrence_at(*spec.point(x))

    gap = None
    if spec.temperature != 0.0:
        def gap(x):
            return leading_family_gap(*spec.point(x))

    if len(xs) < 2:
        intervals = [(float(xs[0]), float(xs[0]))] if values[0] > threshold else []
    else:
        intervals, _ = _scan(xs, values, evaluate, gap, threshold)
    return RevivalReport(parameter=spec.axis1.name, threshold=threshold, intervals=intervals)


def sweep(spec: SweepSpec, verify_stride: Optional[int] = None,
          workers: Optional[int] = None, progress: bool = True) -> SweepResult:
    """
    Concurrence at every grid point of `spec`

    Points are evaluated in a thread pool and re-assembled by index, so the row
    order is the grid order whatever the completion order. With `verify_stride`,
    every stride-th thermal point is also evaluated through the density-matrix
    oracle and the largest deviation is kept on the result.
    """
    spec.validate()
    if verify_stride is not None and verify_stride < 1:
        raise ValueError(f"Oracle stride must be >= 1, got {verify_stride}")

    grid = spec.grid()
    points = [spec.point(v1, v2) for v1, v2 in grid]
    values: List[Optional[float]] = [None] * len(points)
    logger.info(f"Sweeping {len(points)} points: {spec.describe()}")

    def evaluate(index):
        p, t = points[index]
        return index, concurrence_at(p, t)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(evaluate, i) for i in range(len(points))]
        for future in tqdm(as_completed(futures), total=len(futures),
                           desc="Grid points", disable=not progress):
            index, value = future.result()
            values[index] = value

    rows = [(v1, v2, values[i]) for i, (v1, v2) in enumerate(grid)]
    result = SweepResult(spec=spec, rows=rows)

    if verify_stride is not None:
        deviation = 0.0
        checks = 0
        for i in range(0, len(points), verify_stride):
            p, t = points[i]
            if t == 0.0:
                continue
            deviation = max(deviation, abs(values[i] - oracle_concurrence(p, t)))
            checks += 1
        result.max_oracle_deviation = deviation
        result.oracle_checks = checks
        logger.info(f"Oracle checked {checks} points, max deviation {deviation:.3e}")

    logger.info(f"Sweep finished: {len(rows)} rows")
    return result
