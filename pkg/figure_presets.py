"""
Figure Presets
==============

Parameter sets of the reference figure datasets, one table entry per figure
id. Model parameters are exact; axis ranges are estimates.

Curves drawn "at the critical value" (the fig7a-c dashed lines) name the
critical parameter instead of a number; it is computed from the other
parameters of that curve when the figure is built.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from spin_model import MeanAnisotropy, ModelParams, couplings_from_mean_anisotropy
from critical_analysis import (
    MODEL_PARAMETERS,
    TEMPERATURE,
    SweepAxis,
    SweepSpec,
    critical_Bx_from_degeneracy,
    critical_bx,
    critical_dx,
    with_parameter,
)

logger = logging.getLogger(__name__)

CRITICAL = "critical"

CURVE_POINTS = 400
SURFACE_POINTS = 100

# ===== Thermal entanglement with zero or axis-aligned fields =====
FIGURE_PRESETS: Dict[str, Dict] = {
    "fig1a": {
        "caption": "C vs T and D_z, no field; J_x=1, J_y=0.5, J_z=0.2",
        "axis": "z", "couplings": (1.0, 0.5, 0.2), "fields": {},
        "sweep": [("T", 0.08, 8.0, SURFACE_POINTS), ("D", 0.0, 6.0, SURFACE_POINTS)],
    },
    "fig1b": {
        "caption": "C vs T and D_x, no field; J_x=1, J_y=0.5, J_z=0.2",
        "axis": "x", "couplings": (1.0, 0.5, 0.2), "fields": {},
        "sweep": [("T", 0.08, 8.0, SURFACE_POINTS), ("D", 0.0, 6.0, SURFACE_POINTS)],
    },
    "fig2a": {
        "caption": "C vs D_z (red dotted), D_x (blue solid) at T=3; J=(1, 0.5, 0.2), B=b=0",
        "axis": "z", "couplings": (1.0, 0.5, 0.2), "fields": {}, "temperature": 3.0,
        "sweep": [("D", 0.0, 6.0, CURVE_POINTS)],
        "curves": [{"label": "z", "axis": "z"}, {"label": "x", "axis": "x"}],
    },
    "fig2b": {
        "caption": "C vs T for D_z=3 (red dotted), D_x=3 (blue solid); J=(1, 0.5, 0.2), B=b=0",
        "axis": "z", "couplings": (1.0, 0.5, 0.2), "fields": {"d": 3.0},
        "sweep": [("T", 0.01, 8.0, CURVE_POINTS)],
        "curves": [{"label": "z", "axis": "z"}, {"label": "x", "axis": "x"}],
    },
    "fig3a": {
        "caption": "C vs B_z (red dotted), B_x (blue solid) at T=0.1; J=(1, 0.8, 0.2), D=b=0",
        "axis": "z", "couplings": (1.0, 0.8, 0.2), "fields": {}, "temperature": 0.1,
        "sweep": [("B", 0.0, 4.0, CURVE_POINTS)],
        "curves": [{"label": "z", "axis": "z"}, {"label": "x", "axis": "x"}],
    },
    "fig3b": {
        "caption": "C vs T for B_z=1 (red dotted), B_x=1 (blue solid); J=(1, 0.8, 0.2), D=b=0",
        "axis": "z", "couplings": (1.0, 0.8, 0.2), "fields": {"b_uniform": 1.0},
        "sweep": [("T", 0.01, 4.0, CURVE_POINTS)],
        "curves": [{"label": "z", "axis": "z"}, {"label": "x", "axis": "x"}],
    },
    "fig4a": {
        "caption": "C vs b_z (red dotted), b_x (blue solid) at T=0.2; J=(0.2, 0.4, 1), D=B=0",
        "axis": "z", "couplings": (0.2, 0.4, 1.0), "fields": {}, "temperature": 0.2,
        "sweep": [("b", 0.0, 4.0, CURVE_POINTS)],
        "curves": [{"label": "z", "axis": "z"}, {"label": "x", "axis": "x"}],
    },
    "fig4b": {
        "caption": "C vs T for b_z=1.5 (red dotted), b_x=1.5 (blue solid); J=(0.2, 0.4, 1), D=B=0",
        "axis": "z", "couplings": (0.2, 0.4, 1.0), "fields": {"b_nonuniform": 1.5},
        "sweep": [("T", 0.01, 4.0, CURVE_POINTS)],
        "curves": [{"label": "z", "axis": "z"}, {"label": "x", "axis": "x"}],
    },

    # ===== Ground state of the x-axis model =====
    "fig5": {
        "caption": "ground-state C vs b_x for different D_x; J=0.5, Delta=0.8, J_x=-1, B_x=1 "
                   "(D_x values not printed; 0, 0.5, 1 assumed)",
        "axis": "x", "mean": {"J": 0.5, "delta": 0.8, "J_x": -1.0}, "fields": {"b_uniform": 1.0},
        "temperature": 0.0,
        "sweep": [("b", 0.0, 4.0, CURVE_POINTS)],
        "curves": [{"label": "D0", "D": 0.0}, {"label": "D0.5", "D": 0.5}, {"label": "D1", "D": 1.0}],
    },
    "fig6a": {
        "caption": "ground-state C vs D_x for b_x=0, 0.8, 1.5; J=0.5, Delta=0.8, J_x=-1, B_x=1",
        "axis": "x", "mean": {"J": 0.5, "delta": 0.8, "J_x": -1.0}, "fields": {"b_uniform": 1.0},
        "temperature": 0.0,
        "sweep": [("D", 0.0, 4.0, CURVE_POINTS)],
        "curves": [{"label": "b0", "b": 0.0}, {"label": "b0.8", "b": 0.8}, {"label": "b1.5", "b": 1.5}],
    },
    "fig6b": {
        "caption": "ground-state C vs D_x for Delta=0.2, 0.8, 1.5; J=0.5, J_x=-1, B_x=0.8, b_x=1",
        "axis": "x", "mean": {"J": 0.5, "delta": 0.8, "J_x": -1.0},
        "fields": {"b_uniform": 0.8, "b_nonuniform": 1.0},
        "temperature": 0.0,
        "sweep": [("D", 0.0, 4.0, CURVE_POINTS)],
        "curves": [{"label": "delta0.2", "delta": 0.2}, {"label": "delta0.8", "delta": 0.8},
                   {"label": "delta1.5", "delta": 1.5}],
    },
    "fig6c": {
        "caption": "ground-state C vs D_x for B_x=0.5, 1, 1.5; J=0.5, Delta=0.8, J_x=-1, b_x=1",
        "axis": "x", "mean": {"J": 0.5, "delta": 0.8, "J_x": -1.0}, "fields": {"b_nonuniform": 1.0},
        "temperature": 0.0,
        "sweep": [("D", 0.0, 4.0, CURVE_POINTS)],
        "curves": [{"label": "B0.5", "B": 0.5}, {"label": "B1", "B": 1.0}, {"label": "B1.5", "B": 1.5}],
    },
    "fig6d": {
        "caption": "ground-state C vs D_x for J=0.2, 0.8, 1.5; Delta=0.5, J_x=-1, B_x=0.8, b_x=1",
        "axis": "x", "mean": {"J": 0.5, "delta": 0.5, "J_x": -1.0},
        "fields": {"b_uniform": 0.8, "b_nonuniform": 1.0},
        "temperature": 0.0,
        "sweep": [("D", 0.0, 4.0, CURVE_POINTS)],
        "curves": [{"label": "J0.2", "J": 0.2}, {"label": "J0.8", "J": 0.8}, {"label": "J1.5", "J": 1.5}],
    },

    # ===== Thermal entanglement of the x-axis model =====
    "fig7A": {
        "caption": "C vs D_x and T; B_x=3, b_x=1.5, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"b_uniform": 3.0, "b_nonuniform": 1.5},
        "sweep": [("D", 0.0, 4.0, SURFACE_POINTS), ("T", 0.04, 4.0, SURFACE_POINTS)],
    },
    "fig7a": {
        "caption": "C vs T for D_x=0, 1, D_xc~1.575, 2; B_x=3, b_x=1.5, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"b_uniform": 3.0, "b_nonuniform": 1.5},
        "sweep": [("T", 0.01, 6.0, CURVE_POINTS)],
        "curves": [{"label": "D0", "D": 0.0}, {"label": "D1", "D": 1.0},
                   {"label": "Dxc", "D": CRITICAL}, {"label": "D2", "D": 2.0}],
    },
    "fig7B": {
        "caption": "C vs B_x and T; b_x=1.5, D_x=1, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"d": 1.0, "b_nonuniform": 1.5},
        "sweep": [("B", 0.0, 6.0, SURFACE_POINTS), ("T", 0.04, 4.0, SURFACE_POINTS)],
    },
    "fig7b": {
        "caption": "C vs T for B_x=5, 3, B_xc~2.63, 1; b_x=1.5, D_x=1, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"d": 1.0, "b_nonuniform": 1.5},
        "sweep": [("T", 0.01, 6.0, CURVE_POINTS)],
        "curves": [{"label": "B5", "B": 5.0}, {"label": "B3", "B": 3.0},
                   {"label": "Bxc", "B": CRITICAL}, {"label": "B1", "B": 1.0}],
    },
    "fig7C": {
        "caption": "C vs b_x and T; B_x=3, D_x=1.6, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"d": 1.6, "b_uniform": 3.0},
        "sweep": [("b", 0.0, 4.0, SURFACE_POINTS), ("T", 0.04, 4.0, SURFACE_POINTS)],
    },
    "fig7c": {
        "caption": "C vs T for b_x=0, 1, b_xc~1.47, 2; B_x=3, D_x=1.6, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"d": 1.6, "b_uniform": 3.0},
        "sweep": [("T", 0.01, 6.0, CURVE_POINTS)],
        "curves": [{"label": "b0", "b": 0.0}, {"label": "b1", "b": 1.0},
                   {"label": "bxc", "b": CRITICAL}, {"label": "b2", "b": 2.0}],
    },
    "fig8A": {
        "caption": "C vs B_x and D_x; b_x=1.5, T=0.5, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"b_nonuniform": 1.5}, "temperature": 0.5,
        "sweep": [("B", 0.0, 8.0, SURFACE_POINTS), ("D", 0.0, 6.0, SURFACE_POINTS)],
    },
    "fig8a": {
        "caption": "C vs B_x for D_x=0, 2, 5; b_x=1.5, T=0.5, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"b_nonuniform": 1.5}, "temperature": 0.5,
        "sweep": [("B", 0.0, 8.0, CURVE_POINTS)],
        "curves": [{"label": "D0", "D": 0.0}, {"label": "D2", "D": 2.0}, {"label": "D5", "D": 5.0}],
    },
    "fig8B": {
        "caption": "C vs b_x and D_x; B_x=3, T=0.5, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"b_uniform": 3.0}, "temperature": 0.5,
        "sweep": [("b", 0.0, 6.0, SURFACE_POINTS), ("D", 0.0, 6.0, SURFACE_POINTS)],
    },
    "fig8b": {
        "caption": "C vs b_x for D_x=0, 1, 3; B_x=3, T=0.5, J=(0.8, 0.5, 0.2)",
        "axis": "x", "couplings": (0.8, 0.5, 0.2), "fields": {"b_uniform": 3.0}, "temperature": 0.5,
        "sweep": [("b", 0.0, 6.0, CURVE_POINTS)],
        "curves": [{"label": "D0", "D": 0.0}, {"label": "D1", "D": 1.0}, {"label": "D3", "D": 3.0}],
    },
}

FIGURE_IDS = tuple(FIGURE_PRESETS)


@dataclass(frozen=True)
class FigureCurve:
    """One dataset of a figure: a labelled sweep"""
    figure_id: str
    label: str
    spec: SweepSpec

    @property
    def is_surface(self) -> bool:
        return self.spec.axis2 is not None

    @property
    def sweeps_temperature(self) -> bool:
        return not self.is_surface and self.spec.axis1.name == TEMPERATURE

    def filename(self) -> str:
        return f"{self.figure_id}-{self.label}.csv"

    def output_path(self, output_dir) -> Path:
        return Path(output_dir) / self.filename()


def _critical_value(p: ModelParams, name: str) -> float:
    solvers = {"D": critical_dx, "b": critical_bx, "B": critical_Bx_from_degeneracy}
    if name not in solvers:
        raise ValueError(f"No critical value is defined for parameter '{name}'")
    value = solvers[name](p)
    if value is None:
        raise ValueError(f"No critical {name} exists for {p.describe()}")
    logger.info(f"Critical {name} = {value:.6f} for {p.describe()}")
    return value


def _preset_model(entry: Dict, overrides: Dict) -> ModelParams:
    axis = overrides.get("axis", entry["axis"])
    if "mean" in entry:
        mean = dict(entry["mean"])
        for key in ("J", "delta"):
            if key in overrides:
                mean[key] = overrides[key]
        j_y, j_z = couplings_from_mean_anisotropy(MeanAnisotropy(mean["J"], mean["delta"]))
        couplings = (mean["J_x"], j_y, j_z)
    else:
        couplings = entry["couplings"]
    p = ModelParams.build(axis, *couplings, **entry["fields"])

    pending = []
    for name in MODEL_PARAMETERS:
        if name not in overrides:
            continue
        if overrides[name] == CRITICAL:
            pending.append(name)
        else:
            p = with_parameter(p, name, overrides[name])
    for name in pending:
        p = with_parameter(p, name, _critical_value(p, name))
    return p


def build_figure(figure_id: str, points: Optional[int] = None) -> List[FigureCurve]:
    """
    Sweeps behind one figure

    Args:
        figure_id: key of FIGURE_PRESETS, e.g. "fig7a"
        points: grid count per swept axis, replacing the preset density

    Returns:
        One FigureCurve per curve, or a single "surface" curve for 2D figures
    """
    if figure_id not in FIGURE_PRESETS:
        raise ValueError(f"Unknown figure id '{figure_id}' (expected one of {', '.join(FIGURE_IDS)})")
    entry = FIGURE_PRESETS[figure_id]

    axes = [SweepAxis(name, lo, hi, points if points is not None else count)
            for name, lo, hi, count in entry["sweep"]]
    axis1 = axes[0]
    axis2 = axes[1] if len(axes) > 1 else None
    curves = entry.get("curves", [{"label": "surface" if axis2 is not None else "curve"}])

    built = []
    for overrides in curves:
        p = _preset_model(entry, overrides)
        spec = SweepSpec(base=p, axis1=axis1, axis2=axis2,
                         temperature=entry.get("temperature")).validate()
        built.append(FigureCurve(figure_id=figure_id, label=overrides["label"], spec=spec))
    return built


def preset_model(figure_id: str) -> ModelParams:
    """Base model of a figure (its first curve), for critical-value queries"""
    return build_figure(figure_id, points=2)[0].spec.base
