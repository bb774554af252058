"""
Two-Qubit XYZ Model
===================

Parameter space and Hamiltonian assembly for the two-qubit anisotropic
Heisenberg XYZ model with a Dzyaloshinskii-Moriya (DM) term and an
inhomogeneous magnetic field, in two variants:

- axis Z: DM vector and both fields along z
- axis X: DM vector and both fields along x

All matrices are 4x4 complex arrays in the standard basis
|00>, |01>, |10>, |11> with qubit 1 as the left tensor factor.
All parameters are dimensionless.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple

import numpy as np

logger = logging.getLogger(__name__)

# 4x4 complex Hermitian array; the alias documents intent only
HermitianMatrix4 = np.ndarray

HERMITIAN_TOLERANCE = 1e-14

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class Axis(str, Enum):
    """Direction shared by the DM vector and the external fields"""
    Z = "z"
    X = "x"

    @classmethod
    def parse(cls, value) -> "Axis":
        if isinstance(value, Axis):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"Unknown axis '{value}' (expected 'z' or 'x')")


def _require_finite(**values: float):
    bad = [f"{name}={value!r}" for name, value in values.items()
           if not math.isfinite(value)]
    if bad:
        raise ValueError(f"Parameters must be finite: {', '.join(bad)}")


@dataclass(frozen=True)
class CouplingTriple:
    """Spin-spin coupling strengths J_x, J_y, J_z"""
    j_x: float
    j_y: float
    j_z: float

    def __post_init__(self):
        _require_finite(j_x=self.j_x, j_y=self.j_y, j_z=self.j_z)


@dataclass(frozen=True)
class AxisFields:
    """
    DM strength and field components along one axis

    Attributes:
        axis: Z or X
        d: DM coupling strength (D_z or D_x)
        b_uniform: uniform field (B_z or B_x)
        b_nonuniform: nonuniform field (b_z or b_x); qubit 1 sees B+b, qubit 2 sees B-b
    """
    axis: Axis
    d: float = 0.0
    b_uniform: float = 0.0
    b_nonuniform: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis.parse(self.axis))
        _require_finite(d=self.d, b_uniform=self.b_uniform, b_nonuniform=self.b_nonuniform)


@dataclass(frozen=True)
class ModelParams:
    """Full parameter set of either axis variant"""
    couplings: CouplingTriple
    fields: AxisFields

    @classmethod
    def build(cls, axis, j_x: float, j_y: float, j_z: float,
              d: float = 0.0, b_uniform: float = 0.0,
              b_nonuniform: float = 0.0) -> "ModelParams":
        return cls(CouplingTriple(float(j_x), float(j_y), float(j_z)),
                   AxisFields(Axis.parse(axis), float(d), float(b_uniform), float(b_nonuniform)))

    @classmethod
    def z(cls, j_x: float, j_y: float, j_z: float, d: float = 0.0,
          b_uniform: float = 0.0, b_nonuniform: float = 0.0) -> "ModelParams":
        return cls.build(Axis.Z, j_x, j_y, j_z, d, b_uniform, b_nonuniform)

    @classmethod
    def x(cls, j_x: float, j_y: float, j_z: float, d: float = 0.0,
          b_uniform: float = 0.0, b_nonuniform: float = 0.0) -> "ModelParams":
        return cls.build(Axis.X, j_x, j_y, j_z, d, b_uniform, b_nonuniform)

    @property
    def axis(self) -> Axis:
        return self.fields.axis

    @property
    def j_x(self) -> float:
        return self.couplings.j_x

    @property
    def j_y(self) -> float:
        return self.couplings.j_y

    @property
    def j_z(self) -> float:
        return self.couplings.j_z

    @property
    def d(self) -> float:
        return self.fields.d

    @property
    def b_uniform(self) -> float:
        return self.fields.b_uniform

    @property
    def b_nonuniform(self) -> float:
        return self.fields.b_nonuniform

    def with_couplings(self, j_x: float, j_y: float, j_z: float) -> "ModelParams":
        return replace(self, couplings=CouplingTriple(float(j_x), float(j_y), float(j_z)))

    def with_fields(self, **changes) -> "ModelParams":
        return replace(self, fields=replace(self.fields, **changes))

    def require_axis(self, axis: Axis, operation: str):
        if self.axis is not axis:
            raise ValueError(
                f"{operation} needs an axis-{axis.value} model, got axis-{self.axis.value}"
            )

    def describe(self) -> str:
        sub = self.axis.value
        return (f"J=({self.j_x:g}, {self.j_y:g}, {self.j_z:g}) "
                f"D_{sub}={self.d:g} B_{sub}={self.b_uniform:g} b_{sub}={self.b_nonuniform:g}")


@dataclass(frozen=True)
class MeanAnisotropy:
    """Mean YZ coupling J = (J_y+J_z)/2 and partial anisotropy Delta = (J_y-J_z)/(J_y+J_z)"""
    j_mean: float
    delta: float

    def __post_init__(self):
        _require_finite(j_mean=self.j_mean, delta=self.delta)


def couplings_from_mean_anisotropy(m: MeanAnisotropy) -> Tuple[float, float]:
    """Return (J_y, J_z) = (J(1+Delta), J(1-Delta))"""
    return m.j_mean * (1.0 + m.delta), m.j_mean * (1.0 - m.delta)


def mean_anisotropy(j_y: float, j_z: float) -> MeanAnisotropy:
    """Inverse of couplings_from_mean_anisotropy; needs J_y + J_z != 0"""
    total = j_y + j_z
    if total == 0.0:
        raise ValueError("Anisotropy is undefined when J_y + J_z = 0")
    return MeanAnisotropy(total / 2.0, (j_y - j_z) / total)


def two_site(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Operator a on qubit 1 and b on qubit 2"""
    return np.kron(a, b)


def pauli_operator_sum(p: ModelParams) -> HermitianMatrix4:
    """
    Assemble H from its operator form by Kronecker products of Pauli matrices

    axis Z:  J.ss + D_z (s1x s2y - s1y s2x) + (B+b) s1z + (B-b) s2z
    axis X:  J.ss + D_x (s1y s2z - s1z s2y) + (B+b) s1x + (B-b) s2x
    """
    h = (p.j_x * two_site(SIGMA_X, SIGMA_X)
         + p.j_y * two_site(SIGMA_Y, SIGMA_Y)
         + p.j_z * two_site(SIGMA_Z, SIGMA_Z))

    if p.axis is Axis.Z:
        dm = two_site(SIGMA_X, SIGMA_Y) - two_site(SIGMA_Y, SIGMA_X)
        field = SIGMA_Z
    else:
        dm = two_site(SIGMA_Y, SIGMA_Z) - two_site(SIGMA_Z, SIGMA_Y)
        field = SIGMA_X

    h = h + p.d * dm
    h = h + (p.b_uniform + p.b_nonuniform) * two_site(field, IDENTITY)
    h = h + (p.b_uniform - p.b_nonuniform) * two_site(IDENTITY, field)
    return h


def build_hamiltonian_z(p: ModelParams) -> HermitianMatrix4:
    """
    Hamiltonian of the z-axis variant

    Diagonal is (J_z+2B_z, -J_z+2b_z, -J_z-2b_z, J_z-2B_z); the |01>,|10> block
    carries J_x+J_y +/- 2iD_z and the |00>,|11> corners carry J_x-J_y.
    """
    p.require_axis(Axis.Z, "build_hamiltonian_z")

    corner = p.j_x - p.j_y
    inner = complex(p.j_x + p.j_y, 2.0 * p.d)
    jz = p.j_z
    uniform = 2.0 * p.b_uniform
    nonuniform = 2.0 * p.b_nonuniform

    return np.array([
        [jz + uniform, 0, 0, corner],
        [0, -jz + nonuniform, inner, 0],
        [0, inner.conjugate(), -jz - nonuniform, 0],
        [corner, 0, 0, jz - uniform],
    ], dtype=complex)


def build_hamiltonian_x(p: ModelParams) -> HermitianMatrix4:
    """
    Hamiltonian of the x-axis variant written out entry by entry

        [ J_z      G2      G3      J_x-J_y ]
        [ G4      -J_z     J_x+J_y G1      ]
        [ G1       J_x+J_y -J_z    G4      ]
        [ J_x-J_y  G3      G2      J_z     ]

    with G1,2 = iD_x + B_x +/- b_x and G3,4 = -iD_x + B_x +/- b_x.
    """
    p.require_axis(Axis.X, "build_hamiltonian_x")

    g1 = complex(p.b_uniform + p.b_nonuniform, p.d)
    g2 = complex(p.b_uniform - p.b_nonuniform, p.d)
    g3 = complex(p.b_uniform + p.b_nonuniform, -p.d)
    g4 = complex(p.b_uniform - p.b_nonuniform, -p.d)
    corner = p.j_x - p.j_y
    inner = p.j_x + p.j_y
    jz = p.j_z

    return np.array([
        [jz, g2, g3, corner],
        [g4, -jz, inner, g1],
        [g1, inner, -jz, g4],
        [corner, g3, g2, jz],
    ], dtype=complex)


def build_hamiltonian(p: ModelParams) -> HermitianMatrix4:
    """Dispatch on the axis tag"""
    if p.axis is Axis.Z:
        return build_hamiltonian_z(p)
    return build_hamiltonian_x(p)


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOLERANCE) -> bool:
    return bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= tol)
