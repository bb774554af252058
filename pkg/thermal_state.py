"""
Thermal Equilibrium States
==========================

Gibbs state rho(T) = exp(-H/T)/Z with k_B = 1.

Weights are always formed from shifted energies (E_i - E_min), so nothing
overflows at low temperature. T = 0 is not a thermal temperature here;
ground-state questions go through entanglement.ground_state_concurrence.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from spin_model import Axis, ModelParams
from spectrum import EigenSystem, hermitian_eigensolve, mixing_angles_x, splittings_x

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-13
TRACE_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-12


def require_positive_temperature(t: float):
    try:
        value = float(t)
    except (TypeError, ValueError):
        raise ValueError(f"Temperature must be a real number, got {t!r}")
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"Temperature must be finite and > 0, got {t!r}")


@dataclass(frozen=True)
class DensityMatrix4:
    """
    Two-qubit density matrix in the |00>, |01>, |10>, |11> basis

    When the state was built from a spectral decomposition, `weights` and the
    orthonormal columns of `vectors` are kept, so rho = sum_i w_i |v_i><v_i|.
    """
    matrix: np.ndarray
    weights: Optional[np.ndarray] = None
    vectors: Optional[np.ndarray] = None

    @classmethod
    def from_spectrum(cls, weights, vectors) -> "DensityMatrix4":
        weights = np.asarray(weights, dtype=float)
        vectors = np.asarray(vectors, dtype=complex)
        matrix = (vectors * weights) @ vectors.conj().T
        return cls(matrix=matrix, weights=weights, vectors=vectors)

    @property
    def has_spectrum(self) -> bool:
        return self.weights is not None and self.vectors is not None

    def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        """(weights, vectors), diagonalising the matrix when none is attached"""
        if self.has_spectrum:
            return self.weights, self.vectors
        es = hermitian_eigensolve(self.matrix)
        return es.eigenvalues, es.eigenvectors

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def problems(self, weights: Optional[np.ndarray] = None) -> List[str]:
        """Invariant violations; an empty list means a valid state

        `weights`: eigenvalues already at hand for the PSD check, if any
        """
        issues = []
        m = self.matrix
        if m.shape != (4, 4):
            return [f"shape {m.shape} is not 4x4"]
        asymmetry = float(np.max(np.abs(m - m.conj().T)))
        if asymmetry > HERMITIAN_TOLERANCE:
            issues.append(f"not Hermitian (max |rho - rho^dagger| = {asymmetry:.3e})")
        if abs(self.trace() - 1.0) > TRACE_TOLERANCE:
            issues.append(f"trace {self.trace():.15f} != 1")
        if not issues:
            if weights is None:
                weights, _ = self.spectrum()
            if float(np.min(weights)) < -PSD_TOLERANCE:
                issues.append(f"negative eigenvalue {float(np.min(weights)):.3e}")
        return issues

    def validate(self, weights: Optional[np.ndarray] = None) -> "DensityMatrix4":
        issues = self.problems(weights)
        if issues:
            raise ValueError("Density matrix validation failed:\n  - " + "\n  - ".join(issues))
        return self


def log_partition_function(es: EigenSystem, t: float) -> float:
    """log Z = log sum_i exp(-E_i/T), evaluated by log-sum-exp"""
    require_positive_temperature(t)
    return float(logsumexp(-np.asarray(es.eigenvalues, dtype=float) / t))


@dataclass(frozen=True)
class PartitionFunction:
    """
    Z = mantissa * exp(log_scale)

    mantissa = sum_i exp(-(E_i - E_min)/T) lies in [1, dim], log_scale = -E_min/T.
    """
    mantissa: float
    log_scale: float

    def log(self) -> float:
        return math.log(self.mantissa) + self.log_scale

    def value(self) -> float:
        """Plain Z; inf when exp(log Z) leaves the float range"""
        log_z = self.log()
        return math.exp(log_z) if log_z < math.log(np.finfo(float).max) else math.inf


def partition_function(es: EigenSystem, t: float) -> PartitionFunction:
    """Z in shifted form, never overflowing; always strictly positive"""
    require_positive_temperature(t)
    energies = np.asarray(es.eigenvalues, dtype=float)
    e_min = float(np.min(energies))
    mantissa = float(np.sum(np.exp(-(energies - e_min) / t)))
    return PartitionFunction(mantissa=mantissa, log_scale=-e_min / t)


def boltzmann_weights(energies, t: float) -> np.ndarray:
    """exp(-(E_i - E_min)/T) normalised to unit sum"""
    require_positive_temperature(t)
    return softmax(-np.asarray(energies, dtype=float) / t)


def gibbs_state(es: EigenSystem, t: float) -> DensityMatrix4:
    """rho = sum_i w_i |v_i><v_i| with Boltzmann weights over the eigenbasis"""
    weights = boltzmann_weights(es.eigenvalues, t)
    return DensityMatrix4.from_spectrum(weights, es.eigenvectors)


def gibbs_entries_x(p: ModelParams, t: float) -> Tuple[float, float, float, float, complex, complex]:
    """
    Closed-form entries (U1, U2, V1, V2, Q1, Q2) of the axis-X thermal state

    U1,2 = (p1 sin^2 phi1 + p2 sin^2 phi2 +/- (p3 sin^2 phi3 + p4 sin^2 phi4)) / 2
    V1,2 = same with cos^2
    Q1,2 = (p1 s1 c1 + p2 s2 c2 +/- chi' (p3 s3 c3 + p4 s4 c4)) / 2

    where p_i are the normalised weights of E'_1..4 = J_x + w1', J_x - w1', -J_x + w2', -J_x - w2'.
    """
    p.require_axis(Axis.X, "gibbs_entries_x")
    require_positive_temperature(t)
    w1, w2 = splittings_x(p)
    mixing = mixing_angles_x(p)
    weights = boltzmann_weights([p.j_x + w1, p.j_x - w1, -p.j_x + w2, -p.j_x - w2], t)

    sin = np.sin(mixing.phi)
    cos = np.cos(mixing.phi)
    sym_s = weights[0] * sin[0] ** 2 + weights[1] * sin[1] ** 2
    anti_s = weights[2] * sin[2] ** 2 + weights[3] * sin[3] ** 2
    sym_c = weights[0] * cos[0] ** 2 + weights[1] * cos[1] ** 2
    anti_c = weights[2] * cos[2] ** 2 + weights[3] * cos[3] ** 2
    sym_q = weights[0] * sin[0] * cos[0] + weights[1] * sin[1] * cos[1]
    anti_q = mixing.chi * (weights[2] * sin[2] * cos[2] + weights[3] * sin[3] * cos[3])

    u1 = 0.5 * (sym_s + anti_s)
    u2 = 0.5 * (sym_s - anti_s)
    v1 = 0.5 * (sym_c + anti_c)
    v2 = 0.5 * (sym_c - anti_c)
    q1 = 0.5 * (sym_q + anti_q)
    q2 = 0.5 * (sym_q - anti_q)
    return float(u1), float(u2), float(v1), float(v2), complex(q1), complex(q2)


def assemble_printed_gibbs_x(p: ModelParams, t: float) -> DensityMatrix4:
    """
    Axis-X thermal state laid out from its closed-form entries

        [ U1  Q1* Q2* U2 ]
        [ Q1  V1  V2  Q2 ]
        [ Q2  V2  V1  Q1 ]
        [ U2  Q2* Q1* U1 ]
    """
    u1, u2, v1, v2, q1, q2 = gibbs_entries_x(p, t)
    matrix = np.array([
        [u1, q1.conjugate(), q2.conjugate(), u2],
        [q1, v1, v2, q2],
        [q2, v2, v1, q1],
        [u2, q2.conjugate(), q1.conjugate(), u1],
    ], dtype=complex)
    return DensityMatrix4(matrix=matrix)


def x_pattern_deviation(rho: DensityMatrix4) -> float:
    """
    Largest violation of the axis-X entry pattern

    rho11 = rho44, rho22 = rho33, rho14 = rho41 real, rho23 = rho32 real,
    rho21 = rho34, rho31 = rho24 and the conjugate placements of the first row.
    """
    m = rho.matrix
    checks = [
        m[0, 0] - m[3, 3],
        m[1, 1] - m[2, 2],
        m[0, 3] - m[3, 0],
        m[1, 2] - m[2, 1],
        np.imag(m[0, 3]),
        np.imag(m[1, 2]),
        m[1, 0] - m[2, 3],
        m[2, 0] - m[1, 3],
        m[0, 1] - np.conj(m[1, 0]),
        m[0, 2] - np.conj(m[2, 0]),
        m[3, 1] - np.conj(m[2, 0]),
        m[3, 2] - np.conj(m[1, 0]),
    ]
    return float(max(abs(x) for x in checks))
