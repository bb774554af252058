"""
Spectra of the Two-Qubit Model
==============================

Two independent routes to the eigensystem of either Hamiltonian variant:

1. Closed forms. Each variant splits into two 2x2 families:
   axis Z: E1,2 = J_z +/- w1 on span{|00>,|11>}, E3,4 = -J_z +/- w2 on span{|01>,|10>}
   axis X: E1,2 = J_x +/- w1' (symmetric family), E3,4 = -J_x +/- w2' (antisymmetric family)

2. A cyclic complex Jacobi eigensolver for any small Hermitian matrix,
   used as the brute-force oracle against the closed forms, and a one-sided
   Jacobi for the singular values the concurrence oracle needs.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from spin_model import Axis, ModelParams, HermitianMatrix4

logger = logging.getLogger(__name__)

MAX_SWEEPS = 100
CONVERGENCE_RATIO = 1e-14
INPUT_HERMITIAN_TOLERANCE = 1e-12
MAX_ORACLE_DIMENSION = 8


@dataclass(frozen=True)
class EigenSystem:
    """
    Eigenvalues sorted ascending; eigenvectors[:, i] pairs with eigenvalues[i]
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def orthonormality_error(self) -> float:
        gram = self.eigenvectors.conj().T @ self.eigenvectors
        return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))

    def residual(self, h: np.ndarray) -> float:
        """Largest ||H v_i - E_i v_i||_2 over the basis"""
        diff = h @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.max(np.linalg.norm(diff, axis=0)))


@dataclass(frozen=True)
class ZMixing:
    """Eigenvector angles theta_1..4 and the |10> phase chi of the axis-Z model"""
    theta: Tuple[float, float, float, float]
    chi: complex


@dataclass(frozen=True)
class XMixing:
    """Eigenvector angles phi_1..4 and the phase chi' of the axis-X model"""
    phi: Tuple[float, float, float, float]
    chi: complex


def splittings_z(p: ModelParams) -> Tuple[float, float]:
    """(w1, w2) = (sqrt(4B^2 + (J_x-J_y)^2), sqrt(4b^2 + 4D^2 + (J_x+J_y)^2))"""
    w1 = math.hypot(2.0 * p.b_uniform, p.j_x - p.j_y)
    w2 = math.sqrt(4.0 * p.b_nonuniform ** 2 + 4.0 * p.d ** 2 + (p.j_x + p.j_y) ** 2)
    return w1, w2


def splittings_x(p: ModelParams) -> Tuple[float, float]:
    """(w1', w2') = (sqrt(4B^2 + (J_y-J_z)^2), sqrt(4b^2 + 4D^2 + (J_y+J_z)^2))"""
    w1 = math.hypot(2.0 * p.b_uniform, p.j_y - p.j_z)
    w2 = math.sqrt(4.0 * p.b_nonuniform ** 2 + 4.0 * p.d ** 2 + (p.j_y + p.j_z) ** 2)
    return w1, w2


def _family_angle(diagonal: float, mixing: float, level: float,
                  degenerate_angle: float) -> float:
    """
    Angle t with (sin t, cos t) the eigenvector of [[f, m], [m, -f]] at eigenvalue `level`

    Both (m, level - f) and (level + f, m) are parallel to the eigenvector; the
    longer one is used so that a vanishing arctan argument never reaches a 0/0.
    When f = m = 0 the family is degenerate and `degenerate_angle` is returned.
    """
    first = (mixing, level - diagonal)
    second = (level + diagonal, mixing)
    if math.hypot(*first) >= math.hypot(*second):
        s, c = first
    else:
        s, c = second
    if s == 0.0 and c == 0.0:
        return degenerate_angle
    return math.atan2(s, c)


def mixing_angles_z(p: ModelParams) -> ZMixing:
    """Angles of |phi_1..4> = sin|00> + cos|11>, sin|01> + chi cos|10>"""
    p.require_axis(Axis.Z, "mixing_angles_z")
    w1, w2 = splittings_z(p)
    r = math.hypot(p.j_x + p.j_y, 2.0 * p.d)
    chi = complex(p.j_x + p.j_y, -2.0 * p.d) / r if r > 0.0 else complex(1.0, 0.0)

    # (|00> +/- |11>)/sqrt(2) and (|01> +/- |10>)/sqrt(2) when a family is degenerate
    quarter = math.pi / 4.0
    theta = (
        _family_angle(2.0 * p.b_uniform, p.j_x - p.j_y, w1, quarter),
        _family_angle(2.0 * p.b_uniform, p.j_x - p.j_y, -w1, -quarter),
        _family_angle(2.0 * p.b_nonuniform, r, w2, quarter),
        _family_angle(2.0 * p.b_nonuniform, r, -w2, -quarter),
    )
    return ZMixing(theta=theta, chi=chi)


def mixing_angles_x(p: ModelParams) -> XMixing:
    """
    Angles of the axis-X eigenstates

    |psi_1,2> = (sin|00> + cos|01> + cos|10> + sin|11>)/sqrt(2)
    |psi_3,4> = (sin|00> + chi' cos|01> - chi' cos|10> - sin|11>)/sqrt(2)

    chi' = (-iD_x - b_x)/sqrt(b_x^2 + D_x^2), taken as -1 when b_x = D_x = 0.
    """
    p.require_axis(Axis.X, "mixing_angles_x")
    w1, w2 = splittings_x(p)
    rho = math.hypot(p.b_nonuniform, p.d)
    chi = complex(-p.b_nonuniform, -p.d) / rho if rho > 0.0 else complex(-1.0, 0.0)

    half = math.pi / 2.0
    phi = (
        _family_angle(p.j_z - p.j_y, 2.0 * p.b_uniform, w1, half),
        _family_angle(p.j_z - p.j_y, 2.0 * p.b_uniform, -w1, 0.0),
        _family_angle(p.j_y + p.j_z, 2.0 * rho, w2, half),
        _family_angle(p.j_y + p.j_z, 2.0 * rho, -w2, 0.0),
    )
    return XMixing(phi=phi, chi=chi)


def _sorted_system(levels, vectors) -> EigenSystem:
    levels = np.asarray(levels, dtype=float)
    vectors = np.column_stack(vectors).astype(complex)
    # stable sort keeps the family order on ties
    order = np.argsort(levels, kind="stable")
    return EigenSystem(eigenvalues=levels[order], eigenvectors=vectors[:, order])


def family_levels_z(p: ModelParams) -> Tuple[float, float, float, float]:
    """E1..E4 = J_z + w1, J_z - w1, -J_z + w2, -J_z - w2"""
    w1, w2 = splittings_z(p)
    return p.j_z + w1, p.j_z - w1, -p.j_z + w2, -p.j_z - w2


def family_levels_x(p: ModelParams) -> Tuple[float, float, float, float]:
    """E'1..E'4 = J_x + w1', J_x - w1', -J_x + w2', -J_x - w2'"""
    w1, w2 = splittings_x(p)
    return p.j_x + w1, p.j_x - w1, -p.j_x + w2, -p.j_x - w2


def family_vectors_z(p: ModelParams) -> List[np.ndarray]:
    """|phi_1..4> in family order"""
    p.require_axis(Axis.Z, "family_vectors_z")
    mixing = mixing_angles_z(p)
    t1, t2, t3, t4 = mixing.theta
    return [
        np.array([math.sin(t1), 0, 0, math.cos(t1)], dtype=complex),
        np.array([math.sin(t2), 0, 0, math.cos(t2)], dtype=complex),
        np.array([0, math.sin(t3), mixing.chi * math.cos(t3), 0], dtype=complex),
        np.array([0, math.sin(t4), mixing.chi * math.cos(t4), 0], dtype=complex),
    ]


def family_vectors_x(p: ModelParams) -> List[np.ndarray]:
    """|psi_1..4> in family order"""
    p.require_axis(Axis.X, "family_vectors_x")
    mixing = mixing_angles_x(p)
    chi = mixing.chi
    root_half = 1.0 / math.sqrt(2.0)

    def symmetric(angle):
        s, c = math.sin(angle), math.cos(angle)
        return root_half * np.array([s, c, c, s], dtype=complex)

    def antisymmetric(angle):
        s, c = math.sin(angle), math.cos(angle)
        return root_half * np.array([s, chi * c, -chi * c, -s], dtype=complex)

    f1, f2, f3, f4 = mixing.phi
    return [symmetric(f1), symmetric(f2), antisymmetric(f3), antisymmetric(f4)]


def analytic_spectrum_z(p: ModelParams) -> EigenSystem:
    """Closed-form eigensystem of the axis-Z Hamiltonian"""
    p.require_axis(Axis.Z, "analytic_spectrum_z")
    return _sorted_system(family_levels_z(p), family_vectors_z(p))


def analytic_spectrum_x(p: ModelParams) -> EigenSystem:
    """Closed-form eigensystem of the axis-X Hamiltonian"""
    p.require_axis(Axis.X, "analytic_spectrum_x")
    return _sorted_system(family_levels_x(p), family_vectors_x(p))


def analytic_spectrum(p: ModelParams) -> EigenSystem:
    if p.axis is Axis.Z:
        return analytic_spectrum_z(p)
    return analytic_spectrum_x(p)


def _off_diagonal_mass(a: List[List[complex]]) -> float:
    n = len(a)
    return math.sqrt(sum(a[k][l].real ** 2 + a[k][l].imag ** 2
                         for k in range(n) for l in range(n) if k != l))


def _rotation(theta: float) -> Tuple[float, float]:
    """(c, s) of the smaller Jacobi rotation for cot(2 angle) = theta"""
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
        if theta < 0.0:
            t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    return c, t * c


def _check_small_finite(a: np.ndarray):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_ORACLE_DIMENSION:
        raise ValueError(f"Matrix dimension {a.shape[0]} exceeds {MAX_ORACLE_DIMENSION}")
    if not np.all(np.isfinite(a)):
        raise ValueError("Matrix has non-finite entries")


def hermitian_eigensolve(h: np.ndarray) -> EigenSystem:
    """
    Full eigendecomposition of a small Hermitian matrix by cyclic Jacobi rotations

    Each rotation first removes the phase of the pivot a_pq, then applies the real
    two-sided rotation that zeroes it. Pivots already below 1e-14 ||H||_F / n are
    skipped; sweeps stop when the off-diagonal Frobenius mass is at most
    1e-14 ||H||_F, or after 100 sweeps. Rotations touch only rows and columns
    p, q, as scalar arithmetic on nested lists.

    Args:
        h: square Hermitian array, at most 8x8

    Returns:
        EigenSystem with ascending eigenvalues
    """
    h = np.array(h, dtype=complex)
    _check_small_finite(h)
    n = h.shape[0]

    norm = float(np.linalg.norm(h))
    asymmetry = float(np.max(np.abs(h - h.conj().T)))
    if asymmetry > INPUT_HERMITIAN_TOLERANCE * max(1.0, norm):
        raise ValueError(f"Matrix is not Hermitian (max |H - H^dagger| = {asymmetry:.3e})")
    if norm == 0.0:
        return EigenSystem(eigenvalues=np.zeros(n), eigenvectors=np.eye(n, dtype=complex))

    a = (0.5 * (h + h.conj().T)).tolist()
    v = np.eye(n, dtype=complex).tolist()
    target = CONVERGENCE_RATIO * norm
    skip = target / n
    sweeps = 0
    while True:
        off = _off_diagonal_mass(a)
        if off <= target:
            break
        if sweeps >= MAX_SWEEPS:
            logger.warning(f"Jacobi stopped after {MAX_SWEEPS} sweeps with off-diagonal mass {off:.3e}")
            break
        sweeps += 1

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                magnitude = abs(apq)
                if magnitude <= skip:
                    continue
                phase = apq / magnitude
                back = phase.conjugate()
                app = a[p][p].real
                aqq = a[q][q].real
                c, s = _rotation((aqq - app) / (2.0 * magnitude))
                t = s / c

                for row in a:
                    x, y = row[p], row[q]
                    row[p] = c * x - s * back * y
                    row[q] = s * x + c * back * y
                row_p, row_q = a[p], a[q]
                for k in range(n):
                    x, y = row_p[k], row_q[k]
                    row_p[k] = c * x - s * phase * y
                    row_q[k] = s * x + c * phase * y
                row_p[p] = app - t * magnitude
                row_q[q] = aqq + t * magnitude
                row_p[q] = 0.0
                row_q[p] = 0.0

                for row in v:
                    x, y = row[p], row[q]
                    row[p] = c * x - s * back * y
                    row[q] = s * x + c * back * y

    logger.debug(f"Jacobi converged in {sweeps} sweeps (n={n})")
    levels = np.array([a[i][i].real for i in range(n)])
    vectors = np.array(v, dtype=complex)
    order = np.argsort(levels, kind="stable")
    return EigenSystem(eigenvalues=levels[order], eigenvectors=vectors[:, order])


def singular_values(m: np.ndarray) -> np.ndarray:
    """
    Singular values of a small square complex matrix, descending

    One-sided Jacobi: pairs of columns are rotated until every pair is
    orthogonal to 1e-14 relative to their norms; the column norms are then the
    singular values, accurate to about 1e-16 ||M|| even when tiny.
    """
    m = np.array(m, dtype=complex)
    _check_small_finite(m)
    n = m.shape[0]
    columns = m.T.tolist()

    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                x, y = columns[p], columns[q]
                alpha = sum(z.real * z.real + z.imag * z.imag for z in x)
                beta = sum(z.real * z.real + z.imag * z.imag for z in y)
                gamma = sum(xi.conjugate() * yi for xi, yi in zip(x, y))
                magnitude = abs(gamma)
                if magnitude == 0.0 or magnitude <= CONVERGENCE_RATIO * math.sqrt(alpha * beta):
                    continue
                rotated = True
                back = (gamma / magnitude).conjugate()
                c, s = _rotation((beta - alpha) / (2.0 * magnitude))
                columns[p] = [c * xi - s * back * yi for xi, yi in zip(x, y)]
                columns[q] = [s * xi + c * back * yi for xi, yi in zip(x, y)]
        if not rotated:
            break
    else:
        logger.warning(f"One-sided Jacobi stopped after {MAX_SWEEPS} sweeps")

    norms = [math.sqrt(sum(z.real * z.real + z.imag * z.imag for z in col)) for col in columns]
    return np.array(sorted(norms, reverse=True))
