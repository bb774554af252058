"""
Two-Qubit Concurrence
=====================

Wootters concurrence C = max{2 lambda_max - sum(lambda_i), 0}, where lambda_i
are the square roots of the eigenvalues of R = rho (sy x sy) rho* (sy x sy).

Two independent routes:

1. Closed forms for the Gibbs states of both axis variants. Each family of two
   levels contributes a pair of lambdas; they are evaluated from normalised
   Boltzmann weights, which is the same algebra as the e^{J/T} cosh/sinh(w/T)/Z
   expressions but never overflows.

2. A density-matrix oracle for any valid two-qubit state: lambda_i are the
   singular values of sqrt(rho) (sy x sy) sqrt(rho)*, from a one-sided Jacobi.

Plus the T = 0 ground-state concurrence of the axis-X model, three branches
keyed on the level crossing at J_x = (w1' - w2')/2, and the axis-Z one through
the duality C_x(J_x, J_y, J_z) = C_z(J_y, J_z, J_x).
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from spin_model import Axis, ModelParams, SIGMA_Y, build_hamiltonian, two_site
from spectrum import (
    family_levels_x,
    family_levels_z,
    family_vectors_x,
    hermitian_eigensolve,
    singular_values,
    splittings_x,
    splittings_z,
)
from thermal_state import (
    DensityMatrix4,
    boltzmann_weights,
    gibbs_state,
    require_positive_temperature,
)

logger = logging.getLogger(__name__)

SPIN_FLIP = two_site(SIGMA_Y, SIGMA_Y)

NORM_TOLERANCE = 1e-10
LAMBDA_CLAMP = 1e-12
RANGE_SLACK = 1e-12
# |J_x - (w1' - w2')/2| at or below this counts as the level crossing itself
CROSSING_TOLERANCE = 1e-12
SINGULAR_SPLITTING = 1e-12


@dataclass(frozen=True)
class LambdaQuadruple:
    """Square roots of the eigenvalues of R, sorted descending"""
    values: Tuple[float, float, float, float]

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "LambdaQuadruple":
        cleaned = []
        for v in values:
            v = float(v)
            if v < -LAMBDA_CLAMP:
                raise ValueError(f"Lambda {v:.3e} is negative beyond rounding")
            cleaned.append(max(v, 0.0))
        if len(cleaned) != 4:
            raise ValueError(f"Expected four lambdas, got {len(cleaned)}")
        return cls(tuple(sorted(cleaned, reverse=True)))

    def concurrence(self) -> float:
        l1, l2, l3, l4 = self.values
        return _as_concurrence(l1 - l2 - l3 - l4)


def _as_concurrence(value: float) -> float:
    if value > 1.0 + RANGE_SLACK:
        logger.warning(f"Concurrence {value:.15f} exceeds 1 beyond rounding; clamped")
    return min(max(float(value), 0.0), 1.0)


def _normalised_ket(amplitudes) -> np.ndarray:
    ket = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if ket.shape != (4,):
        raise ValueError(f"A two-qubit ket has 4 amplitudes, got {ket.size}")
    if not np.all(np.isfinite(ket)):
        raise ValueError("Amplitudes must be finite")
    norm = float(np.sum(np.abs(ket) ** 2))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ValueError(f"Amplitudes are not normalised (sum |a|^2 = {norm:.12f})")
    return ket


def concurrence_pure(a: complex, b: complex, c: complex, d: complex) -> float:
    """C(a|00> + b|01> + c|10> + d|11>) = 2|ad - bc|"""
    a, b, c, d = _normalised_ket([a, b, c, d])
    return _as_concurrence(2.0 * abs(a * d - b * c))


def pure_state_density(amplitudes) -> DensityMatrix4:
    """|psi><psi|, carrying the ket as its one-term spectral decomposition"""
    ket = _normalised_ket(amplitudes)
    return DensityMatrix4.from_spectrum([1.0], ket.reshape(4, 1))


def wootters_lambdas_oracle(rho: DensityMatrix4) -> LambdaQuadruple:
    """
    Lambdas of any valid two-qubit state

    With M = sqrt(rho) S sqrt(rho)*, S = sy x sy, M M^dagger = sqrt(rho) rho~ sqrt(rho)
    has the eigenvalues of R, so lambda_i are the singular values of M, taken by
    one-sided Jacobi (absolute error about 1e-16 even for near-zero lambdas).
    """
    weights, vectors = rho.spectrum()
    rho.validate(weights)

    roots = np.sqrt(np.clip(np.asarray(weights, dtype=float), 0.0, None))
    sqrt_rho = (vectors * roots) @ vectors.conj().T
    m = sqrt_rho @ SPIN_FLIP @ sqrt_rho.conj()
    return LambdaQuadruple.from_values(singular_values(m))


def concurrence_mixed(rho: DensityMatrix4) -> float:
    """max{lambda_1 - lambda_2 - lambda_3 - lambda_4, 0} through the oracle"""
    return wootters_lambdas_oracle(rho).concurrence()


def _family_pair(upper: float, lower: float, mixing: float,
                 field: float, splitting: float) -> Tuple[float, float]:
    """
    The two lambdas contributed by one family of levels c +/- w

    The family block is [[f, m], [m, -f]] with eigenvalues +/- w; `upper` and
    `lower` are the normalised weights of c + w and c - w. In the family's
    two-state subspace the thermal state is a I + (upper - lower)/2 (f, m).sigma/w,
    so with cm = |m|/w, cf = f/w, a = (upper + lower)/2, d = |lower - upper|/2:

        lambda_+ = sqrt(cm^2 a^2 + cf^2 upper lower) + cm d
        lambda_- = upper lower / lambda_+
    """
    if splitting > 0.0:
        cm = abs(mixing) / splitting
        cf = field / splitting
    else:
        cm, cf = 1.0, 0.0
    a = 0.5 * (upper + lower)
    d = 0.5 * abs(lower - upper)
    root = math.sqrt((cm * a) ** 2 + cf * cf * upper * lower)
    plus = root + cm * d
    minus = upper * lower / plus if plus > 0.0 else 0.0
    return plus, minus


def family_lambdas_z(p: ModelParams, t: float) -> Tuple[float, float, float, float]:
    """
    (lambda_1, lambda_2, lambda_3, lambda_4) of the axis-Z Gibbs state, unsorted

    lambda_1,2 come from the E3,4 = -J_z +/- w2 family, lambda_3,4 from
    E1,2 = J_z +/- w1; lambda_1 >= lambda_2 and lambda_3 >= lambda_4.
    """
    p.require_axis(Axis.Z, "family_lambdas_z")
    require_positive_temperature(t)
    w1, w2 = splittings_z(p)
    p1, p2, p3, p4 = boltzmann_weights(family_levels_z(p), t)
    r = math.hypot(p.j_x + p.j_y, 2.0 * p.d)
    l1, l2 = _family_pair(p3, p4, r, 2.0 * p.b_nonuniform, w2)
    l3, l4 = _family_pair(p1, p2, p.j_x - p.j_y, 2.0 * p.b_uniform, w1)
    return l1, l2, l3, l4


def printed_lambdas_z(p: ModelParams, t: float) -> LambdaQuadruple:
    """
    Axis-Z lambdas in the hyperbolic form

        lambda_1,2 = e^{J_z/T}/Z [sqrt(w2^2 cosh^2(w2/T) - 4b^2 sinh^2(w2/T)) +/- r sinh(w2/T)] / w2
        lambda_3,4 = e^{-J_z/T}/Z [sqrt(w1^2 cosh^2(w1/T) - 4B^2 sinh^2(w1/T)) +/- |J_x - J_y| sinh(w1/T)] / w1

    with r = sqrt((J_x + J_y)^2 + 4D^2). cosh and sinh are carried as
    e^{-w/T} cosh(w/T) and e^{-w/T} sinh(w/T), the factor e^{w/T} going into the
    prefactor, so large w/T stays finite.
    """
    p.require_axis(Axis.Z, "printed_lambdas_z")
    require_positive_temperature(t)
    w1, w2 = splittings_z(p)
    log_z = float(logsumexp(-np.asarray(family_levels_z(p), dtype=float) / t))

    def pair(centre, mixing, field, splitting):
        x = splitting / t
        cosh_scaled = 0.5 * (1.0 + math.exp(-2.0 * x))
        sinh_scaled = -0.5 * math.expm1(-2.0 * x)
        if splitting > 0.0:
            cm, cf = abs(mixing) / splitting, field / splitting
        else:
            cm, cf = 1.0, 0.0
        prefactor = math.exp((splitting - centre) / t - log_z)
        root = math.sqrt(max(cosh_scaled ** 2 - (cf * sinh_scaled) ** 2, 0.0))
        return prefactor * (root + cm * sinh_scaled), prefactor * (root - cm * sinh_scaled)

    l1, l2 = pair(-p.j_z, math.hypot(p.j_x + p.j_y, 2.0 * p.d), 2.0 * p.b_nonuniform, w2)
    l3, l4 = pair(p.j_z, p.j_x - p.j_y, 2.0 * p.b_uniform, w1)
    return LambdaQuadruple.from_values([l1, l2, l3, l4])


def family_lambdas_x(p: ModelParams, t: float) -> Tuple[float, float, float, float]:
    """
    (lambda'_1, lambda'_2, lambda'_3, lambda'_4) of the axis-X Gibbs state, unsorted

    lambda'_1,2 come from E'3,4 = -J_x +/- w2', lambda'_3,4 from E'1,2 = J_x +/- w1'.
    """
    p.require_axis(Axis.X, "family_lambdas_x")
    require_positive_temperature(t)
    w1, w2 = splittings_x(p)
    p1, p2, p3, p4 = boltzmann_weights(family_levels_x(p), t)
    mixing = math.hypot(2.0 * p.d, p.j_y + p.j_z)
    l1, l2 = _family_pair(p3, p4, mixing, 2.0 * p.b_nonuniform, w2)
    l3, l4 = _family_pair(p1, p2, p.j_y - p.j_z, 2.0 * p.b_uniform, w1)
    return l1, l2, l3, l4


def family_lambdas(p: ModelParams, t: float) -> Tuple[float, float, float, float]:
    if p.axis is Axis.Z:
        return family_lambdas_z(p, t)
    return family_lambdas_x(p, t)


def leading_family_gap(p: ModelParams, t: float) -> float:
    """lambda_1 - lambda_3; its sign tells which family holds lambda_max"""
    l1, _, l3, _ = family_lambdas(p, t)
    return l1 - l3


def closed_form_lambdas_z(p: ModelParams, t: float) -> LambdaQuadruple:
    return LambdaQuadruple.from_values(family_lambdas_z(p, t))


def closed_form_lambdas_x(p: ModelParams, t: float) -> LambdaQuadruple:
    return LambdaQuadruple.from_values(family_lambdas_x(p, t))


def closed_form_lambdas(p: ModelParams, t: float) -> LambdaQuadruple:
    if p.axis is Axis.Z:
        return closed_form_lambdas_z(p, t)
    return closed_form_lambdas_x(p, t)


def printed_radicand_lambdas_x(p: ModelParams, t: float) -> LambdaQuadruple:
    """
    Axis-X lambdas through the nested radicand, without factoring it

        lambda'^2 = | (pu^2 + pl^2)/2 - 2 cf^2 d^2
                      +/- sqrt(cm^2 [((pl^2 - pu^2)/2)^2 - 4 cf^2 d^4]) |

    per family, which is e^{J_x/T}/Z' [cosh(2w/T) - 8f^2/w^2 sinh^2(w/T) +/- ...]
    written with weights. The radicand is a perfect square, so this loses
    about half the digits of family_lambdas_x for small lambdas.
    """
    p.require_axis(Axis.X, "printed_radicand_lambdas_x")
    require_positive_temperature(t)
    w1, w2 = splittings_x(p)
    p1, p2, p3, p4 = boltzmann_weights(family_levels_x(p), t)

    def pair(upper, lower, mixing, field, splitting):
        if splitting > 0.0:
            cm2 = (mixing / splitting) ** 2
            cf2 = (field / splitting) ** 2
        else:
            cm2, cf2 = 1.0, 0.0
        d = 0.5 * (lower - upper)
        base = 0.5 * (upper ** 2 + lower ** 2) - 2.0 * cf2 * d ** 2
        radicand = cm2 * ((0.5 * (lower ** 2 - upper ** 2)) ** 2 - 4.0 * cf2 * d ** 4)
        spread = math.sqrt(max(radicand, 0.0))
        return math.sqrt(abs(base + spread)), math.sqrt(abs(base - spread))

    l1, l2 = pair(p3, p4, math.hypot(2.0 * p.d, p.j_y + p.j_z), 2.0 * p.b_nonuniform, w2)
    l3, l4 = pair(p1, p2, p.j_y - p.j_z, 2.0 * p.b_uniform, w1)
    return LambdaQuadruple.from_values([l1, l2, l3, l4])


def thermal_concurrence(p: ModelParams, t: float) -> float:
    """Concurrence of the Gibbs state at T > 0 from the closed forms"""
    return closed_form_lambdas(p, t).concurrence()


def concurrence_from_hamiltonian(h: np.ndarray, t: float) -> float:
    """Brute force: Jacobi eigensystem -> Gibbs state -> oracle lambdas"""
    require_positive_temperature(t)
    rho = gibbs_state(hermitian_eigensolve(h), t)
    return concurrence_mixed(rho)


def oracle_concurrence(p: ModelParams, t: float) -> float:
    return concurrence_from_hamiltonian(build_hamiltonian(p), t)


def axis_dual(p: ModelParams) -> ModelParams:
    """
    The other axis variant with the same concurrence at every T

    axis X (J_x, J_y, J_z) -> axis Z (J_y, J_z, J_x), and back; D, B, b unchanged.
    """
    if p.axis is Axis.X:
        return ModelParams.z(p.j_y, p.j_z, p.j_x, p.d, p.b_uniform, p.b_nonuniform)
    return ModelParams.x(p.j_z, p.j_x, p.j_y, p.d, p.b_uniform, p.b_nonuniform)


def crossing_gap_x(p: ModelParams) -> float:
    """J_x - (w1' - w2')/2: negative when E'_2 is the ground level, positive for E'_4"""
    p.require_axis(Axis.X, "crossing_gap_x")
    w1, w2 = splittings_x(p)
    return p.j_x - 0.5 * (w1 - w2)


def ground_state_concurrence_x(p: ModelParams) -> float:
    """
    T = 0 concurrence of the axis-X model

        |J_y - J_z| / w1'                     J_x < (w1' - w2')/2   (ground |psi_2>)
        middle branch for |G> = (|psi_2> + |psi_4>)/sqrt(2)   at the crossing
        sqrt(4D_x^2 + (J_y + J_z)^2) / w2'    J_x > (w1' - w2')/2   (ground |psi_4>)

    A vanishing w1' or w2' falls back to the concurrence of the family state itself.
    """
    p.require_axis(Axis.X, "ground_state_concurrence_x")
    w1, w2 = splittings_x(p)
    gap = crossing_gap_x(p)
    delta = p.j_y - p.j_z
    total = p.j_y + p.j_z

    if gap < -CROSSING_TOLERANCE:
        if w1 < SINGULAR_SPLITTING:
            return _family_state_concurrence(p, "lower symmetric")
        return _as_concurrence(abs(delta) / w1)

    if gap > CROSSING_TOLERANCE:
        if w2 < SINGULAR_SPLITTING:
            return _family_state_concurrence(p, "lower antisymmetric")
        return _as_concurrence(math.sqrt(4.0 * p.d ** 2 + total ** 2) / w2)

    if w1 < SINGULAR_SPLITTING or w2 < SINGULAR_SPLITTING:
        return _family_state_concurrence(p, "crossing")
    rho2 = p.b_nonuniform ** 2 + p.d ** 2
    value = (delta / w1 + total / w2) ** 2 + 4.0 * p.d ** 2 / w2 ** 2
    if rho2 > 0.0:
        value -= 2.0 * p.d ** 2 * delta * (w2 + total) / (rho2 * w1 * w2)
    return _as_concurrence(0.5 * math.sqrt(abs(value)))


def _family_state_concurrence(p: ModelParams, which: str) -> float:
    logger.warning(f"Degenerate splitting for {p.describe()}; "
                   f"using the {which} family state directly")
    vectors = family_vectors_x(p)
    if which == "lower symmetric":
        ket = vectors[1]
    elif which == "lower antisymmetric":
        ket = vectors[3]
    else:
        ket = (vectors[1] + vectors[3]) / math.sqrt(2.0)
    return concurrence_pure(*ket)


def ground_state_concurrence_z(p: ModelParams) -> float:
    p.require_axis(Axis.Z, "ground_state_concurrence_z")
    return ground_state_concurrence_x(axis_dual(p))


def ground_state_concurrence(p: ModelParams) -> float:
    if p.axis is Axis.Z:
        return ground_state_concurrence_z(p)
    return ground_state_concurrence_x(p)
