#!/usr/bin/env python3
"""
Tests for spectrum.py
Closed-form eigensystems against the Jacobi eigensolver
"""

import math
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spin_model import ModelParams, build_hamiltonian
from spectrum import (
    analytic_spectrum,
    family_levels_x,
    family_vectors_x,
    family_vectors_z,
    hermitian_eigensolve,
    mixing_angles_x,
    mixing_angles_z,
    singular_values,
    splittings_x,
    splittings_z,
)

parameter = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
models = st.builds(ModelParams.build, st.sampled_from(["z", "x"]),
                   parameter, parameter, parameter, parameter, parameter, parameter)


def test_splittings():
    p = ModelParams.z(1.0, 0.5, 0.2, d=1.0, b_uniform=1.0, b_nonuniform=0.5)
    w1, w2 = splittings_z(p)
    assert w1 == pytest.approx(math.sqrt(4.0 + 0.25))
    assert w2 == pytest.approx(math.sqrt(1.0 + 4.0 + 2.25))

    q = ModelParams.x(0.8, 0.5, 0.2, d=1.0, b_uniform=3.0, b_nonuniform=1.5)
    w1, w2 = splittings_x(q)
    assert w1 == pytest.approx(math.sqrt(36.0 + 0.09))
    assert w2 == pytest.approx(math.sqrt(9.0 + 4.0 + 0.49))
    assert family_levels_x(q)[3] == pytest.approx(-0.8 - w2)


@seed(21)
@settings(max_examples=80, deadline=None)
@given(models)
def test_analytic_eigenvalues_match_jacobi(p):
    numeric = hermitian_eigensolve(build_hamiltonian(p))
    analytic = analytic_spectrum(p)
    np.testing.assert_allclose(analytic.eigenvalues, numeric.eigenvalues, atol=1e-10)


@seed(22)
@settings(max_examples=80, deadline=None)
@given(models)
def test_analytic_eigenvectors(p):
    es = analytic_spectrum(p)
    assert es.orthonormality_error() < 1e-12
    assert es.residual(build_hamiltonian(p)) < 1e-10


def test_degenerate_families_use_fixed_angles():
    # no field and J_x = J_y: the |00>, |11> family is degenerate
    z = mixing_angles_z(ModelParams.z(0.5, 0.5, 0.2))
    assert z.theta[0] == pytest.approx(math.pi / 4)
    assert z.theta[1] == pytest.approx(-math.pi / 4)

    # b = D = 0 and J_y = -J_z: the antisymmetric axis-X family is degenerate
    x = mixing_angles_x(ModelParams.x(1.0, 0.4, -0.4))
    assert x.phi[2] == pytest.approx(math.pi / 2)
    assert x.phi[3] == pytest.approx(0.0)
    assert x.chi == -1


def test_family_vectors_are_orthonormal_when_degenerate():
    for vectors in (family_vectors_z(ModelParams.z(0.0, 0.0, 0.0)),
                    family_vectors_x(ModelParams.x(0.0, 0.0, 0.0))):
        basis = np.column_stack(vectors)
        np.testing.assert_allclose(basis.conj().T @ basis, np.eye(4), atol=1e-14)


@seed(24)
@settings(max_examples=80, deadline=None)
@given(models)
def test_spectrum_invariant_under_field_sign_flip(p):
    flipped = p.with_fields(d=-p.d, b_uniform=-p.b_uniform, b_nonuniform=-p.b_nonuniform)
    np.testing.assert_allclose(analytic_spectrum(flipped).eigenvalues,
                               analytic_spectrum(p).eigenvalues, atol=1e-12)
    np.testing.assert_allclose(hermitian_eigensolve(build_hamiltonian(flipped)).eigenvalues,
                               analytic_spectrum(p).eigenvalues, atol=1e-10)


@seed(23)
@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (8, 8), elements=st.floats(-5.0, 5.0)),
       arrays(np.float64, (8, 8), elements=st.floats(-5.0, 5.0)))
def test_jacobi_on_random_hermitian_8x8(real, imag):
    h = (real + real.T) + 1j * (imag - imag.T)
    es = hermitian_eigensolve(h)
    np.testing.assert_allclose(es.eigenvalues, np.linalg.eigvalsh(h), atol=1e-10)
    assert es.orthonormality_error() < 1e-12
    assert es.residual(h) < 1e-10


@seed(25)
@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (4, 4), elements=st.floats(-5.0, 5.0)),
       arrays(np.float64, (4, 4), elements=st.floats(-5.0, 5.0)))
def test_singular_values_match_numpy(real, imag):
    m = real + 1j * imag
    np.testing.assert_allclose(singular_values(m), np.linalg.svd(m, compute_uv=False), atol=1e-12)


def test_singular_values_rank_deficient():
    u = np.array([1.0, 1j, 0.0, 0.5]) / math.sqrt(2.25)
    w = np.array([0.0, 1.0, -1j, 0.0]) / math.sqrt(2.0)
    values = singular_values(3.0 * np.outer(u, w.conj()))
    assert values[0] == pytest.approx(3.0, abs=1e-14)
    assert np.all(values[1:] <= 1e-14)
    np.testing.assert_array_equal(singular_values(np.zeros((4, 4))), np.zeros(4))
    with pytest.raises(ValueError, match="non-finite"):
        singular_values(np.full((4, 4), np.inf))


def test_jacobi_rejects_bad_input():
    with pytest.raises(ValueError, match="square"):
        hermitian_eigensolve(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="exceeds"):
        hermitian_eigensolve(np.eye(9))
    with pytest.raises(ValueError, match="not Hermitian"):
        hermitian_eigensolve(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError, match="non-finite"):
        hermitian_eigensolve(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_jacobi_zero_matrix():
    es = hermitian_eigensolve(np.zeros((4, 4)))
    np.testing.assert_array_equal(es.eigenvalues, np.zeros(4))
    np.testing.assert_array_equal(es.eigenvectors, np.eye(4))


def main():
    return pytest.main([__file__, "-v"])


if __name__ == "__main__":
    sys.exit(main())
