import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_unit
from unruh_oqs.dissipator import (CorrelationTransforms, KossakowskiMatrix, check_positivity,
                                  cross_matrix, kossakowski_from_coefficients, kossakowski_general,
                                  kossakowski_large_acceleration, kossakowski_scalar, psi_matrices,
                                  unit_vector)
from unruh_oqs.errors import DomainError, HermiticityError, PositivityError, ShapeError
from unruh_oqs.field_correlations import fourier_g


def test_unit_vector_normalizes_or_rejects():
    assert np.allclose(unit_vector([0, 0, 2]), [0, 0, 1])
    with pytest.raises(DomainError):
        unit_vector([0, 0, 2], normalize=False)
    with pytest.raises(DomainError):
        unit_vector([0, 0, 0])
    with pytest.raises(ShapeError):
        unit_vector([1, 0])


def test_cross_matrix_acts_as_cross_product(rng):
    n, r = rng.normal(size=3), rng.normal(size=3)
    assert np.allclose(cross_matrix(n) @ r, np.cross(r, n))


def test_psi_projectors_resolve_identity(rng):
    psi = psi_matrices(random_unit(rng))
    assert np.allclose(psi["0"] + psi["+"] + psi["-"], np.eye(3), atol=1e-15)
    assert np.allclose(psi["+"].conj(), psi["-"])
    for xi in ("0", "+", "-"):
        assert np.allclose(psi[xi] @ psi[xi], psi[xi], atol=1e-15)
    assert np.allclose(psi["+"] @ psi["-"], 0, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(omega=st.floats(0.05, 10), beta=st.floats(0.05, 10),
       nx=st.floats(-1, 1), ny=st.floats(-1, 1), nz=st.floats(0.1, 1))
def test_scalar_spectrum_is_g_at_bohr_frequencies(omega, beta, nx, ny, nz):
    k = kossakowski_scalar(omega, beta, [nx, ny, nz])
    expected = np.sort([fourier_g(omega, beta), fourier_g(-omega, beta), fourier_g(0.0, beta)])
    evals = np.linalg.eigvalsh(k.a)
    assert np.allclose(evals, expected, rtol=1e-11, atol=1e-13)
    assert (k.A - k.B) / (k.A + k.B) == pytest.approx(math.exp(-beta * omega), rel=1e-11)
    assert check_positivity(k)[1]


def test_structured_form_entries(rng):
    n = random_unit(rng)
    k = kossakowski_from_coefficients(0.7, 0.2, -0.1, n)
    for i in range(3):
        for j in range(3):
            eps = sum(np.sign(np.linalg.det(np.eye(3)[[i, j, m]])) * n[m] for m in range(3))
            want = 0.7 * (i == j) - 1j * 0.2 * eps - 0.1 * n[i] * n[j]
            assert k.a[i, j] == pytest.approx(want, abs=1e-15)


def test_large_acceleration_form():
    k = kossakowski_large_acceleration(1.0, 2.0, [0, 0, 1])
    assert k.A == pytest.approx(1 / (4 * math.pi))
    assert k.ratio == pytest.approx(1.0)
    assert check_positivity(k)[0][0] == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(PositivityError):
        kossakowski_large_acceleration(1.0, 2.5, [0, 0, 1])


def test_positivity_failure_and_hermiticity_guard():
    k = kossakowski_from_coefficients(0.1, 0.3, 0.0, [0, 0, 1])
    evals, ok = check_positivity(k)
    assert not ok and evals[0] == pytest.approx(-0.2)
    with pytest.raises(PositivityError):
        check_positivity(k, raise_on_failure=True)
    with pytest.raises(HermiticityError):
        KossakowskiMatrix(np.array([[1, 1j, 0], [1j, 1, 0], [0, 0, 1]]))


def test_inconsistent_coefficients_detected():
    k = kossakowski_from_coefficients(1.0, 0.2, 0.1, [0, 0, 1])
    bad = KossakowskiMatrix(k.a, A=2.0, B=0.2, C=0.1, n=k.n)
    with pytest.raises(DomainError):
        check_positivity(bad)


@pytest.mark.parametrize("omega,beta", [(0.3, 0.5), (1.0, 1.0), (4.0, 2.5)])
def test_general_builder_reduces_to_scalar_form(omega, beta, rng):
    n = random_unit(rng)
    k_gen, b = kossakowski_general(CorrelationTransforms.scalar_field(omega, beta), n)
    k_sc = kossakowski_scalar(omega, beta, n)
    assert np.max(np.abs(k_gen.a - k_sc.a)) < 1e-14
    assert np.allclose(b, 0.0, atol=1e-16)


def test_general_builder_lamb_vector_from_hilbert_part(rng):
    n = random_unit(rng)
    beta = {xi: 1j * v * np.eye(4) for xi, v in zip(("0", "+", "-"), (0.0, 0.3, -0.1))}
    corr = CorrelationTransforms(CorrelationTransforms.scalar_field(1.0, 1.0).alpha, beta)
    _, b = kossakowski_general(corr, n)
    # beta(xi) = i v_xi 1 gives b = (v_+ - v_-) n
    assert np.allclose(b, 0.4 * n, atol=1e-14)


def test_correlation_transforms_validation():
    with pytest.raises(HermiticityError):
        CorrelationTransforms({"0": np.diag([1, 1, 1, 1j])})
    with pytest.raises(ShapeError):
        CorrelationTransforms({"0": np.eye(3)})
