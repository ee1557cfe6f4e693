import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2spectral.errors import GaugeFailureError, PoleError
from g2spectral.loop import (KillingField, c_matrix, default_sample_zetas, evaluate_at, evaluate_many,
                             gauge_reduce_lambda, gauged_value, random_killing_field, s_matrix,
                             symmetry_residuals, zero_field)
from g2spectral.octonion import derivation_residual, graded_basis


def test_shape_and_determinism():
    A = random_killing_field(0, 4)
    assert A.d == 1 and A.coeffs.shape == (3, 7, 7)
    assert np.array_equal(A.coeffs, random_killing_field(0, 4).coeffs)
    assert not np.array_equal(A.coeffs, random_killing_field(0, 5).coeffs)
    assert random_killing_field(2, 0).coeffs.shape == (27, 7, 7)
    with pytest.raises(ValueError):
        KillingField(0, np.zeros((5, 7, 7)))
    with pytest.raises(ValueError):
        KillingField(-1, np.zeros((3, 7, 7)))


@settings(max_examples=10, deadline=None)
@given(k=st.integers(0, 2), seed=st.integers(0, 10**6))
def test_random_fields_satisfy_the_symmetries(k, seed):
    r = symmetry_residuals(random_killing_field(k, seed))
    assert r.max() < 1e-12


def test_evaluation_matches_direct_sum(field1):
    z = 0.9 * np.exp(0.4j)
    direct = sum(field1.coeff(j) * z**j for j in range(-field1.d, field1.d + 1))
    assert np.allclose(field1(z), direct, atol=1e-12)
    assert np.allclose(evaluate_many(field1, [z, 2 * z])[1], field1(2 * z))


def test_values_are_in_g2_and_traceless(field0):
    M = field0(1.3 * np.exp(0.2j))
    assert abs(np.trace(M)) < 1e-12
    assert derivation_residual(M) < 1e-11
    assert np.poly(M)[[1, 3, 5, 7]] == pytest.approx(np.zeros(4), abs=1e-9)


def test_single_constant_coefficient():
    A = zero_field(0)
    B = graded_basis(0)[0].real
    A = A.with_coeff(0, B)
    assert np.allclose(A(0.3 + 2j), B)


def test_pole_at_zero(field0):
    with pytest.raises(PoleError):
        evaluate_at(field0, 0)
    with pytest.raises(PoleError):
        evaluate_many(field0, [1.0, 0.0])


def test_wrong_degree_breaks_tau(field0):
    bad = field0.with_coeff(1, graded_basis(2)[0] * 3)
    bad = bad.with_coeff(-1, np.conj(bad.coeff(1)))
    assert symmetry_residuals(bad).tau > 0.1


def test_broken_conjugation_breaks_rho(field0):
    bad = field0.with_coeff(-1, 3 * field0.coeff(-1) + 0.5)
    assert symmetry_residuals(bad).rho > 0.1


def test_s_matrix_is_rotation_on_circle():
    t = 0.83
    S = s_matrix(np.exp(1j * t))
    R = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    assert np.allclose(S, R)
    L = s_matrix(np.exp(1j * t), literal=True)
    assert np.abs(L.T @ L - np.eye(2)).max() > 0.1
    assert np.allclose(c_matrix(1.0), np.eye(7))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_gauge_reduction(k):
    A = random_killing_field(k, 10 + k)
    G = gauge_reduce_lambda(A)
    assert G.tau_residual < 1e-9
    assert G.window_residual < 1e-9
    assert G.fit_residual < 1e-9
    assert G.coeffs.shape == (2 * (k + 1) + 1, 7, 7)
    # oracle: the reduced loop reproduces the gauged field at lambda = zeta^6 off the fit circle
    for z in default_sample_zetas(5, seed=99):
        assert np.allclose(G.evaluate(z**6), gauged_value(A, z), atol=1e-8)
        cp_a = np.poly(A(z))
        cp_g = np.poly(G.evaluate(z**6))
        assert np.abs(cp_a - cp_g).max() / max(1, np.abs(cp_a).max()) < 1e-9


def test_literal_gauge_fails(field0):
    with pytest.raises(GaugeFailureError):
        gauge_reduce_lambda(field0, literal=True)


def test_conjugation_by_constant(field0):
    from g2spectral.octonion import TAU_MATRIX
    B = field0.conjugated(TAU_MATRIX)
    z = 1.2 * np.exp(0.1j)
    assert np.allclose(B(z), TAU_MATRIX @ field0(z) @ TAU_MATRIX.T)
