import numpy as np
import pytest

from g2spectral.errors import StiffnessError
from g2spectral.lax import (integrate_flow, isospectral_drift, lax_anticommutator, lax_bracket, lax_rhs,
                            negative_control_drift, phi_coefficients)
from g2spectral.loop import KillingField, random_killing_field, symmetry_residuals, zero_field
from g2spectral.octonion import graded_residual


def _eval(coeffs, lo, z):
    return sum(coeffs[i] * z ** (lo + i) for i in range(coeffs.shape[0]))


@pytest.mark.parametrize("k", [0, 1])
def test_bracket_matches_pointwise_commutator(k):
    A = random_killing_field(k, 3)
    v = np.exp(0.4j)
    full = lax_bracket(A, v)
    z = 0.85 * np.exp(1.2j)
    phi = _eval(phi_coefficients(A, v), -1, z)
    M = A(z)
    assert np.allclose(_eval(full, -(A.d + 1), z), M @ phi - phi @ M, atol=1e-10)
    # the outermost powers are [A_d, A_d] and its conjugate
    scale = np.abs(A.coeffs).max() ** 2
    assert np.abs(full[0]).max() < 1e-15 * scale and np.abs(full[-1]).max() < 1e-15 * scale


def test_rhs_is_graded():
    A = random_killing_field(1, 4)
    rhs = lax_rhs(A, 1.0)
    assert rhs.shape == A.coeffs.shape
    for j in range(-A.d, A.d + 1):
        assert graded_residual(rhs[j + A.d], j) < 1e-11
    field = KillingField(1, rhs)
    assert symmetry_residuals(field).reality < 1e-12


def test_zero_field_is_stationary():
    Z = zero_field(0)
    assert np.all(lax_rhs(Z, 1.0) == 0)
    states = integrate_flow(Z)
    assert all(np.all(s.field.coeffs == 0) for s in states)
    assert isospectral_drift(states).max_drift == 0.0


def test_direction_must_be_unit(field0):
    with pytest.raises(ValueError):
        integrate_flow(field0, 2.0)


@pytest.mark.parametrize("k,seed", [(0, 1), (0, 2), (1, 3)])
def test_flow_is_isospectral(k, seed):
    A = random_killing_field(k, seed)
    states = integrate_flow(A, np.exp(0.3j), 1.0, 1e-10)
    rep = isospectral_drift(states)
    assert rep.max_drift < 1e-6
    assert max(rep.trace_drift) < 1e-6
    assert max(symmetry_residuals(s.field).max() for s in states) < 1e-7
    assert states[-1].drift < 1e-6
    assert np.abs(states[-1].field.coeffs - A.coeffs).max() > 1e-3  # the field did move


def test_tighter_tolerance_reduces_drift(field0):
    loose = isospectral_drift(integrate_flow(field0, 1.0, 1.0, 1e-6)).max_drift
    tight = isospectral_drift(integrate_flow(field0, 1.0, 1.0, 1e-11)).max_drift
    assert tight < loose


def test_reversing_direction_reverses_time(field0):
    fwd = integrate_flow(field0, -1.0, 1.0, 1e-11)[-1].field
    back = integrate_flow(field0, 1.0, -1.0, 1e-11)[-1].field
    assert np.abs(fwd.coeffs - back.coeffs).max() < 1e-8


def test_anticommutator_leaves_g2(field0):
    bad = lax_anticommutator(field0, 1.0)
    assert max(graded_residual(bad[i], i - field0.d - 1) for i in range(bad.shape[0])) > 1e-2


@pytest.mark.parametrize("k,seed", [(0, 1), (0, 5), (1, 2)])
def test_negative_control_moves_spectrum(k, seed):
    assert negative_control_drift(random_killing_field(k, seed)) > 1e-2


def test_blowup_reports_last_state(field0):
    with pytest.raises(StiffnessError) as info:
        integrate_flow(field0, 1j, 50.0, 1e-8, broken=True, blowup=10.0)
    last = info.value.last_state
    assert np.linalg.norm(last.coeffs) > 5 * np.linalg.norm(field0.coeffs)
