import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2spectral import eigenline as eg
from g2spectral import exterior
from g2spectral.errors import BranchPointProximityError, DegenerateOrbitError
from g2spectral.loop import random_killing_field, zero_field
from g2spectral.spectral import laurent_roots, spectral_coefficients

ZETA = 0.93 * np.exp(0.71j)


def _fiber(A, z=ZETA):
    return eg.eigenline_fiber(eg.kernel_v0(eg.omega_fiber(A, z)))


def _random_antisym(seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    return X - X.T


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_three_routes_to_psi_omega_cubed(seed):
    w = _random_antisym(seed)
    pf = eg.psi_omega_cubed(w)
    wedge = eg.psi_omega_cubed_by_wedge(w)
    eps = np.einsum("abcdefg,bc,de,fg->a", exterior.levi_civita(7), w, w, w, optimize=True) / 8
    scale = np.abs(w).max() ** 3
    assert np.abs(pf - wedge).max() < 1e-12 * scale
    assert np.abs(pf - eps).max() < 1e-12 * scale


def test_psi_omega_cubed_spans_the_kernel():
    w = _random_antisym(3)
    u = eg.psi_omega_cubed(w)
    assert np.abs(w @ u).max() < 1e-10 * np.abs(w).max() * np.abs(u).max()


def test_calibration_constant_is_one_sixth():
    assert abs(eg.calibration_constant() - 1 / 6) < 1e-12


def test_omega_is_antisymmetric_and_invariant(field1):
    F = eg.omega_fiber(field1, ZETA)
    W, M = F.omega, F.matrix
    assert np.abs(W + W.T).max() < 1e-10
    rng = np.random.default_rng(0)
    v, w = rng.standard_normal((2, 7))
    assert abs((M @ v) @ W @ w + v @ W @ (M @ w)) < 1e-9 * np.abs(M).max() ** 2
    sv = np.linalg.svd(W, compute_uv=False)
    assert sv[5] > 1e-6 * sv[0] and sv[6] < 1e-10 * sv[0]


@pytest.mark.parametrize("k,seed", [(0, 2), (1, 2), (2, 2)])
def test_kernel_vector(k, seed):
    A = random_killing_field(k, seed)
    F = _fiber(A)
    kern, gvv = eg.v0_residuals(F)
    assert kern < 1e-8 and gvv < 1e-7
    # oracle: a2 from the product of the nonzero eigenvalues
    mus = F.eigenvalues
    top = mus[np.argsort(-mus.real)][:3]
    assert np.isclose(F.a2, np.prod(top) ** 2, rtol=1e-8)
    assert eg.determinant_residual(F) < 1e-8


def test_pairing_pattern(field1):
    F = _fiber(field1)
    off, on = eg.pairing_residuals(F)
    assert off < 1e-8 and on > 1e-4
    vals = F.eigenvalues
    partners = eg.partner_index(vals)
    assert np.abs(vals + vals[partners]).max() < 1e-9 * np.abs(vals).max()
    assert np.all(partners[partners] == np.arange(6))


def test_k_commutes_and_splits(field1):
    R = eg.alpha_restricted_checks(_fiber(field1))
    assert R.commutator < 1e-8
    assert max(R.membership) < 1e-7
    assert sorted(R.sides) == [-1, -1, -1, 1, 1, 1]
    assert R.lagrangian < 1e-8
    assert abs(R.plus_sum) < 1e-9 * max(1, np.abs(_fiber(field1).eigenvalues).max())


def test_w_frame_is_orthogonal_to_v0(field0):
    F = _fiber(field0)
    frame = eg.w_frame(F.v0)
    g = np.eye(7)
    assert np.abs(frame.basis.T @ g @ F.v0).max() < 1e-12
    assert np.linalg.matrix_rank(frame.basis) == 6


@pytest.mark.parametrize("k", [0, 1, 2])
def test_s_divisible_by_a2(k):
    A = random_killing_field(k, 80 + k)
    rep = eg.s_divisibility(A)
    assert rep.spread < 1e-6
    assert abs(rep.ratio - 4) < 1e-6
    scaled = eg.s_divisibility(A.scaled(1.7))
    assert abs(scaled.ratio - rep.ratio) < 1e-6 * abs(rep.ratio)


def test_divisibility_input_checks(field0):
    with pytest.raises(DegenerateOrbitError):
        eg.s_divisibility(zero_field(0))
    with pytest.raises(ValueError):
        eg.s_divisibility(field0, eg.generic_zetas(4))


def test_tau_and_rho_act_on_eigenlines(field1):
    assert eg.tau_eigenline_residual(field1, ZETA) < 1e-9
    assert eg.rho_eigenline_residual(field1, ZETA) < 1e-9


def test_branch_point_proximity_is_detected(field0):
    S = spectral_coefficients(field0)
    lam0 = laurent_roots(S.b2)[0][0]
    z0, _ = eg.divisor_point(field0, lam0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", eg.KernelDegenerateWarning)
        with pytest.raises(BranchPointProximityError):
            eg.eigenline_fiber(eg.kernel_v0(eg.omega_fiber(field0, z0)))


# ---- the divisor a2 = 0 ------------------------------------------------------------

def _b2_root(A):
    S = spectral_coefficients(A)
    return laurent_roots(S.b2)[0][0], S


def test_kernel_warning_on_divisor(field0):
    lam0, S = _b2_root(field0)
    z0, _ = eg.divisor_point(field0, lam0, S=S)
    with pytest.warns(eg.KernelDegenerateWarning):
        eg.kernel_v0(eg.omega_fiber(field0, z0))


@pytest.mark.parametrize("k,seed", [(0, 1), (0, 4), (1, 1)])
def test_fiber_on_divisor(k, seed):
    A = random_killing_field(k, seed)
    lam0, S = _b2_root(A)
    D = eg.divisor_fiber(A, lam0, S=S)
    scale = np.abs(A(D.zeta0)).max()
    # v0 stays nonzero and becomes null for g
    assert D.v0_norm > 1e-3 * scale**3
    assert abs(D.g_v0_v0) < 1e-9 * scale**6
    assert D.rank_omega == 6
    # K is nilpotent of rank 3 while alpha|W does not vanish
    assert D.k_square < 1e-8 * max(1.0, D.k_norm) ** 2
    assert D.k_norm > 1e-3
    assert np.linalg.matrix_rank(D.k_matrix, tol=1e-6 * D.k_norm) == 3
    assert D.alpha_norm > 1e-3


def test_s_vanishes_linearly_at_divisor(field0):
    lam0, S = _b2_root(field0)
    z0, _ = eg.divisor_point(field0, lam0, S=S)
    slope = 4 * S.a(2).derivative()(z0)
    for delta in (1e-3, 1e-4, 1e-5):
        s, _ = eg.s_value(field0, z0 + delta * np.exp(0.4j))
        assert abs(abs(s) / (abs(slope) * delta) - 1) < 1e-2


@pytest.mark.parametrize("k,seed", [(0, 1), (0, 2), (1, 3)])
def test_vanishing_order_two(k, seed):
    A = random_killing_field(k, seed)
    lam0, S = _b2_root(A)
    V = eg.vanishing_order_at_D(A, lam0, S=S)
    assert abs(V.order - 2.0) < 0.1
    assert V.conclusive


def test_vanishing_order_at_extreme_roots():
    # |lambda| from 1e-6 to 1e6: rounding bends the log-log data at small w
    A = random_killing_field(1, 11)
    S = spectral_coefficients(A)
    roots = laurent_roots(S.b2)[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", eg.KernelDegenerateWarning)
        for lam0 in (roots[np.argmin(np.abs(roots))], roots[np.argmax(np.abs(roots))]):
            V = eg.vanishing_order_at_D(A, lam0, S=S)
            assert abs(V.order - 2.0) < 0.1 and V.conclusive
