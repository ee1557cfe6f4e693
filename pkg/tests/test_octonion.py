import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from g2spectral.errors import FramePreconditionError
from g2spectral.octonion import (EPSILON, OCTONION_TABLE, TAU_MATRIX, assoc_form3, bracket, derivation_residual,
                                 fano_triples, form_preservation_residual, frame_complete, g2_basis,
                                 graded_basis, graded_decompose, graded_dimensions, graded_residual,
                                 im_mul, oct_mul, rho, tau)

vec8 = arrays(np.float64, 8, elements=st.floats(-3, 3))


def _conj(x):
    out = -np.asarray(x, dtype=float)
    out[0] = -out[0]
    return out


@settings(max_examples=50, deadline=None)
@given(vec8, vec8)
def test_norm_is_multiplicative(x, y):
    assert np.isclose(np.linalg.norm(oct_mul(x, y)), np.linalg.norm(x) * np.linalg.norm(y), atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(vec8, vec8)
def test_alternative_laws(x, y):
    assert np.allclose(oct_mul(oct_mul(x, x), y), oct_mul(x, oct_mul(x, y)), atol=1e-8)
    assert np.allclose(oct_mul(oct_mul(y, x), x), oct_mul(y, oct_mul(x, x)), atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(vec8, vec8)
def test_conjugation_reverses_products(x, y):
    assert np.allclose(_conj(oct_mul(x, y)), oct_mul(_conj(y), _conj(x)), atol=1e-9)


def test_octonions_are_not_associative():
    e = np.eye(8)
    assert not np.allclose(oct_mul(oct_mul(e[1], e[2]), e[4]), oct_mul(e[1], oct_mul(e[2], e[4])))


def test_doubling_convention():
    e = np.eye(8)
    for a, b, c in ((1, 4, 5), (2, 4, 6), (3, 4, 7)):
        assert np.allclose(oct_mul(e[a], e[b]), e[c])
    assert OCTONION_TABLE.shape == (8, 8, 8)


def test_unit_imaginaries_square_to_minus_one():
    e = np.eye(8)
    for i in range(1, 8):
        assert np.allclose(oct_mul(e[i], e[i]), -e[0])


def test_fano_triples_close_under_multiplication():
    e = np.eye(7)
    triples = fano_triples()
    assert len(triples) == 7
    for i, j, k in triples:
        prod = im_mul(e[i - 1], e[j - 1])
        assert np.isclose(abs(prod[k - 1]), 1.0)


def test_associative_form_is_alternating_and_matches_products():
    a = assoc_form3()
    assert np.allclose(a, -np.transpose(a, (1, 0, 2)))
    assert np.allclose(a, -np.transpose(a, (0, 2, 1)))
    rng = np.random.default_rng(3)
    x, y, z = rng.standard_normal((3, 7))
    assert np.isclose(np.einsum("ijk,i,j,k->", a, x, y, z), im_mul(x, y) @ z)


def test_derivation_algebra_has_dimension_14():
    basis = g2_basis()
    assert len(basis) == 14
    for el in basis:
        assert el.derivation_residual < 1e-12
    gram = np.array([[-np.trace(X.matrix @ Y.matrix) / 2 for Y in basis] for X in basis])
    assert np.allclose(gram, np.eye(14), atol=1e-12)


def test_g2_closed_under_bracket():
    B = [el.matrix for el in g2_basis()]
    for X in B[:5]:
        for Y in B[5:10]:
            assert derivation_residual(bracket(X, Y)) < 1e-12


def test_generic_antisymmetric_matrix_is_not_a_derivation():
    M = np.zeros((7, 7))
    M[0, 1], M[1, 0] = 1, -1
    assert derivation_residual(M) > 0.1


def test_graded_dimensions():
    assert graded_dimensions() == (2, 3, 2, 2, 2, 3)


def test_tau_has_order_six():
    rng = np.random.default_rng(0)
    M = sum(rng.standard_normal() * el.matrix for el in g2_basis())
    assert np.abs(tau(M, 6) - M).max() < 1e-12
    assert np.abs(tau(M, 3) - M).max() > 1e-3
    assert np.allclose(np.linalg.matrix_power(TAU_MATRIX, 6), np.eye(7), atol=1e-12)


def test_tau_is_an_automorphism_of_the_octonions():
    # C preserves the product, so Ad_C preserves g2
    assert form_preservation_residual(TAU_MATRIX) < 1e-12


def test_rho_commutes_with_tau():
    rng = np.random.default_rng(1)
    M = sum(complex(*rng.standard_normal(2)) * el.matrix for el in g2_basis())
    assert np.abs(rho(tau(M)) - tau(rho(M))).max() < 1e-12


@pytest.mark.parametrize("j", range(6))
def test_graded_pieces_are_eigenspaces(j):
    for B in graded_basis(j):
        assert np.abs(tau(B) - EPSILON**j * B).max() < 1e-12
        assert graded_residual(B, j) < 1e-11


def test_conjugation_swaps_opposite_degrees():
    for j in range(6):
        for B in graded_basis(j):
            assert graded_residual(np.conj(B), -j) < 1e-11


def test_graded_decomposition_reconstructs():
    rng = np.random.default_rng(5)
    M = sum(complex(*rng.standard_normal(2)) * el.matrix for el in g2_basis())
    G = graded_decompose(M)
    assert np.allclose(G.reconstruct(), M, atol=1e-12)
    assert G.eigen_residual() < 1e-12


def _random_frame(seed):
    rng = np.random.default_rng(seed)

    def unit(v):
        return v / np.linalg.norm(v)

    f1 = unit(rng.standard_normal(7))
    f2 = rng.standard_normal(7)
    f2 = unit(f2 - (f2 @ f1) * f1)
    f3 = im_mul(f1, f2)
    f4 = rng.standard_normal(7)
    for b in (f1, f2, f3):
        f4 = f4 - (f4 @ b) * b
    return f1, f2, unit(f4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_frame_completion_preserves_the_three_form(seed):
    frame = frame_complete(*_random_frame(seed))
    G = frame.columns
    assert np.allclose(G.T @ G, np.eye(7), atol=1e-12)
    assert form_preservation_residual(G) < 1e-9


def test_frame_completion_rejects_bad_input():
    f1, f2, f4 = _random_frame(7)
    with pytest.raises(FramePreconditionError) as info:
        bent = f4 + 0.1 * f1
        frame_complete(f1, f2, bent / np.linalg.norm(bent))
    assert info.value.name == "<f1,f4>"
    with pytest.raises(FramePreconditionError):
        frame_complete(2 * f1, f2, f4)
    f3 = im_mul(f1, f2)
    with pytest.raises(FramePreconditionError) as info:
        frame_complete(f1, f2, f3)
    assert info.value.name == "<f3,f4>"


def test_examples_from_the_multiplication_table():
    e = np.eye(8)
    assert np.allclose(oct_mul(e[1], e[2]), e[3])
    assert np.allclose(oct_mul(e[1], e[1]), -e[0])
    assert np.allclose(oct_mul(e[2], e[5]), e[7])


def test_three_form_support_is_the_fano_plane():
    from itertools import combinations
    a = assoc_form3()
    e = np.eye(7)
    assert np.isclose(a[0, 1, 2], 1.0)
    nonzero = [t for t in combinations(range(7), 3) if abs(a[t]) > 1e-12]
    assert len(nonzero) == 7
    for i, j, k in nonzero:
        assert np.isclose(a[i, j, k], im_mul(e[i], e[j]) @ e[k])
    x, z = np.random.default_rng(9).standard_normal((2, 7))
    assert abs(np.einsum("ijk,i,j,k->", a, x, x, z)) < 1e-12


def test_annihilation_matches_derivation_property():
    from g2spectral.octonion import annihilation_residual
    for el in g2_basis():
        assert annihilation_residual(el.matrix) < 1e-10
    M = np.zeros((7, 7))
    M[0, 1], M[1, 0] = 1, -1
    assert annihilation_residual(M) > 0.1


def test_torus_direction_is_tau_fixed():
    J = np.array([[0, -1], [1, 0]])
    th, ph = 0.7, -0.4
    M = np.zeros((7, 7))
    M[1:3, 1:3], M[3:5, 3:5], M[5:7, 5:7] = th * J, ph * J, (th + ph) * J
    G = graded_decompose(M)
    assert np.allclose(G.parts[0], M, atol=1e-12)
    assert all(np.abs(P).max() < 1e-12 for P in G.parts[1:])


def test_identity_frame_and_sign_flip():
    e = np.eye(7)
    assert np.allclose(frame_complete(e[0], e[1], e[3]).columns, np.eye(7))
    F = frame_complete(e[0], e[1], -e[3])
    assert np.allclose(F.f(5), -e[4]) and np.allclose(F.f(6), -e[5])
    # f7 = f3 f4 = e3 (-e4) = -e7
    assert np.allclose(F.f(7), im_mul(e[2], -e[3]))
    assert np.allclose(F.f(7), -e[6])
