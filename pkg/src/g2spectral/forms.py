"""Invariants of generic 3-forms in dimensions 7 and 6.

Dimension 7: the volume-valued quadratic form q, its determinant invariant
kappa and the induced metric g = q / kappa**(1/3).  Dimension 6: the
endomorphism K(v) = (v _| alpha) ^ alpha read through Lambda^5 ~ E, its
square-eigenvalue s and the +/- sqrt(s) eigenspaces.

All forms are dense component tensors (see :mod:`g2spectral.exterior`);
volumes are the coordinate volume theta_1 ^ ... ^ theta_n unless a scale is
passed.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import exterior
from .errors import DegenerateOrbitError, SplitDegenerateError

TOL = 1e-9


@dataclass(frozen=True)
class MetricTensor:
    matrix: np.ndarray
    kappa: complex
    kappa_root_choice: int  # index k of the cube root exp(2 pi i k / 3) * principal


@dataclass(frozen=True)
class KOperator:
    matrix: np.ndarray
    s_value: complex

    def square_residual(self):
        K = self.matrix
        return float(np.abs(K @ K - self.s_value * np.eye(K.shape[0])).max())


def _check_three_form(alpha, n):
    alpha = np.asarray(alpha, dtype=np.complex128)
    if alpha.shape != (n, n, n):
        raise ValueError(f"expected a 3-form on C^{n}, got shape {alpha.shape}")
    return alpha


def q_form(alpha, v, w):
    """q(v, w) = -1/6 (v _| alpha) ^ (w _| alpha) ^ alpha against theta_1..7."""
    alpha = _check_three_form(alpha, 7)
    return -exterior.top_coefficient(exterior.interior(v, alpha), exterior.interior(w, alpha), alpha) / 6


def q_matrix(alpha):
    alpha = _check_three_form(alpha, 7)
    eps = exterior.levi_civita(7)
    Q = np.einsum("abcdefg,iab,jcd,efg->ij", eps, alpha, alpha, alpha, optimize=True)
    return -Q / (6 * 2 * 2 * 6)


def _cube_root(x):
    x = complex(x)
    if abs(x.imag) <= 1e-14 * max(1.0, abs(x)):
        return complex(np.cbrt(x.real))
    return x ** (1 / 3)


def kappa_invariant(alpha):
    """kappa with kappa**3 = det(q); real cube root when det(q) is real."""
    return _cube_root(np.linalg.det(q_matrix(alpha)))


def metric_from_form(alpha):
    """g = q / kappa**(1/3), with the cube root making g positive on real forms."""
    Q = q_matrix(alpha)
    det = np.linalg.det(Q)
    kappa = _cube_root(det)
    # det(Q) is homogeneous of degree 7 in Q
    if abs(det) <= 1e-12 * max(float(np.abs(Q).max()), 1e-300) ** 7:
        raise DegenerateOrbitError("kappa(alpha) = 0: the form is not in the open orbit")
    base = _cube_root(kappa)
    best = None
    for k in range(3):
        root = base * np.exp(2j * np.pi * k / 3)
        g = Q / root
        score = np.trace(g).real
        if best is None or score > best[0] + 1e-12:
            best = (score, k, g)
    _, k, g = best
    return MetricTensor(g, kappa, k)


def psi_dual(beta, vol_scale=1.0):
    """The vector u with u _| (vol_scale * vol) = beta for a 6-form beta on C^7."""
    beta = np.asarray(beta)
    return exterior.dual_vector(beta) / vol_scale


def psi_dual_components(components, vol_scale=1.0):
    """Same as :func:`psi_dual` with beta given by its 7 coefficients against
    theta_1 ^ .. (omit i) .. ^ theta_7 (increasing order)."""
    c = np.asarray(components)
    return ((-1.0) ** np.arange(c.size)) * c / vol_scale


def k_alpha(alpha, vol=1.0):
    """K(v) = (v _| alpha) ^ alpha identified with a vector through vol."""
    alpha = _check_three_form(alpha, 6)
    eps = exterior.levi_civita(6)
    K = np.einsum("nabcde,iab,cde->ni", eps, alpha, alpha, optimize=True) / 12
    K = K / vol
    return KOperator(K, np.trace(K @ K) / 6)


def k_alpha_by_wedge(alpha, vol=1.0):
    """Independent route to K through explicit wedge products."""
    alpha = _check_three_form(alpha, 6)
    cols = []
    for i in range(6):
        v = np.zeros(6)
        v[i] = 1.0
        cols.append(exterior.dual_vector(exterior.wedge(exterior.interior(v, alpha), alpha)))
    K = np.column_stack(cols) / vol
    return KOperator(K, np.trace(K @ K) / 6)


def plus_minus_split(K, tol=1e-8):
    """Bases (6 x 3 each) of the +sqrt(s) and -sqrt(s) eigenspaces of K."""
    M = K.matrix
    n = M.shape[0]
    scale = max(float(np.abs(M).max()), 1e-300)
    if abs(K.s_value) <= tol * scale**2:
        raise SplitDegenerateError(f"s = {K.s_value:.3e} is zero to tolerance")
    root = np.sqrt(complex(K.s_value))
    spaces = []
    for sign in (1, -1):
        P = (np.eye(n) + sign * M / root) / 2
        U, sv, _ = np.linalg.svd(P)
        rank = int((sv > 1e-6 * sv[0]).sum())
        spaces.append(U[:, :rank])
    return spaces[0], spaces[1]


def lagrangian_residual(basis, omega):
    return float(np.abs(basis.T @ omega @ basis).max())


# ---- normal forms -------------------------------------------------------

_G2_COMMON = [(1, (1, 2, 5)), (-1, (3, 4, 5)), (1, (1, 3, 6)), (-1, (4, 2, 6)),
              (1, (1, 4, 7)), (-1, (2, 3, 7))]

G2_NORMAL_FORM_LITERAL = exterior.form_from_terms(_G2_COMMON + [(1, (4, 6, 7))], 7, 3)
G2_NORMAL_FORM_VARIANT = exterior.form_from_terms(_G2_COMMON + [(1, (5, 6, 7))], 7, 3)

SU3_NORMAL_FORM = exterior.form_from_terms([(1, (1, 2, 3)), (1, (4, 5, 6))], 6, 3)
NILPOTENT_NORMAL_FORM = exterior.form_from_terms([(1, (1, 5, 6)), (1, (2, 6, 4)), (1, (3, 4, 5))], 6, 3)


def standard_symplectic6():
    """Matrix of theta_14 + theta_25 + theta_36."""
    w = np.zeros((6, 6))
    for a, b in ((0, 3), (1, 4), (2, 5)):
        w[a, b], w[b, a] = 1.0, -1.0
    return w


def _metric_identity_residual(alpha):
    try:
        g = metric_from_form(alpha).matrix
    except DegenerateOrbitError:
        return np.inf
    return float(np.abs(g - np.eye(7)).max())


@lru_cache(maxsize=None)
def g2_normal_form_selection():
    """Pick whichever printed normal form induces the Euclidean metric.

    Returns (name, residual_literal, residual_variant).
    """
    lit = _metric_identity_residual(G2_NORMAL_FORM_LITERAL)
    var = _metric_identity_residual(G2_NORMAL_FORM_VARIANT)
    if min(lit, var) > TOL:
        raise DegenerateOrbitError("neither normal form induces the Euclidean metric")
    return ("literal" if lit <= var else "variant"), lit, var


def g2_normal_form():
    name, _, _ = g2_normal_form_selection()
    return G2_NORMAL_FORM_LITERAL if name == "literal" else G2_NORMAL_FORM_VARIANT
