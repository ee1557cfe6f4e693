"""Twisted loop algebra of g2 and polynomial Killing fields.

A Killing field of degree d = 6k + 1 is the Laurent loop

    A(zeta) = sum_{j=-d}^{d} A_j zeta**j,   A_j in g_{j mod 6},  A_{-j} = conj(A_j),

stored as an array of shape (2d + 1, 7, 7) with row ``j + d`` holding A_j.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GaugeFailureError, PoleError
from .octonion import EPSILON, TAU_MATRIX, g2_residual, graded_basis, graded_decompose

TOL = 1e-9


@dataclass(frozen=True)
class KillingField:
    k: int
    coeffs: np.ndarray

    def __post_init__(self):
        d = 6 * self.k + 1
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.coeffs.shape != (2 * d + 1, 7, 7):
            raise ValueError(f"expected coefficient array of shape {(2 * d + 1, 7, 7)}, got {self.coeffs.shape}")

    @property
    def d(self):
        return 6 * self.k + 1

    def coeff(self, j):
        return self.coeffs[j + self.d]

    def scaled(self, t):
        return KillingField(self.k, self.coeffs * t)

    def with_coeff(self, j, M):
        c = self.coeffs.copy()
        c[j + self.d] = M
        return KillingField(self.k, c)

    def conjugated(self, G):
        """Pointwise conjugation G A(zeta) G^-1 by a constant matrix."""
        Gi = np.linalg.inv(G)
        return KillingField(self.k, G @ self.coeffs @ Gi)

    def __call__(self, zeta):
        return evaluate_at(self, zeta)


def zero_field(k):
    d = 6 * k + 1
    return KillingField(k, np.zeros((2 * d + 1, 7, 7), dtype=np.complex128))


def random_killing_field(k, seed):
    """Random Killing field with standard normal weights on orthonormal g_j bases."""
    rng = np.random.default_rng(seed)
    d = 6 * k + 1
    coeffs = np.zeros((2 * d + 1, 7, 7), dtype=np.complex128)
    g0 = graded_basis(0)
    coeffs[d] = sum(rng.standard_normal() * B for B in g0).real
    for j in range(1, d + 1):
        basis = graded_basis(j % 6)
        w = (rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))) / np.sqrt(2)
        Aj = sum(c * B for c, B in zip(w, basis))
        coeffs[d + j] = Aj
        coeffs[d - j] = np.conj(Aj)
    return KillingField(k, coeffs)


def evaluate_at(A, zeta):
    if zeta == 0:
        raise PoleError("a Laurent loop has a pole at zeta = 0")
    return kernels.laurent_eval(A.coeffs, -A.d, complex(zeta))


def evaluate_many(A, zetas):
    zetas = np.asarray(zetas, dtype=np.complex128).ravel()
    if np.any(zetas == 0):
        raise PoleError("a Laurent loop has a pole at zeta = 0")
    return kernels.laurent_eval_many(A.coeffs, -A.d, zetas)


@dataclass(frozen=True)
class SymmetryReport:
    rho: float
    tau: float
    grading: float
    reality: float

    def max(self):
        return max(self.rho, self.tau, self.grading, self.reality)


def coefficient_residuals(A):
    """(grading, reality) residuals of the coefficients, relative to the field size."""
    d = A.d
    scale = max(1.0, float(np.abs(A.coeffs).max()))
    grading = 0.0
    for j in range(-d, d + 1):
        M = A.coeff(j)
        parts = graded_decompose(M).parts
        off = max(float(np.abs(P).max()) for i, P in enumerate(parts) if i != j % 6)
        grading = max(grading, off, g2_residual(M))
    reality = max(float(np.abs(A.coeff(-j) - np.conj(A.coeff(j))).max()) for j in range(0, d + 1))
    return grading / scale, reality / scale


def default_sample_zetas(n=12, seed=12345):
    rng = np.random.default_rng(seed)
    r = np.exp(rng.uniform(-0.2, 0.2, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def symmetry_residuals(A, sample_zetas=None):
    """Pointwise residuals of rho(A(z)) = A(1/conj z) and tau(A(z)) = A(eps z).

    Residuals are relative to max(1, |A(z)|).
    """
    zetas = default_sample_zetas() if sample_zetas is None else np.asarray(sample_zetas, dtype=np.complex128)
    vals = evaluate_many(A, zetas)
    refl = evaluate_many(A, 1 / np.conj(zetas))
    rot = evaluate_many(A, EPSILON * zetas)
    scale = np.maximum(1.0, np.abs(vals).max(axis=(1, 2)))
    rho_res = (np.abs(np.conj(vals) - refl).max(axis=(1, 2)) / scale).max()
    tau_vals = TAU_MATRIX @ vals @ TAU_MATRIX.T
    tau_res = (np.abs(tau_vals - rot).max(axis=(1, 2)) / scale).max()
    grading, reality = coefficient_residuals(A)
    return SymmetryReport(float(rho_res), float(tau_res), grading, reality)


# ---- gauge reduction to lambda = zeta^6 ----------------------------------

def s_matrix(zeta, literal=False):
    """S_zeta, equal to the rotation R_theta at zeta = exp(i theta).

    ``literal=True`` uses the (2,2) entry -(zeta + 1/zeta)/2, which is not
    orthogonal on the unit circle; it is kept only to show that it fails.
    """
    c = (zeta + 1 / zeta) / 2
    s = (zeta - 1 / zeta) / 2j
    return np.array([[c, -s], [s, -c if literal else c]], dtype=np.complex128)


def c_matrix(zeta, literal=False):
    """C_zeta = diag(1, S_zeta, S_zeta^2, S_zeta^3)."""
    out = np.zeros((7, 7), dtype=np.complex128)
    out[0, 0] = 1.0
    for b, p in enumerate((1, 2, 3)):
        out[1 + 2 * b:3 + 2 * b, 1 + 2 * b:3 + 2 * b] = s_matrix(zeta**p, literal)
    return out


def gauged_value(A, zeta, literal=False):
    """C_zeta^-1 A(zeta) C_zeta."""
    C = c_matrix(zeta, literal)
    return np.linalg.solve(C, evaluate_at(A, zeta) @ C)


@dataclass(frozen=True)
class GaugeReducedField:
    k: int
    coeffs: np.ndarray  # row m + (k + 1) holds the lambda**m coefficient
    tau_residual: float
    fit_residual: float
    window_residual: float

    @property
    def window(self):
        return self.k + 1

    def evaluate(self, lam):
        return kernels.laurent_eval(self.coeffs, -self.window, complex(lam))

    def reality_residual(self):
        w = self.window
        return float(max(np.abs(self.coeffs[w - m] - np.conj(self.coeffs[w + m])).max() for m in range(w + 1)))


def gauge_reduce_lambda(A, literal=False, n_check=12, seed=2024, tol=TOL):
    """Remove the tau twist: express C_zeta^-1 A C_zeta as a Laurent loop in lambda = zeta^6.

    The lambda coefficients are fitted by least squares on 4(k+2) samples
    over the window +-(k+2); the outermost pair is reported as the window
    residual and dropped.
    """
    zetas = default_sample_zetas(n_check, seed)
    scale = max(1.0, float(np.abs(A.coeffs).max()))
    tau_res = 0.0
    for z in zetas:
        diff = gauged_value(A, EPSILON * z, literal) - gauged_value(A, z, literal)
        tau_res = max(tau_res, float(np.abs(diff).max()) / scale)
    if tau_res > tol:
        raise GaugeFailureError(f"gauged field still depends on zeta beyond lambda (residual {tau_res:.3e})")

    wide = A.k + 2
    n = 4 * (A.k + 2)
    # zeta on the unit circle with lambda = zeta^6 equally spaced
    zs = np.exp(2j * np.pi * (np.arange(n) + 0.25) / (6 * n))
    lams = zs**6
    values = np.array([gauged_value(A, z, literal) for z in zs]).reshape(n, 49)
    powers = np.arange(-wide, wide + 1)
    V = lams[:, None] ** powers[None, :]
    sol, *_ = np.linalg.lstsq(V, values, rcond=None)
    fit = float(np.abs(V @ sol - values).max()) / scale
    sol = sol.reshape(2 * wide + 1, 7, 7)
    window_res = float(max(np.abs(sol[0]).max(), np.abs(sol[-1]).max())) / scale
    return GaugeReducedField(A.k, sol[1:-1].copy(), tau_res, fit, window_res)
