"""Pure numpy implementations of the hot kernels.

Same signatures as the compiled ``_kernels`` module; used when the extension
is not built or when ``G2SPECTRAL_PURE_PYTHON=1``.
"""
import numpy as np


def laurent_eval(coeffs, lo, zeta):
    """Evaluate sum_i coeffs[i] * zeta**(lo + i) by two-sided Horner."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    zeta = complex(zeta)
    n = coeffs.shape[0]
    # split at power 0
    split = min(max(-lo, 0), n)
    acc = np.zeros(coeffs.shape[1:], dtype=np.complex128)
    for i in range(n - 1, split - 1, -1):
        acc = acc * zeta + coeffs[i]
    if lo > 0:
        acc = acc * zeta**lo
    neg = np.zeros_like(acc)
    w = 1.0 / zeta
    for i in range(split):
        neg = (neg + coeffs[i]) * w
    if -lo > n:
        neg = neg * w ** (-lo - n)
    return acc + neg


def laurent_eval_many(coeffs, lo, zetas):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    zetas = np.asarray(zetas, dtype=np.complex128).ravel()
    powers = lo + np.arange(coeffs.shape[0])
    vander = zetas[:, None] ** powers[None, :]
    flat = coeffs.reshape(coeffs.shape[0], -1)
    return (vander @ flat).reshape((zetas.size,) + coeffs.shape[1:])


def laurent_commutator(a, b):
    """Coefficients of [a(x), b(x)] for matrix polynomials a, b (lowest power first)."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n, p = a.shape[0], b.shape[0]
    out = np.zeros((n + p - 1,) + a.shape[1:], dtype=np.complex128)
    for j in range(p):
        out[j:j + n] += a @ b[j] - b[j] @ a
    return out


def charpoly(mats):
    """Characteristic polynomial coefficients of a batch of square matrices.

    Returns array of shape (N, m + 1) with det(x I - M) = sum c[i] x**(m - i),
    computed by the Faddeev-LeVerrier recursion.
    """
    mats = np.asarray(mats, dtype=np.complex128)
    N, m, _ = mats.shape
    out = np.zeros((N, m + 1), dtype=np.complex128)
    out[:, 0] = 1.0
    eye = np.eye(m, dtype=np.complex128)
    Mk = np.zeros_like(mats)
    for k in range(1, m + 1):
        Mk = mats @ (Mk + out[:, k - 1, None, None] * eye)
        out[:, k] = -np.trace(Mk, axis1=1, axis2=2) / k
    return out
