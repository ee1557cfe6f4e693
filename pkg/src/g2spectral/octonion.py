"""Octonions, the associative 3-form and the Lie algebra g2.

The imaginary octonions carry the basis e1..e7 obtained by Cayley-Dickson
doubling of the quaternions span{1, e1, e2, e3} with e4 the new unit and

    e5 = e1 e4,  e6 = e2 e4,  e7 = e3 e4.

Arrays of length 7 are imaginary octonions, arrays of length 8 carry the
real part in slot 0. Matrices act on the imaginary part, indices 0..6.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.linalg import block_diag, null_space

from .errors import FramePreconditionError, NumericalRankError

TOL = 1e-9
EPSILON = np.exp(1j * np.pi / 3)


def _qmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def _qconj(a):
    return np.array([a[0], -a[1], -a[2], -a[3]])


def _doubling_product(x, y):
    # (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))
    a, b, c, d = x[:4], x[4:], y[:4], y[4:]
    return np.concatenate([_qmul(a, c) - _qmul(_qconj(d), b), _qmul(d, a) + _qmul(b, _qconj(c))])


def _structure_constants():
    eye = np.eye(8)
    table = np.zeros((8, 8, 8))
    for i in range(8):
        for j in range(8):
            table[i, j] = _doubling_product(eye[i], eye[j])
    table.setflags(write=False)
    return table


#: OCTONION_TABLE[i, j] = e_i e_j in the basis (1, e1, ..., e7).
OCTONION_TABLE = _structure_constants()


def _as_octonion(x):
    x = np.asarray(x)
    if x.shape == (7,):
        return np.concatenate([np.zeros(1, dtype=x.dtype), x])
    if x.shape == (8,):
        return x
    raise ValueError(f"expected 7 or 8 components, got shape {x.shape}")


def oct_mul(x, y):
    """Octonion product; returns 8 components (real part first)."""
    x = _as_octonion(x)
    y = _as_octonion(y)
    return np.einsum("i,j,ijk->k", x, y, OCTONION_TABLE)


def im_mul(x, y):
    """Imaginary part of the product of two imaginary octonions."""
    return oct_mul(x, y)[1:]


def assoc_form3():
    """Components of the 3-form (x, y, z) -> <x y, z> on Im O, shape (7, 7, 7)."""
    return OCTONION_TABLE[1:, 1:, 1:].astype(np.complex128)


def fano_triples():
    """Unordered index triples (1-based) on which the associative form is nonzero."""
    phi = assoc_form3()
    return [tuple(i + 1 for i in t) for t in combinations(range(7), 3) if abs(phi[t]) > 0.5]


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def torus_element(theta, phi):
    """The maximal-torus element diag(1, R_theta, R_phi, R_{theta+phi})."""
    return block_diag(1.0, rotation(theta), rotation(phi), rotation(theta + phi))


#: The order-six element C defining tau = Ad_C.
TAU_MATRIX = torus_element(np.pi / 3, 2 * np.pi / 3)


def tau(M, power=1):
    out = np.asarray(M)
    for _ in range(power % 6):
        out = TAU_MATRIX @ out @ TAU_MATRIX.T
    return out


def rho(M):
    return np.conj(M)


@dataclass(frozen=True)
class G2AlgebraElement:
    matrix: np.ndarray
    derivation_residual: float


@dataclass(frozen=True)
class GradedComponents:
    parts: tuple
    epsilon: complex = EPSILON

    def reconstruct(self):
        return sum(self.parts)

    def eigen_residual(self):
        return max(float(np.abs(tau(P) - self.epsilon**j * P).max()) for j, P in enumerate(self.parts))


@dataclass(frozen=True)
class OctonionFrame:
    columns: np.ndarray  # 7 x 7, column i is f_{i+1}

    def f(self, i):
        return self.columns[:, i - 1]


def derivation_residual(D):
    """max |D(xy) - (Dx)y - x(Dy)| over pairs of basis vectors of Im O."""
    phi = OCTONION_TABLE[1:, 1:, 1:]
    D = np.asarray(D)
    # imaginary part; the real part -<x,y> is preserved by antisymmetric D
    lhs = np.einsum("ijk,lk->ijl", phi, D)
    rhs = np.einsum("ajk,ai->ijk", phi, D) + np.einsum("iak,aj->ijk", phi, D)
    real = D + D.T
    return float(max(np.abs(lhs - rhs).max(), np.abs(real).max()))


def annihilation_residual(D, alpha=None):
    """max |alpha(Dx, y, z) + alpha(x, Dy, z) + alpha(x, y, Dz)| on basis triples."""
    alpha = assoc_form3() if alpha is None else alpha
    D = np.asarray(D)
    out = (np.einsum("ajk,ai->ijk", alpha, D) + np.einsum("iak,aj->ijk", alpha, D)
           + np.einsum("ija,ak->ijk", alpha, D))
    return float(np.abs(out).max())


def g2_residual(M):
    """Membership residual of a matrix in g2 (complexified)."""
    return derivation_residual(M)


def _antisym_basis():
    idx = list(combinations(range(7), 2))
    mats = []
    for a, b in idx:
        M = np.zeros((7, 7))
        M[a, b], M[b, a] = 1.0, -1.0
        mats.append(M)
    return mats


@lru_cache(maxsize=None)
def _g2_basis_matrices():
    phi = OCTONION_TABLE[1:, 1:, 1:]
    cols = []
    gens = _antisym_basis()
    for D in gens:
        r = np.einsum("ijk,lk->ijl", phi, D) - np.einsum("ajk,ai->ijk", phi, D) - np.einsum("iak,aj->ijk", phi, D)
        cols.append(r.ravel())
    system = np.array(cols).T
    sv = np.linalg.svd(system, compute_uv=False)
    rank = int((sv > 1e-8 * sv[0]).sum())
    kernel = null_space(system, rcond=1e-10)
    if kernel.shape[1] != 21 - rank or kernel.shape[1] != 14:
        raise NumericalRankError(
            f"Leibniz system has nullity {kernel.shape[1]} (rank {rank}); revisit the tolerance")
    mats = [sum(c * D for c, D in zip(kernel[:, i], gens)) for i in range(kernel.shape[1])]
    # orthonormal for the trace form -tr(XY)/2 (= Frobenius/2 on so(7))
    flat = np.array([M.ravel() for M in mats]).T
    q, _ = np.linalg.qr(flat)
    return tuple(q[:, i].reshape(7, 7) * np.sqrt(2.0) for i in range(q.shape[1]))


def g2_basis():
    """Basis of g2 = Der(O) inside so(7), orthonormal for -tr(XY)/2."""
    return [G2AlgebraElement(M, derivation_residual(M)) for M in _g2_basis_matrices()]


def graded_decompose(M):
    """Split M into tau-eigencomponents M_j with tau(M_j) = eps**j M_j."""
    M = getattr(M, "matrix", M)
    M = np.asarray(M, dtype=np.complex128)
    orbit = [M]
    for _ in range(5):
        orbit.append(tau(orbit[-1]))
    parts = tuple(sum(EPSILON ** (-j * m) * orbit[m] for m in range(6)) / 6 for j in range(6))
    return GradedComponents(parts)


@lru_cache(maxsize=None)
def _graded_basis(j):
    basis = _g2_basis_matrices()
    proj = np.array([graded_decompose(B).parts[j].ravel() for B in basis]).T
    U, s, _ = np.linalg.svd(proj, full_matrices=False)
    rank = int((s > 1e-8).sum())
    vecs = U[:, :rank]
    if j in (0, 3):
        # eigenspaces stable under conjugation: pick a real basis
        real = np.concatenate([vecs.real, vecs.imag], axis=1)
        Ur, sr, _ = np.linalg.svd(real, full_matrices=False)
        vecs = Ur[:, :rank].astype(np.complex128)
    elif j in (4, 5):
        vecs = np.conj(np.array([m.ravel() for m in _graded_basis(6 - j)]).T)
    return tuple(vecs[:, i].reshape(7, 7) for i in range(rank))


def graded_basis(j):
    """Orthonormal (Frobenius) basis of the tau-eigenspace g_j; g_{6-j} = conj(g_j)."""
    return list(_graded_basis(j % 6))


def graded_dimensions():
    return tuple(len(_graded_basis(j)) for j in range(6))


def graded_residual(M, j):
    """Distance of M from g_j: norm of its components off degree j plus non-g2 part."""
    parts = graded_decompose(M).parts
    off = sum(np.abs(P).max() for i, P in enumerate(parts) if i != j % 6)
    return float(off + g2_residual(M))


def frame_complete(f1, f2, f4, tol=TOL):
    """Complete (f1, f2, f4) to a G2 frame using f3 = f1 f2, f5 = f1 f4, f6 = f2 f4, f7 = f3 f4."""
    f1, f2, f4 = (np.asarray(v, dtype=float) for v in (f1, f2, f4))
    f3 = im_mul(f1, f2)
    checks = {
        "<f1,f1>-1": f1 @ f1 - 1, "<f2,f2>-1": f2 @ f2 - 1, "<f4,f4>-1": f4 @ f4 - 1,
        "<f1,f2>": f1 @ f2, "<f1,f4>": f1 @ f4, "<f2,f4>": f2 @ f4, "<f3,f4>": f3 @ f4,
    }
    for name, value in checks.items():
        if abs(value) > tol:
            raise FramePreconditionError(name, float(value))
    cols = [f1, f2, f3, f4, im_mul(f1, f4), im_mul(f2, f4), im_mul(f3, f4)]
    return OctonionFrame(np.column_stack(cols))


def form_preservation_residual(G, alpha=None):
    from .exterior import pullback
    alpha = assoc_form3() if alpha is None else alpha
    return float(np.abs(pullback(alpha, np.asarray(G)) - alpha).max())


def bracket(X, Y):
    return X @ Y - Y @ X
