"""Fiberwise linear algebra of a Killing field at a fixed zeta.

At each fiber A = A(zeta) lies in g2 inside so(7, C).  The form
omega(v, w) = g(A v, w) has kernel spanned by

    v0 = c * psi(omega ^ omega ^ omega),

where psi identifies 6-forms with vectors through the volume form and c is
a calibration constant fixed once from a reference field.  On
W = v0^perp the associative form restricts to a 3-form alpha whose Hitchin
endomorphism K commutes with A; its +-sqrt(s) eigenspaces E+- each contain
three eigenlines of A.

The volume on W is (nu _| vol)|_W with g(nu, v0) = 1.  With this choice K is
cubic and s sextic in A, both regular where a2 vanishes.
"""
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import exterior
from .errors import BranchPointProximityError, CalibrationError, DegenerateOrbitError, SplitDegenerateError
from .forms import k_alpha, metric_from_form
from .loop import evaluate_at, random_killing_field
from .octonion import EPSILON, TAU_MATRIX, assoc_form3
from .spectral import spectral_coefficients


class KernelDegenerateWarning(UserWarning):
    """a2 vanishes at the fiber: v0 becomes a null vector."""


@lru_cache(maxsize=None)
def _metric():
    g = metric_from_form(assoc_form3()).matrix
    g.setflags(write=False)
    return g


@dataclass(frozen=True)
class FiberData:
    zeta: complex
    matrix: np.ndarray
    omega: np.ndarray
    a2: complex = None
    v0: np.ndarray = None
    eigenvalues: np.ndarray = None
    eigenvectors: np.ndarray = None  # columns, unit 2-norm
    pairing: np.ndarray = None
    e_plus: tuple = None
    e_minus: tuple = None


def _char_a2(M):
    # det(mu - M) = mu^7 - a1 mu^5 + a1^2/4 mu^3 - a2 mu
    return -np.poly(M)[6]


def omega_fiber(A, zeta, gauge=None):
    """omega = g(A(zeta) ., .) as an antisymmetric matrix; ``gauge`` conjugates A first."""
    M = evaluate_at(A, zeta)
    if gauge is not None:
        M = gauge @ M @ np.linalg.inv(gauge)
    g = _metric()
    omega = M.T @ g
    return FiberData(complex(zeta), M, omega, a2=complex(_char_a2(M)))


def omega_cubed(omega):
    """The 6-form omega ^ omega ^ omega (dense components)."""
    w2 = exterior.wedge(omega, omega)
    return exterior.wedge(w2, omega)


def psi_omega_cubed_by_wedge(omega):
    """psi(omega^3) through explicit wedge products (slow reference route)."""
    return exterior.dual_vector(omega_cubed(omega))


def _pf6(m):
    # Pfaffian of an even antisymmetric matrix by expansion along the first row
    def pf(idx):
        if not idx:
            return 1.0
        a = idx[0]
        total = 0.0
        for pos in range(1, len(idx)):
            rest = idx[1:pos] + idx[pos + 1:]
            total += (-1) ** (pos - 1) * m[a, idx[pos]] * pf(rest)
        return total
    return pf(list(range(m.shape[0])))


def psi_omega_cubed(omega):
    """psi(omega^3): the i-th component is 6 (-1)^i Pf of omega with row and column i removed."""
    n = omega.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for i in range(n):
        keep = [j for j in range(n) if j != i]
        out[i] = (-1) ** i * 6 * _pf6(omega[np.ix_(keep, keep)])
    return out


REFERENCE_SEED = 0
REFERENCE_ZETA = 1.1 * np.exp(0.3j)


@lru_cache(maxsize=None)
def calibration_constant():
    """c with g(v0, v0) = -a2 for v0 = c psi(omega^3), from the reference field."""
    A = random_killing_field(0, REFERENCE_SEED)
    F = omega_fiber(A, REFERENCE_ZETA)
    u = psi_omega_cubed(F.omega)
    guu = u @ _metric() @ u
    if abs(guu) < 1e-12 or abs(F.a2) < 1e-12:
        raise CalibrationError("reference fiber is degenerate")
    c2 = -F.a2 / guu
    c = np.sqrt(complex(c2))
    if abs(c.imag) < 1e-9 * abs(c):
        c = abs(c.real)
    return complex(c)


def kernel_v0(F, tol=1e-9):
    v0 = calibration_constant() * psi_omega_cubed(F.omega)
    scale = max(1.0, float(np.abs(F.matrix).max())) ** 3
    if abs(F.a2) <= tol * scale * max(1.0, float(np.abs(F.matrix).max())) ** 3:
        warnings.warn("a2 vanishes at this fiber; v0 is a null vector of g", KernelDegenerateWarning,
                      stacklevel=2)
    return replace(F, v0=v0)


def v0_residuals(F):
    """(|A v0| / |v0|, |g(v0, v0) + a2| / max(|a2|, |v0|^2))."""
    v0 = F.v0
    nv = max(float(np.linalg.norm(v0)), 1e-300)
    kern = float(np.linalg.norm(F.matrix @ v0)) / (nv * max(1.0, float(np.abs(F.matrix).max())))
    gvv = v0 @ _metric() @ v0
    norm = max(abs(F.a2), 1e-300)
    return kern, float(abs(gvv + F.a2) / norm)


def eigenline_fiber(F, cluster_tol=1e-6):
    """Six nonzero eigenpairs and the pairing P_ab = omega(e_a, e_b)."""
    vals, vecs = np.linalg.eig(F.matrix)
    scale = max(1.0, float(np.abs(vals).max()))
    zero = int(np.argmin(np.abs(vals)))
    keep = [i for i in range(7) if i != zero]
    vals, vecs = vals[keep], vecs[:, keep]
    d = np.abs(vals[:, None] - vals[None, :])
    np.fill_diagonal(d, np.inf)
    if d.min() < cluster_tol * scale or np.abs(vals).min() < cluster_tol * scale:
        raise BranchPointProximityError(f"eigenvalues within {d.min():.3e} of each other at zeta={F.zeta}")
    order = np.lexsort((vals.imag, vals.real))
    vals, vecs = vals[order], vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    P = vecs.T @ F.omega @ vecs
    return replace(F, eigenvalues=vals, eigenvectors=vecs, pairing=P)


def partner_index(vals):
    """For each eigenvalue the index of its negative."""
    return np.array([int(np.argmin(np.abs(vals + m))) for m in vals])


def pairing_residuals(F):
    """(max |P_ab| off the mu <-> -mu pattern relative to max |P|, min |P_ab| on it)."""
    P = F.pairing
    partners = partner_index(F.eigenvalues)
    mask = np.zeros_like(P, dtype=bool)
    mask[np.arange(6), partners] = True
    ref = max(float(np.abs(P).max()), 1e-300)
    return float(np.abs(P[~mask]).max()) / ref, float(np.abs(P[mask]).min())


# ---- restriction of alpha to W = v0^perp -----------------------------------

@dataclass(frozen=True)
class WFrame:
    basis: np.ndarray   # 7 x 6, columns w_j
    pivot: int
    volume: complex     # mu(w_1, ..., w_6)

    def coords(self, x):
        """Coordinates of x in W with respect to the basis (x must lie in W)."""
        return np.delete(np.asarray(x), self.pivot, axis=0)


def w_frame(v0, pivot=None):
    """Basis w_j = e_j - (v0_j / v0_p) e_p of v0^perp and its volume."""
    g = _metric()
    gv = g @ v0
    p = int(np.argmax(np.abs(gv))) if pivot is None else pivot
    cols = []
    for j in range(7):
        if j == p:
            continue
        w = np.zeros(7, dtype=np.complex128)
        w[j] = 1.0
        w[p] = -gv[j] / gv[p]
        cols.append(w)
    basis = np.column_stack(cols)
    # nu = e_p / (g v0)_p has g(nu, v0) = 1; vol(nu, w_1..w_6) = (-1)^p / (g v0)_p
    volume = (-1) ** p / gv[p]
    return WFrame(basis, p, complex(volume))


def restricted_alpha(frame):
    a = assoc_form3()
    B = frame.basis
    return np.einsum("abc,ai,bj,ck->ijk", a, B, B, B, optimize=True)


def k_on_w(v0, pivot=None):
    frame = w_frame(v0, pivot)
    return frame, k_alpha(restricted_alpha(frame), vol=frame.volume)


@dataclass(frozen=True)
class AlphaReport:
    k_matrix: np.ndarray
    s_value: complex
    commutator: float
    membership: tuple       # residual per eigenline
    sides: tuple            # +1 / -1 per eigenline
    plus_sum: complex
    lagrangian: float
    alpha_plus: complex


def alpha_restricted_checks(F, tol=1e-7):
    """K on W, its commutator with A|W and the E+- membership of the eigenlines."""
    frame, K = k_on_w(F.v0)
    M = F.matrix
    B = frame.coords(M @ frame.basis)
    km = K.matrix
    scale_a = max(float(np.abs(B).max()), 1e-300)
    scale_k = max(float(np.abs(km).max()), 1e-300)
    comm = float(np.abs(km @ B - B @ km).max()) / (scale_a * scale_k)
    s = K.s_value
    if abs(s) <= 1e-10 * scale_k**2:
        raise SplitDegenerateError("s vanishes at this fiber; choose another zeta")
    root = np.sqrt(complex(s))
    sides, memb = [], []
    for a in range(6):
        x = frame.coords(F.eigenvectors[:, a])
        kx = km @ x
        res = {sgn: float(np.linalg.norm(kx - sgn * root * x) / (abs(root) * np.linalg.norm(x))) for sgn in (1, -1)}
        sgn = 1 if res[1] <= res[-1] else -1
        sides.append(sgn)
        memb.append(res[sgn])
    plus = [a for a in range(6) if sides[a] == 1]
    minus = [a for a in range(6) if sides[a] == -1]
    P = F.pairing
    ref = max(float(np.abs(P).max()), 1e-300)
    lag = max([float(np.abs(P[np.ix_(side, side)]).max()) for side in (plus, minus) if side] + [0.0]) / ref
    plus_sum = complex(F.eigenvalues[plus].sum()) if len(plus) == 3 else complex(np.nan)
    alpha_w = restricted_alpha(frame)
    if len(plus) == 3:
        X = np.column_stack([frame.coords(F.eigenvectors[:, a]) for a in plus])
        alpha_plus = complex(np.einsum("abc,a,b,c->", alpha_w, X[:, 0], X[:, 1], X[:, 2]))
    else:
        alpha_plus = complex(np.nan)
    return AlphaReport(km, complex(s), comm, tuple(memb), tuple(sides), plus_sum, lag, alpha_plus)


def fiber_analysis(A, zeta, gauge=None):
    F = kernel_v0(omega_fiber(A, zeta, gauge))
    return eigenline_fiber(F)


# ---- global checks -------------------------------------------------------------

def generic_zetas(n=12, seed=7):
    rng = np.random.default_rng(seed)
    return np.exp(rng.uniform(-0.3, 0.3, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def s_value(A, zeta):
    F = kernel_v0(omega_fiber(A, zeta))
    return k_on_w(F.v0)[1].s_value, F.a2


@dataclass(frozen=True)
class DivisibilityReport:
    ratio: complex
    spread: float
    samples: int


def s_divisibility(A, zetas=None):
    """s(alpha) / a2 at sample fibers; the ratio should not depend on zeta."""
    if np.abs(A.coeffs).max() == 0:
        raise DegenerateOrbitError("zero field: s and a2 both vanish identically")
    zetas = generic_zetas() if zetas is None else np.asarray(zetas)
    if len(zetas) < 12:
        raise ValueError("use at least 12 sample fibers")
    ratios = []
    for z in zetas:
        s, a2 = s_value(A, z)
        ratios.append(s / a2)
    ratios = np.array(ratios)
    mean = ratios.mean()
    return DivisibilityReport(complex(mean), float(np.abs(ratios - mean).max() / abs(mean)), len(zetas))


def line_distance(x, y):
    """sin of the Hermitian angle between the lines spanned by x and y."""
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    # residual of y after projecting on x; avoids the cancellation in sqrt(1 - |<x, y>|^2)
    return float(np.linalg.norm(y - x * np.vdot(x, y)))


def tau_eigenline_residual(A, zeta):
    F = eigenline_fiber(kernel_v0(omega_fiber(A, zeta)))
    G = eigenline_fiber(kernel_v0(omega_fiber(A, EPSILON * zeta)))
    worst = 0.0
    for a in range(6):
        b = int(np.argmin(np.abs(G.eigenvalues - F.eigenvalues[a])))
        worst = max(worst, line_distance(TAU_MATRIX @ F.eigenvectors[:, a], G.eigenvectors[:, b]))
    return worst


def rho_eigenline_residual(A, zeta):
    F = eigenline_fiber(kernel_v0(omega_fiber(A, zeta)))
    G = eigenline_fiber(kernel_v0(omega_fiber(A, 1 / np.conj(zeta))))
    worst = 0.0
    for a in range(6):
        b = int(np.argmin(np.abs(G.eigenvalues - np.conj(F.eigenvalues[a]))))
        worst = max(worst, line_distance(np.conj(F.eigenvectors[:, a]), G.eigenvectors[:, b]))
    return worst


def determinant_residual(F):
    """|prod of the six nonzero eigenvalues + a2| / |a2|."""
    return float(abs(np.prod(F.eigenvalues) + F.a2) / max(abs(F.a2), 1e-300))


# ---- behaviour at the divisor a2 = 0 ----------------------------------------------

@dataclass(frozen=True)
class VanishingOrder:
    order: float
    fit_residual: float
    ws: np.ndarray
    values: np.ndarray
    conclusive: bool


def _solve_a2(a2, da2, target, z0, steps=50):
    z = z0
    for _ in range(steps):
        f = a2(z) - target
        dz = f / da2(z)
        z = z - dz
        if abs(dz) < 1e-15 * max(1.0, abs(z)):
            break
    return complex(z)


def divisor_point(A, lam0, branch=0, S=None):
    """zeta0 with zeta0^6 = lam0, polished as a root of a2."""
    S = spectral_coefficients(A) if S is None else S
    a2 = S.a(2)
    z0 = complex(lam0) ** (1 / 6) * np.exp(2j * np.pi * branch / 6)
    return _solve_a2(a2, a2.derivative(), 0.0, z0), S


def vanishing_order_at_D(A, lam0, branch=0, n=17, w_range=(1e-1, 1e-5), window=7, seed=11, S=None):
    """Order of vanishing of alpha on a holomorphic frame of E+ in the coordinate w = sqrt(a2).

    Along w -> 0, zeta(w) solves a2(zeta) = w^2 and the frame is
    f_i = (sqrt(c) w + K) u_i with s = c a2 and fixed u_i, so the frame
    stays holomorphic and of rank 3 through w = 0.
    """
    zeta0, S = divisor_point(A, lam0, branch, S)
    a2 = S.a(2)
    da2 = a2.derivative()
    ratio = s_divisibility(A).ratio
    root_c = np.sqrt(complex(ratio))
    # w scale: natural size of sqrt(a2) near zeta0
    wscale = np.sqrt(abs(da2(zeta0)) * max(abs(zeta0), 1e-3) * 1e-1)
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    phase = np.exp(0.37j)
    ws = wscale * np.geomspace(w_range[0], w_range[1], n) * phase
    vals = _alpha_along_w(A, a2, da2, zeta0, root_c, U, ws)
    x = np.log(np.abs(ws))
    y = np.log(np.abs(vals))
    # the log-log data bends at large w (higher-order terms) and at small w
    # (rounding floor of a badly scaled field); fit the straightest window
    best = None
    for lo in range(0, n - window + 1):
        sl = slice(lo, lo + window)
        coef, res, *_ = np.polyfit(x[sl], y[sl], 1, full=True)
        fit = float(np.sqrt(res[0] / window)) if len(res) else 0.0
        if best is None or fit < best[1]:
            best = (coef, fit)
    coef, fit = best
    return VanishingOrder(float(coef[0]), fit, ws, vals, fit < 0.05)


def _alpha_along_w(A, a2, da2, zeta0, root_c, U, ws):
    """alpha on the frame (sqrt(c) w + K) U at each w."""
    pivot = None
    vals = []
    for w in ws:
        guess = zeta0 + w * w / da2(zeta0)
        z = _solve_a2(a2, da2, w * w, guess)
        M = evaluate_at(A, z)
        omega = M.T @ _metric()
        v0 = calibration_constant() * psi_omega_cubed(omega)
        if pivot is None:
            pivot = int(np.argmax(np.abs(_metric() @ v0)))
        frame, K = k_on_w(v0, pivot)
        f = (root_c * w * np.eye(6) + K.matrix) @ U
        alpha_w = restricted_alpha(frame)
        vals.append(complex(np.einsum("abc,a,b,c->", alpha_w, f[:, 0], f[:, 1], f[:, 2])))
    return np.array(vals)


@dataclass(frozen=True)
class DivisorFiber:
    zeta0: complex
    v0: np.ndarray
    v0_norm: float
    g_v0_v0: complex
    k_matrix: np.ndarray
    k_square: float
    k_norm: float
    alpha_norm: float
    rank_omega: int


def divisor_fiber(A, lam0, branch=0, S=None):
    """Fiber data exactly on a2 = 0."""
    zeta0, S = divisor_point(A, lam0, branch, S)
    M = evaluate_at(A, zeta0)
    omega = M.T @ _metric()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KernelDegenerateWarning)
        v0 = calibration_constant() * psi_omega_cubed(omega)
    frame, K = k_on_w(v0)
    km = K.matrix
    sv = np.linalg.svd(omega, compute_uv=False)
    rank = int((sv > 1e-8 * sv[0]).sum())
    alpha = restricted_alpha(frame)
    return DivisorFiber(zeta0, v0, float(np.linalg.norm(v0)), complex(v0 @ _metric() @ v0), km,
                        float(np.abs(km @ km).max()), float(np.abs(km).max()), float(np.abs(alpha).max()),
                        rank)


__all__ = [
    "FiberData", "KernelDegenerateWarning", "omega_fiber", "kernel_v0", "eigenline_fiber",
    "alpha_restricted_checks", "s_divisibility", "vanishing_order_at_D", "calibration_constant",
    "psi_omega_cubed", "psi_omega_cubed_by_wedge", "divisor_fiber",
]
