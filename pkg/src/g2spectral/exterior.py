"""Dense exterior algebra on C^n.

A p-form is stored as a fully antisymmetric ndarray of shape (n,)*p whose
entries are its tensor components, so that

    beta = (1/p!) * sum beta[i1..ip] theta_i1 ^ ... ^ theta_ip.

Two independent routes are provided for top-degree products: ``wedge`` sums
over shuffles explicitly, ``top_coefficient`` contracts with the Levi-Civita
symbol.
"""
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

import numpy as np


def permutation_sign(perm):
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _levi_civita(n):
    eps = np.zeros((n,) * n)
    for perm in permutations(range(n)):
        eps[perm] = permutation_sign(perm)
    eps.setflags(write=False)
    return eps


def levi_civita(n):
    """The totally antisymmetric symbol with eps[0, 1, ..., n-1] = 1."""
    return _levi_civita(n)


def form_from_terms(terms, n, degree, one_based=True):
    """Build a form from ``[(coefficient, (i, j, k, ...)), ...]``.

    Each entry contributes ``coefficient * theta_i ^ theta_j ^ ...``.
    """
    out = np.zeros((n,) * degree, dtype=np.complex128)
    for coeff, idx in terms:
        idx = tuple(i - 1 for i in idx) if one_based else tuple(idx)
        if len(idx) != degree:
            raise ValueError(f"term {idx} does not have degree {degree}")
        for perm in permutations(range(degree)):
            out[tuple(idx[p] for p in perm)] += coeff * permutation_sign(perm)
    return out


def basis_components(form):
    """Map sorted index tuples to coefficients against theta_I (I increasing)."""
    p = form.ndim
    n = form.shape[0]
    return {idx: form[idx] for idx in combinations(range(n), p)}


def antisymmetry_residual(form):
    form = np.asarray(form)
    worst = 0.0
    for a in range(form.ndim - 1):
        axes = list(range(form.ndim))
        axes[a], axes[a + 1] = axes[a + 1], axes[a]
        worst = max(worst, float(np.abs(form + np.transpose(form, axes)).max()))
    return worst


def interior(v, form):
    """Contraction v _| form in the first slot."""
    return np.tensordot(np.asarray(v), form, axes=(0, 0))


def wedge(alpha, beta):
    """Wedge product of tensor-component forms, summing over shuffles."""
    alpha = np.asarray(alpha)
    beta = np.asarray(beta)
    p, q = alpha.ndim, beta.ndim
    if p == 0:
        return alpha * beta
    if q == 0:
        return beta * alpha
    n = alpha.shape[0]
    r = p + q
    dtype = np.result_type(alpha, beta)
    if r > n:
        return np.zeros((n,) * r, dtype=dtype)
    outer = np.multiply.outer(alpha, beta)
    out = np.zeros((n,) * r, dtype=dtype)
    for pos_a in combinations(range(r), p):
        pos_b = [i for i in range(r) if i not in pos_a]
        perm = [0] * r
        for k, j in enumerate(pos_a):
            perm[j] = k
        for k, j in enumerate(pos_b):
            perm[j] = p + k
        swaps = sum(pos_a[j] - j for j in range(p))
        out += (-1) ** swaps * np.transpose(outer, perm)
    return out


def top_component(form):
    """Coefficient of an n-form against theta_1 ^ ... ^ theta_n."""
    n = form.shape[0]
    return form[tuple(range(n))]


def top_coefficient(*forms):
    """Coefficient of forms[0] ^ forms[1] ^ ... against the coordinate volume.

    Degrees must add up to the dimension.
    """
    n = forms[0].shape[0] if forms[0].ndim else forms[1].shape[0]
    degrees = [f.ndim for f in forms]
    if sum(degrees) != n:
        raise ValueError(f"degrees {degrees} do not add up to {n}")
    letters = "abcdefghijklmnopqrstuvwxyz"
    subs, pos = [], 0
    for d in degrees:
        subs.append(letters[pos:pos + d])
        pos += d
    expr = letters[:n] + "," + ",".join(subs) + "->"
    norm = 1
    for d in degrees:
        norm *= factorial(d)
    return np.einsum(expr, levi_civita(n), *forms, optimize=True) / norm


def volume_form(n):
    return levi_civita(n).astype(np.complex128)


def dual_vector(beta):
    """The vector u with u _| vol = beta for an (n-1)-form beta (coordinate volume)."""
    n = beta.shape[0]
    eps = levi_civita(n)
    letters = "abcdefghijklmnopqrstuvwxyz"
    idx = letters[1:n]
    return np.einsum(f"a{idx},{idx}->a", eps, beta, optimize=True) / factorial(n - 1)


def pullback(form, matrix):
    """Components of the pullback form(Mx, My, ...)."""
    out = np.asarray(form)
    for axis in range(out.ndim):
        out = np.moveaxis(np.tensordot(out, matrix, axes=([axis], [0])), -1, axis)
    return out
