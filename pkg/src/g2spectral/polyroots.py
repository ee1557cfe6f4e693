"""Polynomial roots, multiplicity clustering and monodromy of root sets.

Polynomials are coefficient arrays with the highest power first (numpy
convention).  Batched variants take arrays of shape (M, n + 1).
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


def companion_roots(coeffs):
    """Roots of one or many polynomials via companion-matrix eigenvalues.

    Leading coefficients must be nonzero.  Returns shape (n,) or (M, n).
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    single = c.ndim == 1
    c = np.atleast_2d(c)
    n = c.shape[1] - 1
    if n < 1:
        return np.zeros((c.shape[0], 0), dtype=np.complex128)[0 if single else slice(None)]
    monic = c[:, 1:] / c[:, :1]
    comp = np.zeros((c.shape[0], n, n), dtype=np.complex128)
    comp[:, 0, :] = -monic
    idx = np.arange(n - 1)
    comp[:, idx + 1, idx] = 1.0
    r = np.linalg.eigvals(comp)
    return r[0] if single else r


def newton_polish(coeffs, roots, steps=3):
    """A few Newton steps on each root; roots whose step would grow are left alone."""
    c = np.asarray(coeffs, dtype=np.complex128)
    dc = np.polyder(c)
    out = np.array(roots, dtype=np.complex128)
    for _ in range(steps):
        f = np.polyval(c, out)
        df = np.polyval(dc, out)
        ok = np.abs(df) > 0
        step = np.zeros_like(out)
        step[ok] = f[ok] / df[ok]
        f_new = np.polyval(c, out - step)
        better = np.abs(f_new) < np.abs(f)
        out = np.where(better, out - step, out)
    return out


def trim_leading(coeffs, rel=1e-13):
    c = np.asarray(coeffs, dtype=np.complex128)
    scale = np.abs(c).max() if c.size else 0.0
    i = 0
    while i < c.size - 1 and abs(c[i]) <= rel * scale:
        i += 1
    return c[i:]


def poly_roots(coeffs, polish=True):
    c = trim_leading(coeffs)
    r = companion_roots(c)
    return newton_polish(c, r) if polish and r.size else r


@dataclass(frozen=True)
class RootCluster:
    center: complex
    multiplicity: int
    radius: float


def cluster_roots(roots, tol, relative=False):
    """Group roots closer than ``tol`` (single linkage). Centers are means.

    With ``relative=True`` two roots are linked when their distance is below
    ``tol`` times the smaller modulus, which suits root sets spread over many
    orders of magnitude.
    """
    roots = np.asarray(roots, dtype=np.complex128)
    n = roots.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            bound = tol * min(abs(roots[i]), abs(roots[j])) if relative else tol
            if abs(roots[i] - roots[j]) < bound:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in groups.values():
        pts = roots[members]
        c = pts.mean()
        out.append(RootCluster(complex(c), len(members), float(np.abs(pts - c).max())))
    out.sort(key=lambda rc: (round(rc.center.real, 12), round(rc.center.imag, 12)))
    return out


# ---- monodromy ------------------------------------------------------------

@dataclass(frozen=True)
class Monodromy:
    center: complex  # np.inf for the point at infinity
    permutation: tuple
    steps: int

    @property
    def cycle_lengths(self):
        perm = self.permutation
        seen = [False] * len(perm)
        lengths = []
        for i in range(len(perm)):
            if not seen[i]:
                n = 0
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    n += 1
                lengths.append(n)
        return tuple(sorted(lengths, reverse=True))

    @property
    def contribution(self):
        """Sum of (e - 1) over the points above the center."""
        return len(self.permutation) - len(self.cycle_lengths)


class MonodromyError(RuntimeError):
    pass


def _match(prev, new):
    d = np.abs(prev[:, None] - new[None, :])
    rows, cols = linear_sum_assignment(d)
    perm = np.empty(len(prev), dtype=int)
    perm[rows] = cols
    return perm, d[rows, cols].max()


def _min_separation(r):
    d = np.abs(r[:, None] - r[None, :])
    np.fill_diagonal(d, np.inf)
    return d.min()


def _coefficient_jumps(rows, floor=1e-6):
    """Relative change of each monic coefficient between consecutive rows."""
    c = rows / rows[:, :1]
    size = np.abs(c).max(axis=1)
    ref = np.maximum(np.abs(c[:-1]), np.abs(c[1:]))
    ref = np.maximum(ref, floor * np.maximum(size[:-1], size[1:])[:, None])
    return (np.abs(c[1:] - c[:-1]) / ref).max(axis=1)


def _loop_points(center, radius, t):
    if center is np.inf or center == np.inf:
        return radius * np.exp(-2j * np.pi * t)
    return center + radius * np.exp(2j * np.pi * t)


def _root_scale(rows):
    c = rows / rows[:, :1]
    n = c.shape[1] - 1
    return np.abs(c[:, -1]) ** (1.0 / n)


def balancing_weight(poly_fn, center, radius):
    """Integer w such that the roots of poly_fn scale like |x|**(-w) across the loop.

    Estimated from the loop points nearest to and farthest from 0; the
    factor of the enclosed critical value is the same at both and cancels.
    """
    if center is np.inf or center == np.inf or center == 0:
        return 0
    u = center / abs(center)
    near, far = center - radius * u, center + radius * u
    rho = _root_scale(np.asarray(poly_fn(np.array([near, far])), dtype=np.complex128))
    if not np.all(np.isfinite(rho)) or np.any(rho == 0):
        return 0
    p = np.log(rho[1] / rho[0]) / np.log(abs(far) / abs(near))
    return -int(np.round(p))


def _balanced(poly_fn, w, center):
    if w == 0:
        return poly_fn

    def fn(x):
        rows = np.asarray(poly_fn(x), dtype=np.complex128)
        rows = rows / rows[:, :1]
        j = np.arange(rows.shape[1])
        # eta = (x / center)**(-w) u: coefficient j of u picks up (x / center)**(w j)
        return rows * (np.asarray(x) / center)[:, None] ** (w * j)[None, :]
    return fn


def track_loop(poly_fn, center, radius, n=48, max_rounds=16, safety=0.3, max_jump=0.5, balance=True):
    """Monodromy permutation of the roots of ``poly_fn(x)`` around a circle.

    ``poly_fn`` maps an array of points x to coefficient rows (highest power
    first).  ``center=np.inf`` loops around infinity on |x| = radius.  The path
    is refined until every step moves each root by less than ``safety`` times
    the smallest root separation at either end, and changes each monic
    coefficient by less than ``max_jump`` relatively.  The second condition
    catches steps over which a coefficient winds a full turn: the roots then
    return close to a permutation of themselves and the distance test alone
    would be fooled.  With ``balance`` the roots are rescaled by an integer
    power of x (single valued on the loop, so the permutation is unchanged)
    to remove the common rotation a high-order pole at 0 imposes on them.
    """
    if balance:
        poly_fn = _balanced(poly_fn, balancing_weight(poly_fn, center, radius), center)
    t = np.linspace(0.0, 1.0, n + 1)
    rows = np.asarray(poly_fn(_loop_points(center, radius, t)), dtype=np.complex128)
    roots = companion_roots(rows)
    for _ in range(max_rounds):
        jumps = _coefficient_jumps(rows)
        bad = []
        perms = []
        for i in range(len(t) - 1):
            perm, dmax = _match(roots[i], roots[i + 1])
            sep = min(_min_separation(roots[i]), _min_separation(roots[i + 1]))
            if not (dmax < safety * sep and jumps[i] < max_jump):
                bad.append(i)
            perms.append(perm)
        if not bad:
            total = np.arange(roots.shape[1])
            for perm in perms:
                total = perm[total]
            # total[i] = index at the end of the root that started as root i;
            # endpoints coincide, so align the final root set with the first one
            align, _ = _match(roots[-1], roots[0])
            final = align[total]
            return Monodromy(complex(center), tuple(int(v) for v in final), len(t) - 1)
        mids = (t[np.array(bad)] + t[np.array(bad) + 1]) / 2
        rows_m = np.asarray(poly_fn(_loop_points(center, radius, mids)), dtype=np.complex128)
        order = np.argsort(np.concatenate([t, mids]), kind="stable")
        t = np.concatenate([t, mids])[order]
        rows = np.concatenate([rows, rows_m])[order]
        roots = np.concatenate([roots, companion_roots(rows_m)])[order]
    raise MonodromyError(f"root tracking did not resolve around {center} (radius {radius:.3e})")


def loop_radii(points, include_zero=True):
    """Isolating radii for small loops around each finite point and for 0 / infinity."""
    pts = np.asarray(points, dtype=np.complex128)
    allpts = np.concatenate([pts, [0.0]]) if include_zero else pts
    radii = []
    for i, p in enumerate(pts):
        others = np.delete(allpts, i)
        radii.append(0.4 * np.abs(others - p).min())
    mags = np.abs(pts)
    r0 = 0.4 * mags.min() if pts.size else 0.5
    rinf = 2.5 * mags.max() if pts.size else 2.0
    return np.array(radii), r0, rinf
