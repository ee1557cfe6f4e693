"""Check batteries run by the command line front end.

Each function returns a list of :class:`~g2spectral.report.CheckEntry`
(and, where relevant, the data it measured).  Tolerances default to the
acceptance thresholds; ``tol`` overrides only the structural residuals.
"""
import warnings

import numpy as np

from . import eigenline as eg
from .errors import BranchPointProximityError, G2SpectralError
from .lax import integrate_flow, isospectral_drift, negative_control_drift
from .loop import gauge_reduce_lambda, symmetry_residuals
from .report import FLAGGED, PASS, CheckEntry, check, count_entry
from .spectral import (char_coefficients, cover_maps, discriminant_profile, fiber_points, genus_report,
                       laurent_roots, sigma_involution, smoothness_check, to_lambda)

COUNT_ANCHORS = {
    "g_sigma": "main-curve-genus",
    "ram_deg": "ramification-count",
    "g_c1": "quotient-c1-genus",
    "g_c2": "quotient-c2-genus",
    "moduli_dim": "moduli-dimension",
    "tur_dim": "tur-dimension",
    "g_sigma_hat": "hat-curve-genus",
    "ram_deg_hat": "hat-ramification",
    "eigenline_degree": "eigenline-degree",
    "g_c2_hat": "hat-c2-genus",
}


def inspect_checks(A, tol=1e-10):
    r = symmetry_residuals(A)
    return [
        check("rho_symmetry", "field-symmetries", r.rho, tol),
        check("tau_symmetry", "field-symmetries", r.tau, tol),
        check("coefficient_grading", "field-symmetries", r.grading, tol),
        check("coefficient_reality", "field-symmetries", r.reality, tol),
    ]


def spectral_checks(A, tol=1e-9, samples=None, doc=None):
    """Characteristic polynomial shape, lambda reduction, branch counts and smoothness."""
    entries = []
    cc = char_coefficients(A, samples, tol=np.inf)
    entries.append(check("charpoly_parity", "charpoly-shape", cc.parity_residual, 1e-9))
    entries.append(check("charpoly_a1_relation", "charpoly-shape", cc.relation_residual, 1e-8))
    S = to_lambda(cc.a1, cc.a2, A.k, tol=np.inf)
    entries.append(check("a_support_in_6z", "lambda-reduction", S.dropped_residual, tol))
    entries.append(check("b_reality", "lambda-reduction", S.reality_residual, 1e-9))
    G = gauge_reduce_lambda(A, tol=np.inf)
    entries.append(check("gauge_tau_invariance", "lambda-gauge", G.tau_residual, 1e-9))
    entries.append(check("gauge_lambda_window", "lambda-gauge", G.window_residual, tol,
                         window=G.window))
    P = discriminant_profile(S)
    entries.append(check("collision_patterns", "ramification-count", P.max_pattern_residual(), 1e-6,
                         type_a=P.count_a, type_b=P.count_b))
    R = genus_report(S, P, strict=False)
    for c in R.checks:
        entries.append(count_entry(c.name, COUNT_ANCHORS[c.name], c.counted, c.expected,
                                   flagged=(c.status == "flagged")))
    sm = smoothness_check(S)
    entries.append(CheckEntry("smooth", "smooth-generic", PASS if sm.smooth else FLAGGED,
                              0.0 if sm.smooth else 1.0, 0.0,
                              {"witness": sm.witness} if sm.witness else {}))
    entries.extend(cover_checks(S))
    if doc is not None:
        doc.count("charpoly_samples", cc.samples)
        doc.count("monodromy_points", len(P.points))
    return entries, S, R, sm


def cover_checks(S, n_lambda=3):
    lams = np.exp(np.array([0.2, -0.15, 0.1])[:n_lambda] + 2j * np.pi * np.array([0.11, 0.52, 0.83])[:n_lambda])
    base, c1, c2, inv = 0.0, 0.0, 0.0, 0.0
    for lam in lams:
        for pt in fiber_points(S, lam):
            im = cover_maps(S, pt)
            base = max(base, abs(im.base1 - im.base2), abs(im.base1 - lam))
            c1, c2 = max(c1, im.c1_residual), max(c2, im.c2_residual)
            back = sigma_involution(sigma_involution(pt))
            inv = max(inv, abs(back[0] - pt[0]) + abs(back[1] - pt[1]))
    return [
        check("cover_base_commutes", "cover-diagram", base, 0.0),
        check("cover_c1_equation", "cover-diagram", c1, 1e-8),
        check("cover_c2_equation", "cover-diagram", c2, 1e-8),
        check("sigma_involution", "cover-diagram", inv, 0.0),
    ]


def flow_checks(A, t_end=1.0, tol=1e-10, direction=1.0, doc=None):
    states = integrate_flow(A, direction, t_end, tol)
    rep = isospectral_drift(states)
    sym = max(symmetry_residuals(s.field).max() for s in states)
    neg = negative_control_drift(A, direction, t_end, tol)
    entries = [
        check("isospectral_drift", "lax-equation", rep.max_drift, 1e-6),
        check("trace_invariant_drift", "lax-equation", max(rep.trace_drift), 1e-6),
        check("flow_symmetry", "field-symmetries", sym, 1e-7),
        # the broken field must visibly move the spectrum
        check("negative_control", "lax-equation", 1e-2 / neg if neg > 0 else np.inf, 1.0, drift=neg),
    ]
    if doc is not None:
        doc.count("flow_states", len(states))
    series = [{"t": s.t, "drift_b1": b1, "drift_b2": b2, "trace_drift": tr}
              for s, b1, b2, tr in zip(states, rep.drift_b1, rep.drift_b2, rep.trace_drift)]
    return entries, series


def fiber_checks(A, zetas=None, tol=1e-9, doc=None):
    zetas = eg.generic_zetas() if zetas is None else zetas
    anti, sympl, kern, gvv, off, on, comm, memb, sides, psum, lag, det = ([] for _ in range(12))
    used = 0
    for z in zetas:
        try:
            F = eg.eigenline_fiber(eg.kernel_v0(eg.omega_fiber(A, z)))
        except BranchPointProximityError:
            continue
        used += 1
        M, W = F.matrix, F.omega
        sc = max(1.0, float(np.abs(W).max()))
        anti.append(float(np.abs(W + W.T).max()) / sc)
        sympl.append(float(np.abs(M.T @ W + W @ M).max()) / (sc * max(1.0, float(np.abs(M).max()))))
        k_res, g_res = eg.v0_residuals(F)
        kern.append(k_res)
        gvv.append(g_res)
        o, n = eg.pairing_residuals(F)
        off.append(o)
        on.append(n)
        R = eg.alpha_restricted_checks(F)
        comm.append(R.commutator)
        memb.append(max(R.membership))
        sides.append(abs(sum(R.sides)))
        psum.append(abs(R.plus_sum) / max(1.0, float(np.abs(F.eigenvalues).max())))
        lag.append(R.lagrangian)
        det.append(eg.determinant_residual(F))
    div = eg.s_divisibility(A)
    entries = [
        check("omega_antisymmetric", "symplectic-form", max(anti), tol),
        check("omega_a_invariant", "symplectic-form", max(sympl), tol),
        check("v0_kernel", "kernel-vector", max(kern), 1e-8),
        check("v0_norm_is_minus_a2", "kernel-vector", max(gvv), 1e-7),
        check("pairing_off_partner", "eigenline-pairing", max(off), 1e-8),
        check("pairing_on_partner", "eigenline-pairing", 1e-4 / max(min(on), 1e-300), 1.0,
              min_partner=min(on)),
        check("k_commutes_with_a", "k-commutes", max(comm), 1e-8),
        check("k_eigenspace_membership", "k-commutes", max(memb), 1e-7),
        check("three_lines_per_side", "k-commutes", float(max(sides)), 0.0),
        check("e_plus_triple_sum", "k-commutes", max(psum), 1e-9),
        check("e_pm_lagrangian", "hitchin-k", max(lag), 1e-8),
        check("six_eigenvalue_product", "kernel-vector", max(det), 1e-8),
        check("s_over_a2_constant", "a2-divides-s", div.spread, 1e-6, ratio=div.ratio),
    ]
    entries.extend(vanishing_checks(A))
    if doc is not None:
        doc.count("fibers", used + div.samples)
    return entries


def vanishing_checks(A, S=None):
    from .spectral import spectral_coefficients
    S = spectral_coefficients(A) if S is None else S
    worst, order = 0.0, 2.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", eg.KernelDegenerateWarning)
        for lam0 in laurent_roots(S.b2)[0]:
            try:
                o = eg.vanishing_order_at_D(A, lam0, S=S).order
            except G2SpectralError:
                o = np.nan
            if not abs(o - 2.0) <= worst:
                worst, order = abs(o - 2.0), o
    return [check("vanishing_order_two", "order-two-vanishing", abs(order - 2.0), 0.1, order=order)]
