"""Coefficient-level Lax flow dA = [A, phi] along a real direction in the z-plane."""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import kernels
from .errors import StiffnessError
from .loop import KillingField, evaluate_many
from .spectral import spectral_coefficients


def phi_coefficients(A, direction):
    """phi = v (A_{d-1} + A_d zeta) + conj(v) (A_{1-d} + A_{-d} / zeta), powers -1, 0, 1."""
    v = complex(direction)
    d = A.d
    return np.stack([
        np.conj(v) * A.coeff(-d),
        v * A.coeff(d - 1) + np.conj(v) * A.coeff(1 - d),
        v * A.coeff(d),
    ])


def lax_bracket(A, direction):
    """Full Laurent coefficients of [A, phi], powers -(d+1) .. d+1."""
    return kernels.laurent_commutator(A.coeffs, phi_coefficients(A, direction))


def lax_anticommutator(A, direction):
    """Laurent coefficients of A phi + phi A, powers -(d+1) .. d+1."""
    phi = phi_coefficients(A, direction)
    n = A.coeffs.shape[0]
    out = np.zeros((n + 2, 7, 7), dtype=np.complex128)
    for m in range(3):
        out[m:m + n] += A.coeffs @ phi[m] + phi[m] @ A.coeffs
    return out


def lax_rhs(A, direction, broken=False):
    """dA/dt as a coefficient array of the same shape as ``A.coeffs``.

    The outermost powers zeta^(+-(d+1)) of [A, phi] are [A_d, A_d] = 0 and
    its conjugate, so they are dropped.  ``broken=True`` flips the sign of
    the phi A term, giving A phi + phi A: a deliberately wrong vector field
    (it leaves g2) used as a negative control.
    """
    full = lax_anticommutator(A, direction) if broken else lax_bracket(A, direction)
    return full[1:-1]


@dataclass(frozen=True)
class FlowState:
    t: float
    direction: complex
    field: KillingField
    drift: float


def _rel(p0, p):
    n = float(np.abs(p0.coeffs).max())
    return float(np.abs(p.coeffs - p0.coeffs).max()) / n if n > 0 else 0.0


def _drift(S0, S):
    return max(_rel(S0.b1, S.b1), _rel(S0.b2, S.b2))


def integrate_flow(A0, direction=1.0, t_end=1.0, tol=1e-10, n_out=11, broken=False, method="DOP853",
                   blowup=None):
    """Integrate the Lax flow and report states at ``n_out`` evenly spaced times.

    ``drift`` is the running maximum of the relative (b1, b2) coefficient
    change since t = 0; nothing is re-projected during integration.
    If ``blowup`` is given, integration stops with StiffnessError once the
    coefficient norm exceeds ``blowup`` times its initial value.
    """
    v = complex(direction)
    if abs(abs(v) - 1) > 1e-12:
        raise ValueError("direction must be a unit complex number")
    shape = A0.coeffs.shape
    k = A0.k
    scale = max(1.0, float(np.abs(A0.coeffs).max()))

    def f(_t, y):
        A = KillingField(k, y.reshape(shape))
        return lax_rhs(A, v, broken).ravel()

    times = np.linspace(0.0, t_end, n_out)
    if np.abs(A0.coeffs).max() == 0:
        return [FlowState(float(t), v, A0, 0.0) for t in times]
    events = None
    if blowup is not None:
        limit = blowup * float(np.linalg.norm(A0.coeffs))

        def events(_t, y):
            return limit - np.linalg.norm(y)
        events.terminal = True
    sol = solve_ivp(f, (0.0, t_end), A0.coeffs.ravel().astype(np.complex128), method=method,
                    t_eval=times, rtol=tol, atol=tol * scale, dense_output=True, events=events)
    if sol.status != 0:
        t_last = sol.sol.t_max if sol.sol is not None else 0.0
        last = KillingField(k, sol.sol(t_last).reshape(shape)) if sol.sol is not None else A0
        raise StiffnessError(f"integration stopped at t={t_last}: {sol.message}", last)
    S0 = spectral_coefficients(A0)
    states = []
    running = 0.0
    for i, t in enumerate(sol.t):
        A = KillingField(k, sol.y[:, i].reshape(shape))
        if i:
            running = max(running, _drift(S0, spectral_coefficients(A, tol=np.inf)))
        states.append(FlowState(float(t), v, A, running))
    return states


@dataclass(frozen=True)
class DriftReport:
    times: tuple
    drift_b1: tuple
    drift_b2: tuple
    trace_drift: tuple

    @property
    def max_drift(self):
        return max(max(self.drift_b1), max(self.drift_b2))


def _trace_invariants(A, zetas):
    mats = evaluate_many(A, zetas)
    out = []
    for m in (1, 2, 3):
        P = np.linalg.matrix_power(mats, 2 * m)
        out.append(np.trace(P, axis1=1, axis2=2))
    return np.array(out)


def isospectral_drift(states, sample_zetas=None):
    """Relative change of b1, b2 and of tr A(zeta)^(2m), m = 1..3, against the first state."""
    if len(states) < 2:
        raise ValueError("need at least two states")
    zetas = np.exp(2j * np.pi * np.array([0.1, 0.37, 0.61])) * np.array([1.0, 1.1, 0.9]) \
        if sample_zetas is None else np.asarray(sample_zetas)
    A0 = states[0].field
    if np.abs(A0.coeffs).max() == 0:
        zeros = tuple(0.0 for _ in states)
        return DriftReport(tuple(s.t for s in states), zeros, zeros, zeros)
    S0 = spectral_coefficients(A0)
    T0 = _trace_invariants(A0, zetas)
    b1s, b2s, trs = [], [], []
    for s in states:
        S = spectral_coefficients(s.field, tol=np.inf)
        b1s.append(_rel(S0.b1, S.b1))
        b2s.append(_rel(S0.b2, S.b2))
        T = _trace_invariants(s.field, zetas)
        trs.append(float((np.abs(T - T0) / np.maximum(np.abs(T0), 1e-300)).max()))
    return DriftReport(tuple(s.t for s in states), tuple(b1s), tuple(b2s), tuple(trs))


def negative_control_drift(A0, direction=1.0, t_end=1.0, tol=1e-10):
    """Drift of (b1, b2) under the broken vector field.

    The broken field can blow up before ``t_end``; then the last state the
    integrator reached is measured.
    """
    S0 = spectral_coefficients(A0)
    try:
        final = integrate_flow(A0, direction, t_end, tol, n_out=2, broken=True, blowup=1e6)[-1].field
    except StiffnessError as exc:
        final = exc.last_state
    if not np.all(np.isfinite(final.coeffs)):
        return np.inf
    return _drift(S0, spectral_coefficients(final, tol=np.inf))
