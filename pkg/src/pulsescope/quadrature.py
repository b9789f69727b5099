"""Quadrature helpers: certified trapezoid refinement, Filon transforms.

Two recurring needs drive this module. Spectral moments and field
synthesis integrate smooth Gaussian-tailed kernels, where composite
trapezoid converges fast but must be *certified* by grid refinement.
Emission amplitudes integrate data multiplied by e^{i q t} with q far
above the grid Nyquist scale of plain trapezoid accuracy; there the
transform uses Filon-type weights that treat the oscillation exactly
and interpolate the data linearly.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import NumericalConvergenceError


def trapezoid(y, x):
    return np.trapezoid(y, x)


def refine_until_converged(
    evaluate: Callable[[int], float],
    n_start: int,
    rtol: float = 1e-9,
    max_doublings: int = 12,
    what: str = "integral",
) -> float:
    """Evaluate(n) on doubling grids until successive results agree.

    evaluate(n) must compute the quantity on an n-point grid. Returns the
    last value; raises NumericalConvergenceError if the relative change
    never drops below rtol.
    """
    prev = evaluate(n_start)
    n = n_start
    for _ in range(max_doublings):
        n = 2 * n - 1
        cur = evaluate(n)
        scale = max(abs(cur), abs(prev), 1e-300)
        if abs(cur - prev) <= rtol * scale:
            return cur
        prev = cur
    raise NumericalConvergenceError(
        f"{what} did not converge under grid refinement",
        rtol=rtol, n_final=n, last_change=abs(cur - prev) / scale,
    )


def _filon_weights(theta: np.ndarray):
    """P, Q with int_0^h e^{i q t}[(1-t/h) f0 + (t/h) f1] dt = h (P f0 + Q f1),
    theta = q h."""
    theta = np.asarray(theta, dtype=float)
    P = np.empty(theta.shape, dtype=complex)
    Q = np.empty(theta.shape, dtype=complex)
    # the closed form cancels catastrophically as theta -> 0 (error ~
    # eps/theta^2), so the series branch extends to 0.04, where both
    # branches sit below 1e-12
    small = np.abs(theta) < 0.04
    ts = theta[small]
    P[small] = (0.5 + 1j * ts / 6.0 - ts**2 / 24.0 - 1j * ts**3 / 120.0
                + ts**4 / 720.0 + 1j * ts**5 / 5040.0)
    Q[small] = (0.5 + 1j * ts / 3.0 - ts**2 / 8.0 - 1j * ts**3 / 30.0
                + ts**4 / 144.0 + 1j * ts**5 / 840.0)
    tb = theta[~small]
    e = np.exp(1j * tb)
    it = 1j * tb
    P[~small] = -1.0 / it + (e - 1.0) / it**2
    Q[~small] = e / it - (e - 1.0) / it**2
    return P, Q


def filon_transform(t: np.ndarray, f: np.ndarray, q) -> np.ndarray:
    """int f(t) e^{i q t} dt on a uniform grid, exact in the oscillation.

    f is interpolated piecewise-linearly; q may be a scalar or 1-D array.
    """
    t = np.asarray(t, dtype=float)
    f = np.asarray(f)
    h = t[1] - t[0]
    qs = np.atleast_1d(np.asarray(q, dtype=float))
    P, Q = _filon_weights(qs * h)
    out = np.empty(qs.shape, dtype=complex)
    # chunk over q to bound the phase-matrix size
    chunk = max(1, int(4e6 // max(t.size, 1)))
    for i0 in range(0, qs.size, chunk):
        sl = slice(i0, i0 + chunk)
        phase = np.exp(1j * np.outer(qs[sl], t[:-1]))
        weighted = P[sl, None] * f[None, :-1] + Q[sl, None] * f[None, 1:]
        out[sl] = h * np.einsum("qt,qt->q", phase, weighted)
    return out if np.ndim(q) else out[0]


def oscillatory_cos_sin(t: np.ndarray, f: np.ndarray, q) -> np.ndarray:
    """int f(t) e^{i q t} dt by plain trapezoid (smooth, decayed kernels)."""
    t = np.asarray(t, dtype=float)
    qs = np.atleast_1d(np.asarray(q, dtype=float))
    out = np.empty(qs.shape, dtype=complex)
    chunk = max(1, int(4e6 // max(t.size, 1)))
    for i0 in range(0, qs.size, chunk):
        sl = slice(i0, i0 + chunk)
        phase = np.exp(1j * np.outer(qs[sl], t))
        out[sl] = np.trapezoid(phase * f[None, :], t, axis=1)
    return out if np.ndim(q) else out[0]


def certified_tail_cutoff(
    integrand: Callable[[np.ndarray], np.ndarray],
    start: float,
    step: float,
    rel_floor: float = 1e-12,
    max_panels: int = 64,
    what: str = "outer integral",
):
    """Extend panel-by-panel until the integrand falls below rel_floor of
    its running peak; returns (cutoff, value).

    The value is the trapezoid integral over [0, cutoff] assembled from the
    panel grids.
    """
    edges = [0.0]
    total = 0.0
    peak = 0.0
    lo = 0.0
    hi = start
    for _ in range(max_panels):
        x = np.linspace(lo, hi, 257)
        y = integrand(x)
        total += np.trapezoid(y, x)
        peak = max(peak, float(np.max(np.abs(y))))
        edges.append(hi)
        if peak > 0 and float(np.max(np.abs(y[-64:]))) < rel_floor * peak:
            return hi, total
        lo, hi = hi, hi + step
    raise NumericalConvergenceError(
        f"{what} cutoff not reached", panels=max_panels, last_edge=edges[-1],
    )
