"""Pulse areas, weak-field excitation probability, and imaging rate.

A two-level system at the focus is driven by a train of N identical
ultrashort pulses. Because the spectrum carries no DC component, the
accumulated pulse area

    chi(rho, t) = -(d_eg / hbar) int_-inf^t E(rho, t') dt'

returns to zero after each pulse, so the system cannot stay excited at
any order of the classical drive alone. Excitation survives only through
the counterrotating part of the coupling to the free photon modes: the
system is left excited *and* a photon is emitted. To first order in that
coupling and in the sudden/weak-field regime the probability is

    p_e(rho) = f(rho) * 2 N Gamma0 / (pi w0^3),
    f(rho)   = int_0^inf dw_k w_k^3 | int dtau e^{i w_k tau}
               sin(w0 tau) chi^2(rho, tau) |^2,

with tau measured from the pulse center (the rephasing time), where
chi(rho, tau) is exactly odd and chi^2 even. p_e depends on the field
intensity, not its sign, which is what makes the excitation profile as
narrow as the focused intensity itself.

The free-space dipole relation Gamma0 = d^2 w0^3 / (3 pi eps0 hbar c^3)
is isolated in one function so an alternative convention can be swapped.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .bessel import j1_over_x
from .constants import C_LIGHT, EPSILON_0, FIELD_CALIBRATION, HBAR
from .errors import (
    InvalidParameterError,
    InvalidStateError,
    NumericalConvergenceError,
    RegimeViolationError,
)
from .focal import FocusingGeometry, RadialCurve, _amplitude_prefactor
from .quadrature import certified_tail_cutoff, oscillatory_cos_sin
from .spectra import PulseSpectrum

RESONANCE_TOLERANCE = 1e-6
WEAK_FIELD_MAX_ETA = 0.5
UNITARITY_BUDGET = 0.1


def dipole_from_spontaneous_rate(transition_frequency: float,
                                 spontaneous_rate: float) -> float:
    """|d_eg| in C*m from Gamma0 = d^2 w0^3 / (3 pi eps0 hbar c^3)."""
    return np.sqrt(
        3.0 * np.pi * EPSILON_0 * HBAR * C_LIGHT**3 * spontaneous_rate
        / transition_frequency**3
    )


@dataclass(frozen=True)
class TwoLevelSystem:
    """Optical transition: frequency w0, free-space rate Gamma0, and
    inhomogeneous broadening gamma_c (all rad/s)."""

    transition_frequency: float
    spontaneous_rate: float
    inhomogeneous_broadening: float = 0.0

    def __post_init__(self):
        if self.transition_frequency <= 0:
            raise InvalidParameterError("transition frequency must be positive")
        if self.spontaneous_rate <= 0:
            raise InvalidParameterError("spontaneous rate must be positive")
        if self.inhomogeneous_broadening < 0:
            raise InvalidParameterError("inhomogeneous broadening must be >= 0")

    @property
    def dephasing_rate(self) -> float:
        return 0.5 * self.spontaneous_rate + self.inhomogeneous_broadening

    @property
    def dipole_magnitude(self) -> float:
        return dipole_from_spontaneous_rate(self.transition_frequency,
                                            self.spontaneous_rate)


@dataclass(frozen=True)
class PulseTrainConfig:
    """N pulses of energy U separated by T (N >= 0 allowed; 0 means no drive)."""

    pulse_count: int
    period: float
    pulse_energy: float

    def __post_init__(self):
        if self.pulse_count < 0 or int(self.pulse_count) != self.pulse_count:
            raise InvalidParameterError("pulse count must be a nonnegative integer")
        if self.period <= 0:
            raise InvalidParameterError("pulse period must be positive")
        if self.pulse_energy <= 0:
            raise InvalidParameterError("pulse energy must be positive")

    def resonance_offset(self, transition_frequency: float) -> float:
        """Distance of w0 T / (2 pi) from the nearest integer."""
        cycles = transition_frequency * self.period / (2.0 * np.pi)
        return abs(cycles - round(cycles))

    def validate_against(self, spectrum: PulseSpectrum,
                         tls: TwoLevelSystem) -> None:
        if self.period * spectrum.spectral_width < 10.0:
            warnings.warn(
                "pulse period is not long against the pulse duration "
                f"(T*Gamma = {self.period * spectrum.spectral_width:.3g} < 10)",
                stacklevel=2,
            )
        budget = tls.dephasing_rate * self.pulse_count * self.period
        if budget > UNITARITY_BUDGET:
            warnings.warn(
                f"unitarity budget gamma*N*T = {budget:.3g} exceeds "
                f"{UNITARITY_BUDGET}; dynamics are not safely unitary",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ExcitationResult:
    """Excitation probability with its building blocks and validity flags."""

    p_e: float
    eta: float
    f_value: float
    flags: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"p_e": self.p_e, "eta": self.eta, "f_value": self.f_value,
             "flags": self.flags},
            indent=2, sort_keys=True,
        ) + "\n"


def _chi_evaluator(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    pulse_energy: float,
    tls: TwoLevelSystem,
    rho: float,
    grid_scale: float = 1.0,
) -> Callable:
    """Single-pulse area chi(rho, tau), tau measured from the rephasing time.

    chi is the running integral of the focal field from t = -inf; with
    phi(0) = 0 each spectral component contributes sin(w tau)/w, giving

        chi(rho, tau) = (d/hbar) (kappa/pi) sqrt(2U/(eps0 c))
                        * Re int_0^inf (phi(w) B(w, rho) / w) e^{-i w tau} dw

    with B the Airy kernel J1(A w rho / c)/rho. Exact for every tau, so no
    cumulative quadrature error enters the area.
    """
    if rho < 0:
        raise InvalidParameterError(f"radial coordinate must be >= 0, got {rho}")
    n = int(max(4001, 24.0 * spectrum.max_frequency / spectrum.spectral_width)
            * max(grid_scale, 0.05)) | 1
    w = spectrum.frequency_grid(n)
    a = geometry.numerical_aperture
    kernel_over_w = (a / C_LIGHT) * j1_over_x(a * w * rho / C_LIGHT)
    gw = spectrum.value(w) * kernel_over_w
    pref = (
        tls.dipole_magnitude / HBAR
        * FIELD_CALIBRATION / np.pi
        * _amplitude_prefactor(pulse_energy)
    )

    def chi(tau):
        tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
        out = np.empty(tau_arr.shape)
        chunk = max(1, int(4e6 // w.size))
        for i0 in range(0, tau_arr.size, chunk):
            sl = slice(i0, i0 + chunk)
            phase = np.exp(-1j * np.outer(tau_arr[sl], w))
            out[sl] = np.trapezoid((phase * gw[None, :]).real, w, axis=1)
        out *= pref
        return out if np.ndim(tau) else float(out[0])

    return chi


def chi_of_time(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    pulse_energy: float,
    tls: TwoLevelSystem,
    rho: float,
    t,
    grid_scale: float = 1.0,
):
    """Accumulated single-pulse area at absolute lab time t (z = 0)."""
    chi = _chi_evaluator(geometry, spectrum, pulse_energy, tls, rho, grid_scale)
    t_rephase = geometry.reference_sphere_radius / C_LIGHT
    return chi(np.asarray(t) - t_rephase)


def eta(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    pulse_energy: float,
    tls: TwoLevelSystem,
    grid_scale: float = 1.0,
) -> float:
    """Maximum pulse area at the focus: grid scan plus local refinement."""
    chi = _chi_evaluator(geometry, spectrum, pulse_energy, tls, 0.0, grid_scale)
    half = 8.0 / spectrum.spectral_width
    n = int(max(801, 16.0 * half * spectrum.max_frequency / (2.0 * np.pi))
            * max(grid_scale, 0.05)) | 1
    taus = np.linspace(-half, half, n)
    vals = np.abs(chi(taus))
    i = int(np.argmax(vals))
    lo = taus[max(i - 1, 0)]
    hi = taus[min(i + 1, n - 1)]
    res = minimize_scalar(lambda s: -abs(chi(s)), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-6 * (hi - lo)})
    return float(abs(chi(res.x)))


def f_integral(
    tls: TwoLevelSystem,
    chi_fn: Callable,
    pulse_width: float,
    grid_scale: float = 1.0,
) -> float:
    """Double integral of the emission kernel, in 1/s^2.

    chi_fn(tau) is the single-pulse area with tau from the pulse center in
    seconds; it must have decayed at +/- 12 pulse widths. The inner
    transform runs on a uniform grid; the outer photon-frequency integral
    is cut off where its integrand falls below 1e-12 of the peak, and the
    cutoff is certified by doubling.
    """
    w0 = tls.transition_frequency
    # dimensionless time/frequency in carrier units
    ghat = 1.0 / (w0 * pulse_width)          # spectral width over carrier
    tau_span = 12.0 / ghat                   # 12 pulse widths, in 1/w0

    qmax = max(18.0 * ghat, 6.0) + 4.0
    for _attempt in range(4):
        dt = 2.0 * np.pi / (5.0 * (qmax + 1.0)) / max(grid_scale, 0.05)
        n = int(2.0 * tau_span / dt) | 1
        taus = np.linspace(-tau_span, tau_span, n)
        chi_vals = np.asarray(chi_fn(taus / w0), dtype=float)
        peak = float(np.max(np.abs(chi_vals)))
        if peak == 0.0:
            return 0.0
        edge = max(abs(chi_vals[0]), abs(chi_vals[-1]))
        if edge > 1e-6 * peak:
            raise InvalidParameterError(
                "chi does not decay within 12 pulse widths "
                f"(edge/max = {edge / peak:.2e})"
            )
        kernel = np.sin(taus) * chi_vals**2

        def integrand(qhat):
            inner = oscillatory_cos_sin(taus, kernel, np.asarray(qhat))
            return np.asarray(qhat) ** 3 * np.abs(inner) ** 2

        start = max(4.0 * ghat, 2.0)
        step = max(2.0 * ghat, 1.0)
        cutoff, value = certified_tail_cutoff(
            integrand, start, step, rel_floor=1e-12,
            what="photon-frequency integral",
        )
        if 2.0 * cutoff > qmax:
            # doubling certification would leave the resolved band; re-grid
            qmax = 2.5 * cutoff
            continue
        # certify the tail by doubling the cutoff
        ext = np.linspace(cutoff, 2.0 * cutoff, 513)
        extra = np.trapezoid(integrand(ext), ext)
        if abs(extra) > 1e-6 * abs(value):
            raise NumericalConvergenceError(
                "photon-frequency integral not converged at its cutoff",
                cutoff=cutoff, relative_tail=float(abs(extra / value)),
            )
        return float((value + extra) * w0**2)
    raise NumericalConvergenceError(
        "inner grid could not accommodate the certified cutoff", qmax=qmax,
    )


def excitation_probability(
    train: PulseTrainConfig,
    tls: TwoLevelSystem,
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    rho: float,
    grid_scale: float = 1.0,
) -> ExcitationResult:
    """p_e(rho) = f(rho) * 2 N Gamma0 / (pi w0^3) with validity flags."""
    train.validate_against(spectrum, tls)
    eta_val = eta(geometry, spectrum, train.pulse_energy, tls, grid_scale)
    flags = {
        "weak_field": bool(eta_val <= WEAK_FIELD_MAX_ETA),
        "ultrafast": bool(spectrum.spectral_width >= tls.transition_frequency),
        "resonant_train": bool(
            train.resonance_offset(tls.transition_frequency) <= RESONANCE_TOLERANCE
        ),
        "far_field": bool(geometry.far_field_valid(spectrum)),
    }
    if train.pulse_count == 0:
        return ExcitationResult(0.0, eta_val, 0.0, flags)
    chi = _chi_evaluator(geometry, spectrum, train.pulse_energy, tls, rho,
                         grid_scale)
    f_val = f_integral(tls, chi, 1.0 / spectrum.spectral_width, grid_scale)
    p_e = (
        f_val * 2.0 * train.pulse_count * tls.spontaneous_rate
        / (np.pi * tls.transition_frequency**3)
    )
    if p_e > 1.0:
        raise RegimeViolationError(
            f"p_e = {p_e:.3g} > 1: inputs are outside perturbative validity"
        )
    return ExcitationResult(float(p_e), eta_val, f_val, flags)


def excitation_resolution(
    train: PulseTrainConfig,
    tls: TwoLevelSystem,
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    rho: float,
    grid_scale: float = 1.0,
) -> float:
    """2 p_e(rho) / [p_e(0) + p_e(rho)]; exactly 1 at rho = 0."""
    p0 = excitation_probability(train, tls, geometry, spectrum, 0.0, grid_scale).p_e
    if p0 == 0.0:
        raise InvalidStateError("focal excitation probability vanishes")
    if rho == 0.0:
        return 1.0
    pr = excitation_probability(train, tls, geometry, spectrum, rho, grid_scale).p_e
    return 2.0 * pr / (p0 + pr)


def excitation_resolution_curve(
    train: PulseTrainConfig,
    tls: TwoLevelSystem,
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    rho_max: float | None = None,
    n_points: int = 33,
    grid_scale: float = 1.0,
) -> RadialCurve:
    """Sampled excitation-resolution curve with a bisectable evaluator."""
    if rho_max is None:
        rho_max = spectrum.mean_wavelength / geometry.numerical_aperture

    def p_of(r: float) -> float:
        return excitation_probability(train, tls, geometry, spectrum, r,
                                      grid_scale).p_e

    p0 = p_of(0.0)
    if p0 == 0.0:
        raise InvalidStateError("focal excitation probability vanishes")
    radii = np.linspace(0.0, rho_max, n_points)
    values = np.empty(radii.shape)
    values[0] = 1.0
    for i, r in enumerate(radii[1:], start=1):
        pr = p_of(float(r))
        values[i] = 2.0 * pr / (p0 + pr)

    def evaluate(r: float) -> float:
        pr = p_of(float(r))
        return 2.0 * pr / (p0 + pr)

    meta = {
        "spectrum": spectrum.serializable(),
        "numerical_aperture": geometry.numerical_aperture,
        "pulse_count": train.pulse_count,
        "pulse_energy_J": train.pulse_energy,
    }
    return RadialCurve(radii, values, "resolution", meta, evaluate)


def imaging_rate(train: PulseTrainConfig, tls: TwoLevelSystem,
                 p_e_focal: float) -> float:
    """R = p_e / (N T + 1/Gamma0), the fluorescence-throughput figure of merit."""
    if not 0.0 <= p_e_focal <= 1.0:
        raise InvalidParameterError(
            f"focal excitation probability must lie in [0, 1], got {p_e_focal}"
        )
    cycle = train.pulse_count * train.period + 1.0 / tls.spontaneous_rate
    return p_e_focal / cycle
