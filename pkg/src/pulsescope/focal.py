"""Focused broadband fields, rephased intensity, and resolution curves.

The focusing model is a thin nondispersive reference sphere of radius f
illuminated by a waist-sigma beam, valid in the paraxial regime
A = sigma/f << 1 with the focus in the far field of every retained
frequency. Each spectral component focuses to an Airy disk whose scale
is set by its own frequency,

    E(rho, z, w) = i e^{i w (f+z)/c} sqrt(2 U / (eps0 c)) phi(w)
                   * J1(A w rho / c) / rho,

so the coherent superposition at the rephasing time t = (f+z)/c is
narrower than any single-color spot when the spectrum is broad. The
radial dependence enters only through A*w*rho/c; resolution curves are
therefore exactly scale invariant in the product A*rho.

Intensities here are reported in arbitrary units (only ratios enter the
resolution function); field amplitudes carry full SI prefactors because
the excitation chain needs absolute pulse areas.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .bessel import j1_over_x
from .constants import C_LIGHT, EPSILON_0, FIELD_CALIBRATION
from .errors import (
    GridRangeError,
    InvalidParameterError,
    InvalidStateError,
    NumericalConvergenceError,
)
from .spectra import PulseSpectrum

PARAXIAL_LIMIT = 0.2
FAR_FIELD_WAVELENGTHS = 50.0

CURVE_KINDS = ("field", "intensity", "probability", "resolution")


@dataclass(frozen=True)
class FocusingGeometry:
    """Reference sphere radius f and beam waist sigma, both in meters."""

    reference_sphere_radius: float
    waist: float

    def __post_init__(self):
        if self.reference_sphere_radius <= 0:
            raise InvalidParameterError("reference sphere radius must be positive")
        if self.waist <= 0:
            raise InvalidParameterError("waist must be positive")
        if self.numerical_aperture > PARAXIAL_LIMIT:
            warnings.warn(
                f"numerical aperture {self.numerical_aperture:.3g} exceeds the "
                f"paraxial limit {PARAXIAL_LIMIT}; results are extrapolated",
                stacklevel=2,
            )

    @property
    def numerical_aperture(self) -> float:
        return self.waist / self.reference_sphere_radius

    def far_field_valid(self, spectrum: PulseSpectrum) -> bool:
        """Focus at least 50 mean wavelengths from the reference sphere."""
        return self.reference_sphere_radius >= FAR_FIELD_WAVELENGTHS * spectrum.mean_wavelength


@dataclass
class RadialCurve:
    """Sampled radial profile with provenance and an optional evaluator.

    radii start at zero and increase strictly; kind tags the unit
    ("field", "intensity", "probability", "resolution"). The evaluator,
    when present, recomputes the underlying continuous function at any
    radius and is what spot_size bisects on.
    """

    radii: np.ndarray
    values: np.ndarray
    kind: str
    meta: dict = field(default_factory=dict)
    evaluator: Optional[Callable[[float], float]] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in CURVE_KINDS:
            raise InvalidParameterError(f"unknown curve kind {self.kind!r}")
        if self.radii.size != self.values.size:
            raise InvalidParameterError("radii and values must have equal length")
        if self.radii[0] != 0.0:
            raise InvalidParameterError("radial grid must start at rho = 0")
        if np.any(np.diff(self.radii) <= 0):
            raise InvalidParameterError("radial grid must increase strictly")
        if self.kind == "resolution" and self.values[0] != 1.0:
            raise InvalidParameterError("resolution curves must start at exactly 1")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("rho_m,value,kind\n")
        for r, v in zip(self.radii, self.values):
            buf.write(f"{float(r)!r},{float(v)!r},{self.kind}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RadialCurve":
        lines = text.strip().split("\n")
        if lines[0] != "rho_m,value,kind":
            raise InvalidParameterError(f"unexpected CSV header {lines[0]!r}")
        radii, values, kind = [], [], None
        for line in lines[1:]:
            r, v, k = line.split(",")
            radii.append(float(r))
            values.append(float(v))
            kind = k
        return cls(np.array(radii), np.array(values), kind)


def _amplitude_prefactor(pulse_energy: float) -> float:
    if pulse_energy <= 0:
        raise InvalidParameterError(f"pulse energy must be positive, got {pulse_energy}")
    return np.sqrt(2.0 * pulse_energy / (EPSILON_0 * C_LIGHT))


def _airy_kernel(geometry: FocusingGeometry, omega, rho: float):
    """J1(A w rho / c) / rho with the removable rho -> 0 limit A w / (2 c)."""
    a = geometry.numerical_aperture
    x = a * np.asarray(omega, dtype=float) * rho / C_LIGHT
    return (a * np.asarray(omega, dtype=float) / C_LIGHT) * j1_over_x(x)


def focal_field_spectral(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    pulse_energy: float,
    rho: float,
    z: float,
    omega,
):
    """Complex focused spectral amplitude near the focal point (V/m per
    sqrt(rad/s)), x-polarized scalar component."""
    if rho < 0:
        raise InvalidParameterError(f"radial coordinate must be >= 0, got {rho}")
    omega = np.asarray(omega, dtype=float)
    phase = np.exp(1j * omega * (geometry.reference_sphere_radius + z) / C_LIGHT)
    return (
        1j
        * phase
        * _amplitude_prefactor(pulse_energy)
        * spectrum.value(omega)
        * _airy_kernel(geometry, omega, rho)
    )


def _synthesis_grid(spectrum: PulseSpectrum, tau_span: float, grid_scale: float = 1.0) -> np.ndarray:
    """Frequency grid dense enough that trapezoid synthesis at delay tau_span
    has negligible aliasing."""
    wmax = spectrum.max_frequency
    n = int(max(4001, 16.0 * tau_span * wmax)) | 1
    n = int(n * max(grid_scale, 0.05)) | 1
    return np.linspace(0.0, wmax, n)


def focal_field_time(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    pulse_energy: float,
    rho: float,
    t,
    z: float = 0.0,
    grid_scale: float = 1.0,
):
    """Real time-domain field at radius rho in the plane z (V/m).

    Synthesized as (kappa / pi) * Re int_0^inf E(rho, z, w) e^{-i w t} dw
    using the reality fold phi(w) = conj(phi(-w)); kappa is the package
    field calibration constant. The peak sits at the rephasing time
    t = (f + z)/c.
    """
    if rho < 0:
        raise InvalidParameterError(f"radial coordinate must be >= 0, got {rho}")
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    t_rephase = (geometry.reference_sphere_radius + z) / C_LIGHT
    tau = t - t_rephase
    if t.size > 1:
        dt = np.diff(t)
        needed = 2.0 * np.pi / (spectrum.carrier_frequency + 6.0 * spectrum.spectral_width) / 4.0
        if np.max(dt) > needed:
            raise NumericalConvergenceError(
                "time grid does not resolve the field oscillation",
                max_step=float(np.max(dt)), required=needed,
            )
    w = _synthesis_grid(spectrum, float(np.max(np.abs(tau))) + 1.0 / spectrum.spectral_width,
                        grid_scale)
    kern = 1j * spectrum.value(w) * _airy_kernel(geometry, w, rho)
    out = np.empty(t.shape)
    chunk = max(1, int(4e6 // w.size))
    for i0 in range(0, tau.size, chunk):
        sl = slice(i0, i0 + chunk)
        phase = np.exp(-1j * np.outer(tau[sl], w))
        out[sl] = np.trapezoid((phase * kern[None, :]).real, w, axis=1)
    out *= _amplitude_prefactor(pulse_energy) * FIELD_CALIBRATION / np.pi
    return float(out[0]) if scalar else out


def focal_intensity_rephased(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    rho,
    n_grid: int = 6001,
) -> np.ndarray:
    """Rephasing-time intensity |int_0^inf dw phi(w) J1(A w rho/c)/rho|^2
    in arbitrary units (only ratios are meaningful downstream)."""
    rhos = np.atleast_1d(np.asarray(rho, dtype=float))
    if np.any(rhos < 0):
        raise InvalidParameterError("radial coordinates must be >= 0")
    w = spectrum.frequency_grid(n_grid)
    phi = spectrum.value(w)
    out = np.empty(rhos.shape)
    for i, r in enumerate(rhos):
        amp = np.trapezoid(phi * _airy_kernel(geometry, w, r), w)
        out[i] = np.abs(amp) ** 2
    return out if np.ndim(rho) else float(out[0])


def intensity_resolution(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    rho,
    n_grid: int = 6001,
):
    """2 I(rho) / [I(0) + I(rho)]; exactly 1 at rho = 0."""
    i_focus = focal_intensity_rephased(geometry, spectrum, 0.0, n_grid)
    if i_focus == 0.0:
        raise InvalidStateError("focal intensity vanishes; degenerate spectrum")
    i_rho = focal_intensity_rephased(geometry, spectrum, rho, n_grid)
    return 2.0 * i_rho / (i_focus + i_rho)


def intensity_resolution_curve(
    geometry: FocusingGeometry,
    spectrum: PulseSpectrum,
    rho_max: Optional[float] = None,
    n_points: int = 81,
    n_grid: int = 6001,
    grid_scale: float = 1.0,
) -> RadialCurve:
    """Sampled intensity-resolution curve with a bisectable evaluator."""
    if rho_max is None:
        # one Airy-scale unit past the expected half crossing
        rho_max = spectrum.mean_wavelength / geometry.numerical_aperture
    n_grid = int(n_grid * max(grid_scale, 0.05)) | 1
    radii = np.linspace(0.0, rho_max, n_points)
    i_focus = focal_intensity_rephased(geometry, spectrum, 0.0, n_grid)
    if i_focus == 0.0:
        raise InvalidStateError("focal intensity vanishes; degenerate spectrum")
    i_vals = focal_intensity_rephased(geometry, spectrum, radii, n_grid)
    values = 2.0 * i_vals / (i_focus + i_vals)
    values[0] = 1.0

    def evaluate(r: float) -> float:
        ir = focal_intensity_rephased(geometry, spectrum, float(r), n_grid)
        return 2.0 * ir / (i_focus + ir)

    meta = {
        "spectrum": spectrum.serializable(),
        "numerical_aperture": geometry.numerical_aperture,
    }
    return RadialCurve(radii, values, "resolution", meta, evaluate)


def spot_size(curve: RadialCurve, threshold: float = 0.5,
              rtol: float = 1e-6) -> float:
    """Smallest radius where a resolution curve crosses the threshold.

    Brackets on the stored samples, then bisects the curve's continuous
    evaluator to relative tolerance rtol.
    """
    if curve.kind != "resolution":
        raise InvalidParameterError("spot size is defined on resolution curves")
    if not 0.0 < threshold <= 1.0:
        raise InvalidParameterError(f"threshold must lie in (0, 1], got {threshold}")
    if threshold == 1.0:
        return 0.0
    below = np.nonzero(curve.values <= threshold)[0]
    if below.size == 0:
        raise GridRangeError(
            f"curve never reaches {threshold} within rho <= {curve.radii[-1]!r}; "
            "extend the radial grid"
        )
    hi_idx = below[0]
    if hi_idx == 0:
        return 0.0
    lo, hi = curve.radii[hi_idx - 1], curve.radii[hi_idx]
    f = curve.evaluator
    if f is None:
        # no evaluator: secant on the sampled points
        v_lo, v_hi = curve.values[hi_idx - 1], curve.values[hi_idx]
        return float(lo + (v_lo - threshold) * (hi - lo) / (v_lo - v_hi))
    while (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > threshold:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))
