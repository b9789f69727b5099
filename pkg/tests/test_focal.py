"""Focused fields, rephased intensity, resolution curves, spot sizes."""

import mpmath
import numpy as np
import pytest
from scipy.constants import c as C

from pulsescope.bessel import J1_FIRST_ZERO
from pulsescope.errors import (
    GridRangeError,
    InvalidParameterError,
    NumericalConvergenceError,
)
from pulsescope.focal import (
    FocusingGeometry,
    RadialCurve,
    focal_field_spectral,
    focal_field_time,
    focal_intensity_rephased,
    intensity_resolution,
    intensity_resolution_curve,
    spot_size,
)
from pulsescope.spectra import make_gaussian_spectrum

W0 = 2.0e15
U = 1e-9
GEO = FocusingGeometry(0.01, 0.001)  # A = 0.1


@pytest.fixture(scope="module")
def ultrafast():
    return make_gaussian_spectrum(W0, 10.0 * W0)


@pytest.fixture(scope="module")
def narrowband():
    return make_gaussian_spectrum(W0, 0.01 * W0)


def test_geometry_validation():
    with pytest.raises(InvalidParameterError):
        FocusingGeometry(-1.0, 0.1)
    with pytest.warns(UserWarning):
        FocusingGeometry(0.01, 0.005)  # A = 0.5 beyond paraxial


def test_far_field_flag(ultrafast):
    assert GEO.far_field_valid(ultrafast)
    tight = FocusingGeometry(1e-7, 1e-8)
    assert not tight.far_field_valid(ultrafast)


def test_spectral_field_removable_singularity(ultrafast):
    w = ultrafast.mean_frequency
    lam = ultrafast.mean_wavelength
    at_zero = focal_field_spectral(GEO, ultrafast, U, 0.0, 0.0, w)
    near = focal_field_spectral(GEO, ultrafast, U, 1e-9 * lam, 0.0, w)
    np.testing.assert_allclose(near, at_zero, rtol=1e-6)
    # limit value A w / (2 c) times the spectral amplitude
    a = GEO.numerical_aperture
    expect = 1j * np.exp(1j * w * GEO.reference_sphere_radius / C) \
        * np.sqrt(2 * U / (8.8541878128e-12 * C)) * ultrafast.value(w) \
        * a * w / (2 * C)
    np.testing.assert_allclose(at_zero, expect, rtol=1e-6)


def test_spectral_field_against_mpmath_bessel(ultrafast):
    mpmath.mp.dps = 30
    w = ultrafast.mean_frequency
    rho = ultrafast.mean_wavelength / GEO.numerical_aperture
    got = focal_field_spectral(GEO, ultrafast, U, rho, 0.0, w)
    x = GEO.numerical_aperture * w * rho / C
    kernel = float(mpmath.besselj(1, x)) / rho
    from pulsescope.focal import _amplitude_prefactor
    expect = (1j * np.exp(1j * w * GEO.reference_sphere_radius / C)
              * _amplitude_prefactor(U) * ultrafast.value(w) * kernel)
    np.testing.assert_allclose(got, expect, rtol=1e-8)


def test_spectral_field_rejects_negative_rho(ultrafast):
    with pytest.raises(InvalidParameterError):
        focal_field_spectral(GEO, ultrafast, U, -1e-9, 0.0, W0)


def test_monochromatic_first_zero(narrowband):
    # first null of the Airy kernel at A w rho / c = 3.8317 (~0.61 lambda/A)
    rho_zero = J1_FIRST_ZERO * C / (GEO.numerical_aperture * W0)
    lam = 2 * np.pi * C / W0
    np.testing.assert_allclose(rho_zero, 0.6098 * lam / GEO.numerical_aperture,
                               rtol=1e-3)
    vals = focal_intensity_rephased(
        GEO, narrowband, np.linspace(0.8 * rho_zero, 1.2 * rho_zero, 81))
    i_min = np.argmin(vals)
    assert 0.85 < np.linspace(0.8, 1.2, 81)[i_min] < 1.15


def test_time_field_peaks_at_rephasing_time(ultrafast):
    t_r = GEO.reference_sphere_radius / C
    half = 6.0 / ultrafast.spectral_width
    t = np.linspace(t_r - half, t_r + half, 4001)
    e = focal_field_time(GEO, ultrafast, U, 0.0, t)
    assert np.all(np.isreal(e))
    peak = np.argmax(np.abs(e))
    assert abs(t[peak] - t_r) <= (t[1] - t[0])
    # rephasing optimality: no sampled |E| exceeds the rephasing value
    assert np.max(np.abs(e)) <= abs(focal_field_time(GEO, ultrafast, U, 0.0, t_r)) * (1 + 1e-9)


def test_time_field_rejects_coarse_grid(ultrafast):
    t_r = GEO.reference_sphere_radius / C
    coarse = np.linspace(t_r - 1e-15, t_r + 1e-15, 5)
    with pytest.raises(NumericalConvergenceError):
        focal_field_time(GEO, ultrafast, U, 0.0, coarse)


def test_parseval(ultrafast):
    from pulsescope.constants import FIELD_CALIBRATION
    t_r = GEO.reference_sphere_radius / C
    half = 14.0 / ultrafast.spectral_width
    t = np.linspace(t_r - half, t_r + half, 60001)
    e = focal_field_time(GEO, ultrafast, U, 0.0, t)
    lhs = np.trapezoid(e**2, t)
    w = ultrafast.frequency_grid(60001)
    ew = focal_field_spectral(GEO, ultrafast, U, 0.0, 0.0, w)
    rhs = FIELD_CALIBRATION**2 / np.pi * np.trapezoid(np.abs(ew) ** 2, w)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-6)


def test_intensity_nonnegative_and_narrowband_airy(narrowband):
    lam = 2 * np.pi * C / W0
    rho = np.linspace(0.0, 0.8 * lam / GEO.numerical_aperture, 60)
    vals = focal_intensity_rephased(GEO, narrowband, rho)
    assert np.all(vals >= 0)
    # narrowband limit: proportional to the monochromatic Airy pattern
    # (normalized curves compared absolutely; the raw ratio is singular
    # at the Airy zero inside the range)
    from pulsescope.bessel import j1_over_x
    x = GEO.numerical_aperture * W0 * rho / C
    airy = (W0 * GEO.numerical_aperture / C * j1_over_x(x)) ** 2
    np.testing.assert_allclose(vals / vals[0], airy / airy[0], atol=1e-2)


def test_intensity_dense_double_quadrature_oracle(ultrafast):
    # brute force: scipy Bessel + 10x denser trapezoid, 20 radii
    from scipy.special import j1 as scipy_j1
    lam = ultrafast.mean_wavelength
    rhos = np.linspace(1e-9, 0.6 * lam / GEO.numerical_aperture, 20)
    got = focal_intensity_rephased(GEO, ultrafast, rhos)
    w = np.linspace(0.0, ultrafast.max_frequency, 60011)
    phi = ultrafast.value(w)
    brute = np.array([
        abs(np.trapezoid(phi * scipy_j1(GEO.numerical_aperture * w * r / C) / r, w)) ** 2
        for r in rhos
    ])
    np.testing.assert_allclose(got, brute, rtol=1e-4)


def test_resolution_bounds_and_value_at_zero(ultrafast):
    assert intensity_resolution(GEO, ultrafast, 0.0) == 1.0
    lam = ultrafast.mean_wavelength
    vals = np.array([
        intensity_resolution(GEO, ultrafast, r)
        for r in np.linspace(0.0, lam / GEO.numerical_aperture, 12)
    ])
    assert np.all((vals >= 0) & (vals <= 1))


def test_scale_invariance_in_a_rho(ultrafast):
    # (A, rho) and (2A, rho/2) give identical resolution values
    geo2 = FocusingGeometry(0.01, 0.002)
    lam = ultrafast.mean_wavelength
    rhos = np.linspace(0.05, 1.0, 7) * lam / GEO.numerical_aperture
    v1 = np.array([intensity_resolution(GEO, ultrafast, r) for r in rhos])
    v2 = np.array([intensity_resolution(geo2, ultrafast, r / 2) for r in rhos])
    np.testing.assert_allclose(v1, v2, rtol=1e-9)


def test_wavelength_rescale_invariance():
    s1 = make_gaussian_spectrum(W0, 10 * W0)
    s2 = make_gaussian_spectrum(3 * W0, 30 * W0)
    lam1 = s1.mean_wavelength
    rhos = np.linspace(0.05, 0.8, 5) * lam1 / GEO.numerical_aperture
    v1 = np.array([intensity_resolution(GEO, s1, r) for r in rhos])
    v2 = np.array([intensity_resolution(GEO, s2, r / 3) for r in rhos])
    np.testing.assert_allclose(v1, v2, rtol=1e-9)


def test_spot_size_ultrafast_constant(ultrafast):
    curve = intensity_resolution_curve(GEO, ultrafast)
    spot = spot_size(curve)
    const = spot * GEO.numerical_aperture / ultrafast.mean_wavelength
    # honest value of the half crossing at width/carrier = 10
    np.testing.assert_allclose(const, 0.221095, rtol=5e-3)


def test_spot_size_doubling_aperture_halves_spot(ultrafast):
    geo2 = FocusingGeometry(0.01, 0.002)
    s1 = spot_size(intensity_resolution_curve(GEO, ultrafast))
    s2 = spot_size(intensity_resolution_curve(geo2, ultrafast))
    np.testing.assert_allclose(s1 / s2, 2.0, rtol=1e-5)


def test_spot_size_narrowband_regression(narrowband):
    curve = intensity_resolution_curve(GEO, narrowband)
    const = spot_size(curve) * GEO.numerical_aperture / narrowband.mean_wavelength
    np.testing.assert_allclose(const, 0.317955, rtol=1e-2)


def test_spot_size_threshold_one_is_zero(ultrafast):
    curve = intensity_resolution_curve(GEO, ultrafast)
    assert spot_size(curve, threshold=1.0) == 0.0


def test_spot_size_no_crossing_raises(ultrafast):
    lam = ultrafast.mean_wavelength
    curve = intensity_resolution_curve(
        GEO, ultrafast, rho_max=0.01 * lam / GEO.numerical_aperture)
    with pytest.raises(GridRangeError):
        spot_size(curve, threshold=0.1)


def test_radial_curve_csv_round_trip(ultrafast):
    curve = intensity_resolution_curve(GEO, ultrafast, n_points=17)
    text = curve.to_csv()
    assert text.splitlines()[0] == "rho_m,value,kind"
    back = RadialCurve.from_csv(text)
    np.testing.assert_array_equal(back.radii, curve.radii)
    np.testing.assert_array_equal(back.values, curve.values)
    assert back.kind == "resolution"


def test_radial_curve_invariants():
    with pytest.raises(InvalidParameterError):
        RadialCurve(np.array([0.0, 1.0, 1.0]), np.zeros(3), "intensity")
    with pytest.raises(InvalidParameterError):
        RadialCurve(np.array([0.5, 1.0]), np.zeros(2), "intensity")
    with pytest.raises(InvalidParameterError):
        RadialCurve(np.array([0.0, 1.0]), np.array([0.9, 0.5]), "resolution")
    with pytest.raises(InvalidParameterError):
        RadialCurve(np.array([0.0, 1.0]), np.zeros(2), "banana")


def test_spectral_field_z_is_pure_phase(ultrafast):
    w = ultrafast.mean_frequency
    rho = 0.3 * ultrafast.mean_wavelength / GEO.numerical_aperture
    e0 = focal_field_spectral(GEO, ultrafast, U, rho, 0.0, w)
    ez = focal_field_spectral(GEO, ultrafast, U, rho, 1e-6, w)
    np.testing.assert_allclose(abs(ez), abs(e0), rtol=1e-14)
    np.testing.assert_allclose(ez / e0, np.exp(1j * w * 1e-6 / C), rtol=1e-9)


def test_degenerate_spectrum_invalid_state():
    # identically vanishing amplitude: the resolution ratio is undefined
    from pulsescope.errors import InvalidStateError
    from pulsescope.spectra import PulseSpectrum

    dead = PulseSpectrum(
        carrier_frequency=W0, spectral_width=0.1 * W0, normalization=1.0,
        mean_frequency=W0, mean_wavelength=2 * np.pi * C / W0,
        _shape=lambda w: np.zeros_like(np.asarray(w, dtype=complex)))
    with pytest.raises(InvalidStateError):
        intensity_resolution(GEO, dead, 1e-9)


def test_resolution_curve_monotone_through_crossing(ultrafast):
    # broadband curve falls monotonically from 1 through the half crossing;
    # no ripple appears within a mean wavelength over the aperture
    curve = intensity_resolution_curve(GEO, ultrafast, n_points=101)
    assert np.all(np.diff(curve.values) < 0)
    assert curve.values[-1] < 0.02


def test_spot_size_secant_fallback_without_evaluator(ultrafast):
    curve = intensity_resolution_curve(GEO, ultrafast, n_points=201)
    bare = RadialCurve.from_csv(curve.to_csv())
    assert bare.evaluator is None
    np.testing.assert_allclose(spot_size(bare), spot_size(curve), rtol=1e-3)


def test_filon_weights_match_arbitrary_precision():
    from pulsescope.quadrature import _filon_weights
    mpmath.mp.dps = 40
    thetas = np.array([1e-8, 1e-3, 0.0399, 0.0401, 0.3, 2.0, 40.0])
    P, Q = _filon_weights(thetas)
    for th, p, q in zip(thetas, P, Q):
        p_ref = mpmath.quad(lambda s: (1 - s) * mpmath.e ** (1j * th * s), [0, 1])
        q_ref = mpmath.quad(lambda s: s * mpmath.e ** (1j * th * s), [0, 1])
        assert abs(p - complex(p_ref)) < 1e-12
        assert abs(q - complex(q_ref)) < 1e-12


def test_filon_transform_exact_for_linear_times_oscillation():
    # exact for piecewise-linear data at any oscillation frequency;
    # reference computed in arbitrary precision
    from pulsescope.quadrature import filon_transform
    t = np.linspace(-1.0, 2.0, 301)
    f = 0.7 - 0.3 * t + 0j
    mpmath.mp.dps = 40
    for q in (0.0, 1e-6, 0.5, 3.0, 200.0):
        got = filon_transform(t, f, q)
        expect = mpmath.quad(
            lambda s: (mpmath.mpf("0.7") - mpmath.mpf("0.3") * s)
            * mpmath.e ** (1j * q * s), [-1, 2], maxdegree=12)
        np.testing.assert_allclose(got, complex(expect), rtol=1e-10,
                                   atol=1e-13)
