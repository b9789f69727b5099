"""Exact driven-TLS propagation and first-order emission probability.

The oracle is certified here three ways: exactly solvable limits, grid
refinement, and an independent second-order perturbative evaluation of
the emission amplitude. The measured oracle-vs-analytic deviations are
frozen as regressions; the headline equivalence targets are exercised in
test_acceptance.py.
"""

import numpy as np
import pytest
from scipy.constants import c as C, hbar

import pulsescope as ps
from pulsescope.errors import (
    GridRangeError,
    InvalidParameterError,
    NumericalConvergenceError,
)
from pulsescope.oracle import emission_spectrum
from pulsescope.scenario import _oracle_single

W0 = 2.0e15


def _gaussian_drive(amplitude, width, center=0.0):
    def drive(t):
        x = (np.asarray(t, dtype=float) - center) * width
        return amplitude * x * np.exp(-(x**2)) * np.exp(0.5)
    return drive


@pytest.fixture(scope="module")
def physical_run():
    """Worked-scenario-anchored oracle drive at width/carrier = 10, eta small."""
    cfg = ps.ScenarioConfig()
    spectrum, geometry, tls, _ = cfg.build()
    s = ps.make_gaussian_spectrum(tls.transition_frequency,
                                  10 * tls.transition_frequency)
    e1 = ps.eta(geometry, s, cfg.pulse_energy_J, tls)
    u = cfg.pulse_energy_J * (0.05 / e1) ** 2
    half = 8.0 / s.spectral_width
    grid = ps.default_time_grid(s.spectral_width, tls.transition_frequency,
                                -half, half)
    t_r = geometry.reference_sphere_radius / C
    dh = tls.dipole_magnitude / hbar

    def drive(t):
        return -dh * ps.focal_field_time(geometry, s, u, 0.0,
                                         np.asarray(t) + t_r)

    history = ps.propagate_driven_tls(drive, grid, tls.transition_frequency)
    return history, drive, grid, tls, s


def test_free_evolution():
    grid = np.linspace(0.0, 40.0 / W0, 4001)
    h = ps.propagate_driven_tls(lambda t: np.zeros_like(np.asarray(t)), grid, W0)
    t_span = grid[-1] - grid[0]
    expect = np.array([[np.exp(-1j * W0 * t_span), 0.0], [0.0, 1.0]])
    assert np.max(np.abs(h.final - expect)) < 1e-10
    assert ps.oracle_c0(h) == 0.0


def test_resonant_rabi_rotation():
    # constant drive with w0 = 0: |<e|U|g>|^2 = sin^2(Omega t). The stepper
    # needs a nonzero carrier for its grid check, so use a tiny one and
    # compare against the exact two-level solution.
    omega = 3.0e13
    grid = np.linspace(0.0, 3e-14, 30001)
    w0 = 1.0  # effectively zero on these time scales
    h = ps.propagate_driven_tls(lambda t: np.full(np.shape(t), omega), grid, w0)
    amp = h.final[0, 1]
    np.testing.assert_allclose(abs(amp) ** 2,
                               np.sin(omega * grid[-1]) ** 2, atol=1e-8)


def test_unitarity_and_composition(physical_run):
    history, *_ = physical_run
    assert history.unitarity_defect() < 1e-10
    assert history.composition_defect() < 1e-8


def test_step_refinement(physical_run):
    history, drive, grid, tls, s = physical_run
    fine = ps.default_time_grid(s.spectral_width, tls.transition_frequency,
                                grid[0], grid[-1], grid_scale=2.0)
    h2 = ps.propagate_driven_tls(drive, fine, tls.transition_frequency)
    assert abs(h2.final[0, 1] - history.final[0, 1]) < 1e-8


def test_grid_validation():
    with pytest.raises(InvalidParameterError):
        ps.propagate_driven_tls(lambda t: np.zeros_like(t), np.array([0.0]), W0)
    coarse = np.linspace(0.0, 1e-13, 5)
    with pytest.raises(NumericalConvergenceError):
        ps.propagate_driven_tls(lambda t: np.zeros_like(t), coarse, W0)


def test_zero_drive_emission_amplitude_vanishes():
    grid = np.linspace(-20.0 / W0, 20.0 / W0, 8001)
    h = ps.propagate_driven_tls(lambda t: np.zeros_like(np.asarray(t)), grid, W0)
    qs = np.array([0.1, 1.0, 5.0, 20.0]) * W0
    m = ps.oracle_emission_amplitude(h, qs)
    # analytic tails cancel the window integral exactly for free evolution
    assert np.max(np.abs(m)) < 1e-12 / W0


def test_emission_amplitude_requires_decayed_drive():
    grid = np.linspace(-1.0 / W0, 1.0 / W0, 2001)
    drive = _gaussian_drive(0.05 * W0, W0)  # width ~ carrier: not decayed
    h = ps.propagate_driven_tls(drive, grid, W0)
    with pytest.raises(GridRangeError):
        ps.oracle_emission_amplitude(h, W0)


def test_emission_amplitude_positive_frequencies_only(physical_run):
    history, *_ = physical_run
    with pytest.raises(InvalidParameterError):
        ps.oracle_emission_amplitude(history, -W0)


def test_second_order_cross_check(physical_run):
    # independent weak-field evaluation agrees pointwise at small area
    history, drive, grid, tls, s = physical_run
    w0 = tls.transition_frequency
    qs = np.array([0.3, 0.5, 1.0, 2.0, 3.0]) * s.spectral_width
    m_oracle = ps.oracle_emission_amplitude(history, qs)
    m_pert = ps.second_order_emission_amplitude(drive, grid, w0, qs)
    # global phase between the two pictures is e^{-i w0 t_end}
    np.testing.assert_allclose(np.abs(m_oracle) ** 2, np.abs(m_pert) ** 2,
                               rtol=2e-2)
    phases = np.angle(m_oracle / m_pert)
    assert np.max(np.abs(phases - phases[0])) < 1e-6


def test_c0_suppression_with_width(physical_run):
    cfg = ps.ScenarioConfig()
    spectrum, geometry, tls, _ = cfg.build()
    w0 = tls.transition_frequency
    dh = tls.dipole_magnitude / hbar
    t_r = geometry.reference_sphere_radius / C
    c0s = []
    for ratio in (3.0, 10.0, 30.0):
        s = ps.make_gaussian_spectrum(w0, ratio * w0)
        e1 = ps.eta(geometry, s, cfg.pulse_energy_J, tls)
        u = cfg.pulse_energy_J * (0.3 / e1) ** 2
        half = 8.0 / s.spectral_width
        grid = ps.default_time_grid(s.spectral_width, w0, -half, half)
        drive = lambda t: -dh * ps.focal_field_time(geometry, s, u, 0.0,
                                                    np.asarray(t) + t_r)
        h = ps.propagate_driven_tls(drive, grid, w0)
        c0s.append(abs(ps.oracle_c0(h)) ** 2)
        # suppression relative to the peak transient excitation
        transient = np.max(np.abs(h.propagators[:, 0, 1]) ** 2)
        assert c0s[-1] < transient / 10.0
    assert c0s[0] > c0s[1] > c0s[2]


def test_oracle_probability_eta_scaling(physical_run):
    history, drive, grid, tls, s = physical_run
    p1 = ps.oracle_excitation_probability(history, tls)

    def half_drive(t):
        return 0.5 * drive(t)

    h2 = ps.propagate_driven_tls(half_drive, grid, tls.transition_frequency)
    p2 = ps.oracle_excitation_probability(h2, tls)
    np.testing.assert_allclose(p1 / p2, 16.0, rtol=5e-3)


def test_oracle_probability_sign_flip(physical_run):
    history, drive, grid, tls, _ = physical_run
    h2 = ps.propagate_driven_tls(lambda t: -drive(t), grid,
                                 tls.transition_frequency)
    p1 = ps.oracle_excitation_probability(history, tls)
    p2 = ps.oracle_excitation_probability(h2, tls)
    np.testing.assert_allclose(p1, p2, rtol=1e-10)


def test_oracle_probability_zero_drive():
    grid = np.linspace(-20.0 / W0, 20.0 / W0, 8001)
    h = ps.propagate_driven_tls(lambda t: np.zeros_like(np.asarray(t)), grid, W0)
    tls = ps.TwoLevelSystem(W0, 1e-6 * W0)
    assert ps.oracle_excitation_probability(h, tls) < 1e-30


def test_oracle_vs_analytic_regression():
    # measured deviations of the sudden/weak-field chain from the exact
    # first-order dynamics (the headline targets live in acceptance)
    cfg = ps.ScenarioConfig()
    r10 = _oracle_single(cfg, 10.0, 0.05)
    r30 = _oracle_single(cfg, 30.0, 0.05)
    np.testing.assert_allclose(r10.relative_deviation, 0.820, atol=0.02)
    np.testing.assert_allclose(r30.relative_deviation, 0.833, atol=0.02)
    assert r10.flags["first_order_trust"]
    assert r30.flags["first_order_trust"]


def test_oracle_train_linearity():
    cfg = ps.ScenarioConfig()
    r1 = _oracle_single(cfg, 10.0, 0.05, n_pulses=1)
    r2 = _oracle_single(cfg, 10.0, 0.05, n_pulses=2)
    np.testing.assert_allclose(r2.p_e_oracle / r1.p_e_oracle, 2.0, rtol=5e-2)
    np.testing.assert_allclose(r2.p_e_analytic / r1.p_e_analytic, 2.0,
                               rtol=1e-9)


def test_emission_spectrum_samples(physical_run):
    history, *_ , tls, s = physical_run
    qs = np.array([1.0, 2.0]) * s.spectral_width
    samples = emission_spectrum(history, qs)
    assert [x.omega_k for x in samples] == list(qs)
    assert all(x.amplitude_sq >= 0 for x in samples)
    np.testing.assert_allclose([x.weight for x in samples], qs**3)


def test_oracle_report_json():
    cfg = ps.ScenarioConfig()
    rep = _oracle_single(cfg, 10.0, 0.05)
    import json
    data = json.loads(rep.to_json())
    assert data["p_e_oracle"] == rep.p_e_oracle
    assert data["relative_deviation"] == rep.relative_deviation
