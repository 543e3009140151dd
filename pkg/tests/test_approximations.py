import math

import numpy as np
import pytest

from bgc.approximations import (
    PerturbationOperator,
    SemiclassicalState,
    decoherence_onset,
    perturb_correction,
    sc_gaussian_covariance,
    sc_nonhermitian_evolve,
    semiclassical_init,
    wigner_gamma_zero,
)
from bgc.exact_channel import ChannelSpec, wigner_evolved
from bgc.gaussian_channel import model_sigma_channel, semigroup_matrices
from bgc.phase_space import OMEGA, GaussianTerm, StateSum
from bgc.observables import moments_closed


def test_semiclassical_init_fields():
    term = GaussianTerm((1.2, -0.7), (0.5, 2.0), g=1.6)
    s = semiclassical_init(term)
    assert np.allclose(s.x_cap, [1.2, -0.7])
    assert np.allclose(s.y_cap, OMEGA @ np.array([0.5, 2.0]))
    assert np.allclose(s.g_mat, np.diag([1.6, 1.0 / 1.6]))
    assert s.c_amp == 1.0 + 0.0j
    assert s.d_phase == 0.0 + 0.0j


def test_semiclassical_state_validation():
    g = np.eye(2, dtype=complex)
    with pytest.raises(ValueError, match="2-vector"):
        SemiclassicalState(np.zeros(3), np.zeros(2), g, 1.0, 0.0)
    with pytest.raises(ValueError, match="symmetric"):
        SemiclassicalState(
            np.zeros(2), np.zeros(2), np.array([[1.0, 0.2], [0.1, 1.0]]), 1.0, 0.0
        )


def test_width_closed_form_initial_and_reference():
    spec = ChannelSpec(1.0, 1.0)
    term = GaussianTerm((0.0, 0.0), g=1.4)
    assert np.allclose(sc_gaussian_covariance(spec, term, 0.0).mat, np.diag([1.4, 1.0 / 1.4]))
    # all parameters 1, p0 = 0: G = [[3, 2], [2, 8/3]], det = 4
    g1 = sc_gaussian_covariance(spec, GaussianTerm((0.0, 0.0)), 1.0).mat
    assert np.allclose(g1, [[3.0, 2.0], [2.0, 8.0 / 3.0]], rtol=1e-14)
    assert np.linalg.det(g1) == pytest.approx(4.0, rel=1e-14)


def test_width_closed_form_vs_moment_covariance():
    # the moment covariance adds only an hbar^2 piece in the qq entry
    spec = ChannelSpec(1.3, 0.7, hbar=0.5)
    term = GaussianTerm((1.2, -0.4), g=0.8)
    for t in (0.3, 0.9):
        g_t = sc_gaussian_covariance(spec, term, t).mat
        shift = (spec.hbar**2 / 2.0) * spec.gamma**2 * (term.g * t + spec.sigma**2 * t**2)
        want = 0.5 * spec.hbar * g_t + shift * np.outer([0, 1], [0, 1])
        got = moments_closed(spec, term, t).cov
        assert np.abs(got - want).max() < 1e-12


def test_width_closed_form_rejects_oscillatory_terms():
    with pytest.raises(ValueError, match="plain packet"):
        sc_gaussian_covariance(ChannelSpec(1.0, 0.5), GaussianTerm((0.0, 0.0), (1.0, 0.0)), 0.5)


def test_evolve_reduces_to_width_closed_form():
    spec = ChannelSpec(1.0, 0.8)
    term = GaussianTerm((0.7, -0.4), g=1.3)
    out = sc_nonhermitian_evolve(spec, semiclassical_init(term), 0.9, dt=1e-3)
    want = sc_gaussian_covariance(spec, term, 0.9).mat
    assert np.abs(out.g_mat - want).max() < 1e-10
    assert np.abs(out.g_mat.imag).max() < 1e-10


def test_evolve_exact_without_dephasing():
    # with gamma = 0 the parameter flow is the quadratic semigroup itself
    term = GaussianTerm((0.7, -0.4), g=1.3)
    out = sc_nonhermitian_evolve(ChannelSpec(1.0, 0.0), semiclassical_init(term), 0.9, dt=1e-3)
    m = semigroup_matrices(model_sigma_channel(1.0), 0.9)
    g0 = np.diag([term.g, 1.0 / term.g])
    assert np.abs(out.g_mat - (m.r @ g0 @ m.r.T + 2.0 * m.d)).max() < 1e-10


def test_evolve_rejects_bad_arguments():
    s = semiclassical_init(GaussianTerm((0.0, 0.0)))
    with pytest.raises(ValueError, match=">= 0"):
        sc_nonhermitian_evolve(ChannelSpec(1.0, 0.5), s, -0.1)
    with pytest.raises(ValueError, match="dt"):
        sc_nonhermitian_evolve(ChannelSpec(1.0, 0.5), s, 0.5, dt=0.0)


def test_evolve_detects_ansatz_breakdown():
    bad = SemiclassicalState(
        np.array([0.5, 0.0]),
        np.array([0.0, 1.0]),
        np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
        1.0 + 0.0j,
        0.0 + 0.0j,
    )
    with pytest.raises(RuntimeError, match="positive definiteness"):
        sc_nonhermitian_evolve(ChannelSpec(1.0, 1.0), bad, 0.1, dt=1e-3)


def test_damping_accumulates_and_starts_linearly():
    spec = ChannelSpec(1.0, 0.8)
    s0 = semiclassical_init(GaussianTerm((0.7, -0.4), (1.1, 0.6), g=1.3))
    y = s0.y_cap
    k_im = 0.5 * (spec.sigma**2 * y[0] ** 2 + spec.gamma**2 * s0.x_cap[0] ** 2 * y[1] ** 2)
    slope = sc_nonhermitian_evolve(spec, s0, 0.002, dt=1e-4).d_phase.imag / 0.002
    assert slope == pytest.approx(k_im, rel=2e-2)
    damp = [sc_nonhermitian_evolve(spec, s0, t, dt=1e-3).d_phase.imag for t in (0.1, 0.3, 0.6)]
    assert damp[0] > 0.0
    assert damp[0] < damp[1] < damp[2]


def test_onset_values_and_branches():
    spec = ChannelSpec(1.0, 0.8)
    assert decoherence_onset(spec, np.array([0.7, 0.0]), np.zeros(2), 0.5) == 0.0
    x = np.array([0.7, -0.4])
    y = np.array([1.1, 0.6])
    k_im = 0.5 * (1.1**2 + 0.8**2 * 0.7**2 * 0.6**2)
    assert decoherence_onset(spec, x, y, 0.25) == pytest.approx(0.25 * k_im, rel=1e-14)
    # vanishing rate falls back to the cubic law
    x_c = np.array([0.0, -0.4])
    y_c = np.array([0.0, 1.5])
    assert decoherence_onset(spec, x_c, y_c, 0.2) == pytest.approx(1.5**2 * 0.2**3 / 6.0, rel=1e-14)
    ts = np.array([0.0, 0.1, 0.2])
    got = decoherence_onset(spec, x, y, ts)
    assert np.allclose(got, ts * k_im, rtol=1e-14)


def test_onset_tracks_wave_packet_damping():
    spec = ChannelSpec(1.0, 0.8)
    cases = [
        GaussianTerm((0.7, -0.4), (1.1, 0.6), g=1.3),
        GaussianTerm((0.0, -0.4), (1.5, 0.0), g=1.3),
    ]
    for term in cases:
        s0 = semiclassical_init(term)
        ev = sc_nonhermitian_evolve(spec, s0, 0.01, dt=1e-4)
        on = decoherence_onset(spec, s0.x_cap, s0.y_cap, 0.01)
        assert ev.d_phase.imag == pytest.approx(on, rel=2e-2)


def test_perturbation_weights():
    op = PerturbationOperator(ChannelSpec(1.0, 0.5), 0.7)
    w = op.weights()
    assert len(w) == 5
    for k in range(5):
        assert w[k] == pytest.approx(0.7 ** (k + 1) / math.factorial(k + 1), rel=1e-15)


def test_correction_ignores_the_dephasing_rate():
    # the correction is the quadratic coefficient; the rate multiplies it outside
    term = GaussianTerm((0.7, -0.4), g=1.3)
    p = np.linspace(-3, 3, 11)[:, None]
    q = np.linspace(-3, 3, 11)[None, :]
    a = perturb_correction(ChannelSpec(1.0, 0.0), term, 0.5, p, q)
    b = perturb_correction(ChannelSpec(1.0, 0.9), term, 0.5, p, q)
    assert np.array_equal(a, b)


def test_correction_preserves_trace():
    spec = ChannelSpec(1.0, 0.8)
    term = GaussianTerm((0.7, -0.4), g=1.3)
    p = np.linspace(-14.0, 14.0, 301)
    q = np.linspace(-14.0, 14.0, 301)
    c = perturb_correction(spec, term, 0.8, p[:, None], q[None, :])
    tr = np.trapezoid(np.trapezoid(c, q, axis=1), p)
    assert abs(tr) < 1e-8


def test_correction_is_the_quadratic_coefficient():
    term = GaussianTerm((0.7, -0.4), g=1.3)
    state = StateSum((term,), 1.0)
    p = np.linspace(-4.0, 4.0, 33)
    q = np.linspace(-4.0, 4.0, 33)
    base = wigner_evolved(ChannelSpec(1.0, 0.0), state, p, q, 0.5).real
    corr = perturb_correction(ChannelSpec(1.0, 0.0), term, 0.5, p[:, None], q[None, :])
    resid = {}
    for gam in (0.025, 0.05, 0.1, 0.2):
        ex = wigner_evolved(ChannelSpec(1.0, gam), state, p, q, 0.5).real
        resid[gam] = np.abs((ex - base) / gam**2 - corr).max()
    # difference quotient converges to the correction, quadratically in the rate
    assert resid[0.2] > resid[0.1] > resid[0.05]
    assert resid[0.05] < resid[0.2] / 8.0
    assert resid[0.05] < 2.5e-3
    expo = math.log(
        np.abs(wigner_evolved(ChannelSpec(1.0, 0.05), state, p, q, 0.5).real - base).max()
        / np.abs(wigner_evolved(ChannelSpec(1.0, 0.025), state, p, q, 0.5).real - base).max()
    ) / math.log(2.0)
    assert expo == pytest.approx(2.0, abs=0.05)


def test_gamma_zero_wigner_matches_exact_channel():
    spec = ChannelSpec(1.2, 0.0)
    term = GaussianTerm((0.7, -0.4), g=1.3)
    p = np.linspace(-4.0, 4.0, 33)
    q = np.linspace(-4.0, 4.0, 33)
    got = wigner_gamma_zero(spec, term, 0.8, p[:, None], q[None, :])
    want = wigner_evolved(spec, StateSum((term,), 1.0), p, q, 0.8).real
    assert np.abs(got - want).max() < 1e-12
