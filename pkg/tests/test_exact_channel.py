"""Closed-form channel: auxiliary functions, parameter evolution, evolved
characteristic function."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgc.exact_channel import (
    ChannelSpec,
    aux_functions,
    char_evolved,
    char_evolved_sum,
    d_gamma_zero,
    evolve_params,
    wigner_evolved,
)
from bgc.oracle import ode_params
from bgc.phase_space import GaussianTerm, StateSum, char_eval_term, wigner_eval


def test_spec_validation():
    with pytest.raises(ValueError, match="sigma must be >= 0"):
        ChannelSpec(-1.0, 0.5)
    with pytest.raises(ValueError, match="gamma must be >= 0"):
        ChannelSpec(1.0, -0.5)
    with pytest.raises(ValueError, match="hbar must be > 0"):
        ChannelSpec(1.0, 0.5, 0.0)


def test_aux_functions_omega_zero():
    # eta = 0 kills omega = sigma*gamma*eta: u = 1, v = 1 + beta t,
    # ch = t^2/2, sh = t, all exact
    spec = ChannelSpec(1.3, 0.9)
    g, t = 0.7, 0.83
    aux = aux_functions(spec, g, 0.0, t)
    beta = 2.0 * spec.sigma**2 / g
    assert aux.omega == 0.0
    assert aux.u == 1.0
    assert aux.v == pytest.approx(1.0 + beta * t, rel=1e-15)
    assert aux.ch == pytest.approx(t**2 / 2.0, rel=1e-15)
    assert aux.sh == t


def test_aux_functions_reference_point():
    # omega = 1, beta = 2, t = 1: u = cosh 1 + sinh(1)/2, v = cosh 1 + 2 sinh 1
    aux = aux_functions(ChannelSpec(1.0, 1.0), 1.0, 1.0, 1.0)
    assert aux.u == pytest.approx(2.1306812316371445, rel=1e-14)
    assert aux.v == pytest.approx(3.8934830221028467, rel=1e-14)


def test_aux_functions_rejects_bad_squeeze():
    with pytest.raises(ValueError):
        aux_functions(ChannelSpec(1.0, 1.0), 0.0, 1.0, 1.0)


@given(
    sigma=st.floats(0.2, 2.0),
    gamma=st.floats(0.0, 2.0),
    g=st.floats(0.3, 3.0),
    eta=st.floats(-4.0, 4.0),
    t=st.floats(0.0, 1.5),
)
@settings(max_examples=80, deadline=None)
def test_aux_wronskian(sigma, gamma, g, eta, t):
    spec = ChannelSpec(sigma, gamma)
    aux = aux_functions(spec, g, eta, t)
    beta = aux.beta
    lhs_terms = beta * aux.u**2 + (aux.omega**2 / beta) * aux.v**2
    w = beta * aux.u**2 - (aux.omega**2 / beta) * aux.v**2
    # the difference cancels catastrophically for large omega*t; tolerance
    # scales with the magnitude of the cancelling terms
    assert w == pytest.approx(
        beta - aux.omega**2 / beta, abs=1e-13 * (1.0 + lhs_terms)
    )


def test_aux_series_branch_continuity():
    # straddle the series/hyperbolic switchover; the two branches must agree
    # to near machine precision where they meet
    spec = ChannelSpec(1.0, 1.0)
    g = 1.0
    t = 1.0
    lo = aux_functions(spec, g, 0.05 * (1 - 1e-9), t)
    hi = aux_functions(spec, g, 0.05 * (1 + 1e-9), t)
    for field in ("u", "v", "ch", "sh"):
        assert abs(getattr(hi, field) - getattr(lo, field)) < 1e-10


def test_evolve_params_initial_conditions():
    spec = ChannelSpec(0.9, 1.4)
    term = GaussianTerm((2.0, -1.0), (0.7, -0.3), g=1.6)
    ep = evolve_params(spec, term, 0.8, 0.0)
    assert (ep.a, ep.c) == (term.g, 1.0)
    assert (ep.p_center, ep.q_center) == (2.0, -0.3)
    assert (ep.damping, ep.phase) == (0.0, 0.0)
    with pytest.raises(ValueError):
        evolve_params(spec, term, 0.8, -0.01)


def test_damping_gamma_zero_reference():
    # dq = 0, sigma = g = eta = 1, t = 1: the limit damping is exactly 1/12
    spec = ChannelSpec(1.0, 0.0)
    term = GaussianTerm((1.7, 0.0))
    assert d_gamma_zero(spec, term, 1.0, 1.0) == pytest.approx(1.0 / 12.0, rel=1e-13)
    assert d_gamma_zero(spec, term, 1.0, 0.0) == 0.0
    # continuity: tiny gamma approaches the limit formula
    near = evolve_params(ChannelSpec(1.0, 1e-7), term, 1.0, 1.0).damping
    assert near == pytest.approx(1.0 / 12.0, rel=1e-5)


def test_damping_matches_small_gamma():
    spec0 = ChannelSpec(0.8, 0.0)
    spec_eps = ChannelSpec(0.8, 1e-6)
    term = GaussianTerm((0.5, -0.2), (0.0, 1.1), g=2.0)
    for eta, t in [(0.3, 0.4), (-1.2, 0.9), (2.0, 0.1)]:
        lim = d_gamma_zero(spec0, term, eta, t)
        got = evolve_params(spec_eps, term, eta, t).damping
        assert got == pytest.approx(lim, rel=1e-5, abs=1e-12)


def test_char_identity_at_t_zero():
    spec = ChannelSpec(1.1, 0.6, 0.8)
    term = GaussianTerm((0.4, -0.9), (1.0, 0.5), g=1.3, weight=0.7 - 0.2j)
    xi = np.linspace(-2, 2, 9)[:, None]
    eta = np.linspace(-2, 2, 7)[None, :]
    np.testing.assert_allclose(
        char_evolved(spec, term, xi, eta, 0.0),
        char_eval_term(term, xi, eta, spec.hbar),
        atol=1e-14,
    )


def test_trace_preserved_for_all_t():
    spec = ChannelSpec(1.0, 1.2)
    term = GaussianTerm((1.5, 0.3), g=0.6)
    for t in (0.0, 0.2, 0.7, 1.5):
        assert char_evolved(spec, term, 0.0, 0.0, t) == pytest.approx(1.0, abs=1e-12)


def test_damping_nonnegative_nondecreasing():
    spec = ChannelSpec(1.0, 0.8)
    term = GaussianTerm((0.7, -0.4), (0.9, 1.3), g=1.2)
    ts = np.linspace(0.0, 1.2, 25)
    for eta in (-2.0, -0.3, 0.0, 0.4, 1.7):
        d = np.array([evolve_params(spec, term, eta, t).damping for t in ts])
        assert d.min() >= 0.0
        assert np.all(np.diff(d) >= -1e-12)


def test_damping_short_time_linear_branch():
    # (dq, p0) != 0: D ~ [sigma^2 dq^2/2 + gamma^2 eta^2 p0^2/2] t, first-order
    # Richardson in t on the slope
    spec = ChannelSpec(1.0, 0.7)
    term = GaussianTerm((1.3, 0.2), (0.5, 1.5), g=0.8)
    eta = 0.4
    want = (
        spec.sigma**2 * term.dz[1] ** 2 / 2.0
        + spec.gamma**2 * eta**2 * term.z0[0] ** 2 / 2.0
    )
    s1 = evolve_params(spec, term, eta, 1e-4).damping / 1e-4
    s2 = evolve_params(spec, term, eta, 1e-5).damping / 1e-5
    extrap = (10.0 * s2 - s1) / 9.0
    assert extrap == pytest.approx(want, rel=1e-6)


def test_damping_short_time_cubic_branch():
    # dq = p0 = 0 delays decoherence: D ~ sigma^2 eta^2 t^3/6
    spec = ChannelSpec(1.0, 0.7)
    term = GaussianTerm((0.0, 0.2), (0.5, 0.0), g=0.8)
    eta = 0.4
    t = 1e-3
    d = evolve_params(spec, term, eta, t).damping
    assert d == pytest.approx(spec.sigma**2 * eta**2 * t**3 / 6.0, rel=5e-3)


def test_smooth_across_eta_zero():
    # even configuration: all closed forms must agree at eta = +-1e-8
    spec = ChannelSpec(1.0, 1.3)
    term = GaussianTerm((0.0, 0.0), g=1.4)
    eps = 1e-8
    for t in (0.3, 1.0):
        left = aux_functions(spec, term.g, -eps, t)
        right = aux_functions(spec, term.g, eps, t)
        for field in ("u", "v", "ch", "sh"):
            assert abs(getattr(left, field) - getattr(right, field)) < 1e-10
        cl = char_evolved(spec, term, 0.0, -eps, t)
        cr = char_evolved(spec, term, 0.0, eps, t)
        assert abs(cl - np.conj(cr)) < 1e-10


def test_matches_ode_oracle_spot_checks():
    rng = np.random.default_rng(11)
    for _ in range(3):
        sigma, gamma = rng.uniform(0.2, 1.5, size=2)
        g = rng.uniform(0.4, 2.5)
        p0, dq = rng.uniform(-2, 2, size=2)
        eta = rng.uniform(-3, 3)
        t = rng.uniform(0.1, 1.0)
        spec = ChannelSpec(sigma, gamma)
        term = GaussianTerm((p0, 0.0), (0.0, dq), g=g)
        closed = evolve_params(spec, term, eta, t)
        ode = ode_params(spec, term, eta, t)
        for field in ("a", "c", "p_center", "q_center", "damping", "phase"):
            assert getattr(ode, field) == pytest.approx(
                getattr(closed, field), abs=1e-8
            )


def test_char_evolved_sum_linearity():
    spec = ChannelSpec(1.0, 0.5)
    t1 = GaussianTerm((0.0, 1.0), weight=0.6)
    t2 = GaussianTerm((0.0, -1.0), (2.0, 0.0), weight=0.4j)
    state = StateSum((t1, t2), 1.0)
    xi = np.linspace(-1.5, 1.5, 5)[:, None]
    eta = np.linspace(-1.5, 1.5, 5)[None, :]
    total = char_evolved_sum(spec, state, xi, eta, 0.7)
    parts = char_evolved(spec, t1, xi, eta, 0.7) + char_evolved(spec, t2, xi, eta, 0.7)
    np.testing.assert_allclose(total, parts, atol=1e-14)


def test_wigner_evolved_initial_slice():
    spec = ChannelSpec(1.0, 0.9)
    state = StateSum((GaussianTerm((0.5, -0.5), g=1.2),), 1.0)
    p = np.linspace(-3, 3, 11)
    q = np.linspace(-3, 3, 11)
    w = wigner_evolved(spec, state, p, q, 0.0)
    ref = wigner_eval(state, p[:, None], q[None, :])
    np.testing.assert_allclose(w.real, ref.real, atol=1e-9)
    assert np.abs(w.imag).max() < 1e-9


def test_wigner_width_growth_direction():
    # dephasing spreads position: the q-marginal variance grows faster with
    # gamma on, momentum marginal unaffected by gamma
    p = np.linspace(-6, 6, 241)
    q = np.linspace(-10, 10, 401)
    state = StateSum((GaussianTerm((0.0, 0.0)),), 1.0)
    var_q = {}
    var_p = {}
    for gamma in (0.0, 1.0):
        w = wigner_evolved(ChannelSpec(1.0, gamma), state, p, q, 1.0).real
        mass = np.trapezoid(np.trapezoid(w, q, axis=1), p)
        var_q[gamma] = np.trapezoid(np.trapezoid(w * q[None, :] ** 2, q, axis=1), p) / mass
        var_p[gamma] = np.trapezoid(np.trapezoid(w * p[:, None] ** 2, q, axis=1), p) / mass
    assert var_q[1.0] > var_q[0.0] + 0.5
    # var_p comparison limited by the eta-quadrature of the inverse transform
    assert var_p[1.0] == pytest.approx(var_p[0.0], rel=2e-3)
