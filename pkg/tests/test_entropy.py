import math

import numpy as np
import pytest

from bgc.approximations import sc_gaussian_covariance
from bgc.entropy import (
    entropy_cov,
    entropy_f,
    entropy_gaussian,
    entropy_perturbative,
    entropy_semiclassical,
    exp_quadratic_symbol,
    log_gaussian,
    symplectic_eigenvalue,
)
from bgc.exact_channel import ChannelSpec
from bgc.phase_space import CovarianceMatrix, GaussianTerm

MIXED_G = np.array([[3.0, 2.0], [2.0, 8.0 / 3.0]])


def test_symplectic_eigenvalue_examples():
    assert symplectic_eigenvalue(CovarianceMatrix(np.eye(2), 1.0)) == pytest.approx(1.0)
    squeezed = CovarianceMatrix(np.diag([4.0, 0.25]), 1.0)
    assert symplectic_eigenvalue(squeezed) == pytest.approx(1.0, rel=1e-14)
    assert symplectic_eigenvalue(CovarianceMatrix(MIXED_G, 1.0)) == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(ValueError, match="positive definite"):
        symplectic_eigenvalue(CovarianceMatrix(np.diag([1.0, -1.0]), 1.0))


def test_entropy_f_values():
    assert entropy_f(1.0) == 0.0
    assert entropy_f(2.0) == pytest.approx(0.95477125244221923, rel=1e-15)
    zs = np.linspace(1.0, 50.0, 400)
    vals = entropy_f(zs)
    assert vals.shape == zs.shape
    assert np.all(np.diff(vals) > 0.0)
    with pytest.raises(ValueError, match=">= 1"):
        entropy_f(0.9)


def test_entropy_f_thermal_route():
    # z arccoth(z) + ln(sqrt(z^2-1)/2) is the same function
    zs = np.linspace(1.0 + 1e-6, 100.0, 5001)
    arccoth = 0.5 * np.log((zs + 1.0) / (zs - 1.0))
    thermal = zs * arccoth + np.log(0.5 * np.sqrt((zs - 1.0) * (zs + 1.0)))
    assert np.abs(entropy_f(zs) - thermal).max() < 1e-12


def test_log_gaussian_reference():
    lg = log_gaussian(CovarianceMatrix(2.0 * np.eye(2), 1.0))
    assert np.allclose(lg.q_mat, math.log(3.0) * np.eye(2), rtol=1e-14)
    assert lg.log_z == pytest.approx(math.log(0.5 * math.sqrt(3.0)), rel=1e-14)


def test_log_gaussian_rejects_pure_states():
    with pytest.raises(ValueError, match="pure-state singularity"):
        log_gaussian(CovarianceMatrix(np.eye(2), 1.0))


def test_log_exp_round_trip():
    # recover the width matrix from the quadratic form of -ln(rho)
    for hbar in (1.0, 0.5):
        lg = log_gaussian(CovarianceMatrix(MIXED_G, hbar))
        w0 = math.sqrt(np.linalg.det(lg.q_mat))
        theta = 0.5 * w0 * hbar
        g_rec = (w0 / math.tanh(theta)) * np.linalg.inv(lg.q_mat)
        assert np.abs(g_rec - MIXED_G).max() < 1e-12
        _, tr = exp_quadratic_symbol(lg.q_mat, 1.0, 0.0, 0.0, hbar)
        assert tr == pytest.approx(math.exp(lg.log_z), rel=1e-12)


def test_exp_quadratic_symbol_trace_identity():
    qm = np.array([[1.5, 0.3], [0.3, 0.9]])
    p = np.linspace(-30.0, 30.0, 2001)
    sym, tr = exp_quadratic_symbol(qm, 0.8, p[:, None], p[None, :], 0.7)
    quad = np.trapezoid(np.trapezoid(sym, p, axis=1), p) / (2.0 * math.pi * 0.7)
    assert quad == pytest.approx(tr, rel=1e-8)


def test_exp_quadratic_symbol_short_time_and_validation():
    qm = np.array([[1.5, 0.3], [0.3, 0.9]])
    p = np.linspace(-5.0, 5.0, 101)
    sym, _ = exp_quadratic_symbol(qm, 1e-8, p[:, None], p[None, :], 1.0)
    assert np.abs(sym - 1.0).max() < 1e-6
    with pytest.raises(ValueError, match="beta"):
        exp_quadratic_symbol(qm, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError, match="positive definite"):
        exp_quadratic_symbol(np.diag([1.0, -2.0]), 1.0, 0.0, 0.0)


def test_entropy_gaussian_values():
    assert entropy_gaussian(CovarianceMatrix(np.eye(2), 1.0)) == 0.0
    got = entropy_gaussian(CovarianceMatrix(MIXED_G, 1.0))
    assert got == pytest.approx(float(entropy_f(2.0)), rel=1e-14)


def test_entropy_cov_start_and_no_dephasing_limit():
    term = GaussianTerm((0.3, 0.1), g=0.8)
    assert entropy_cov(ChannelSpec(1.0, 0.5), term, 0.0) == 0.0
    # without dephasing the hbar^2 covariance piece vanishes
    spec0 = ChannelSpec(1.0, 0.0)
    assert entropy_cov(spec0, term, 0.7) == entropy_semiclassical(spec0, term, 0.7)
    with pytest.raises(ValueError, match="plain packet"):
        entropy_cov(ChannelSpec(1.0, 0.5), GaussianTerm((0.0, 0.0), (1.0, 0.0)), 0.5)


def test_semiclassical_entropy_below_covariance_entropy():
    spec = ChannelSpec(1.0, 0.5)
    for g, t in ((1.0, 0.5), (0.7, 0.9), (2.0, 0.2)):
        term = GaussianTerm((0.3, 0.1), g=g)
        assert entropy_semiclassical(spec, term, t) < entropy_cov(spec, term, t)


def test_entropy_perturbative_values():
    term = GaussianTerm((0.0, 0.0))
    spec = ChannelSpec(1.0, 0.5)
    assert entropy_perturbative(spec, term, 0.5) == pytest.approx(
        0.6941652497589201, rel=1e-15
    )
    spec0 = ChannelSpec(1.0, 0.0)
    z = symplectic_eigenvalue(sc_gaussian_covariance(spec0, term, 0.5))
    assert entropy_perturbative(spec0, term, 0.5) == pytest.approx(float(entropy_f(z)), rel=1e-14)
    with pytest.raises(ValueError, match="pure-state singularity"):
        entropy_perturbative(spec, term, 0.0)
    with pytest.raises(ValueError, match="plain packet"):
        entropy_perturbative(spec, GaussianTerm((0.0, 0.0), (1.0, 0.0)), 0.5)


def test_entropy_perturbative_is_linear_in_squared_rate():
    term = GaussianTerm((0.0, 0.0))
    base = entropy_perturbative(ChannelSpec(1.0, 0.0), term, 0.5)
    d3 = entropy_perturbative(ChannelSpec(1.0, 0.3), term, 0.5) - base
    d6 = entropy_perturbative(ChannelSpec(1.0, 0.6), term, 0.5) - base
    assert d6 / d3 == pytest.approx(4.0, rel=1e-12)


def test_perturbative_gap_scales_as_fourth_power():
    # residual against the full covariance entropy: doubling the rate
    # multiplies the gap by roughly sixteen, depressed by higher orders
    term = GaussianTerm((0.0, 0.0))
    gaps = {}
    for gam in (0.25, 0.5):
        spec = ChannelSpec(1.0, gam)
        gaps[gam] = abs(entropy_cov(spec, term, 0.3) - entropy_perturbative(spec, term, 0.3))
    assert 10.0 < gaps[0.5] / gaps[0.25] < 18.0
