"""Brute-force validators for the closed-form machinery.

Every oracle here recomputes a quantity the library produces in closed form,
by a route that shares no code with it: a finite-difference solver for the
phase-space master equation, an RK4 integrator for the parameter ODE system,
a density-matrix diagonalization for the entropy, and adaptive quadrature for
the auxiliary-function integral identities.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.integrate import quad

from bgc.exact_channel import ChannelSpec, EvolutionParameters, _eta_window, char_evolved_sum
from bgc.phase_space import GaussianTerm, StateSum

__all__ = [
    "PhaseSpaceGrid",
    "entropy_numerical",
    "integral_lemma_suite",
    "ode_params",
    "ode_params_sweep",
    "oracle_report",
    "pde_evolve",
    "stable_dt",
]


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform rectangular grid of a phase-space field, rows indexed by p."""

    p_min: float
    p_max: float
    q_min: float
    q_max: float
    n_p: int
    n_q: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.n_p < 8 or self.n_q < 8:
            raise ValueError("grid needs at least 8 points per axis")
        if self.p_max <= self.p_min or self.q_max <= self.q_min:
            raise ValueError("grid extents must be increasing")
        vals = np.asarray(self.values)
        if vals.shape != (self.n_p, self.n_q):
            raise ValueError("values must have shape (n_p, n_q)")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", vals)

    def p_nodes(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)

    def q_nodes(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n_q)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.n_p - 1)

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / (self.n_q - 1)

    def mass(self) -> float:
        return float(np.real(np.sum(self.values)) * self.dp * self.dq)

    def boundary_ratio(self) -> float:
        """Largest boundary magnitude relative to the field peak."""
        vals = np.abs(self.values)
        edge = max(vals[0].max(), vals[-1].max(), vals[:, 0].max(), vals[:, -1].max())
        return float(edge / vals.max())


def stable_dt(spec: ChannelSpec, grid: PhaseSpaceGrid) -> float:
    """Largest accepted time step: 0.4 times the stability bound
    min(dq/|p|_max, dp^2/(hbar sigma^2), dq^2/(hbar gamma^2 p_max^2))."""
    p_abs = max(abs(grid.p_min), abs(grid.p_max))
    bounds = []
    if p_abs > 0.0:
        bounds.append(grid.dq / p_abs)
    if spec.sigma > 0.0:
        bounds.append(grid.dp**2 / (spec.hbar * spec.sigma**2))
    if spec.gamma > 0.0 and p_abs > 0.0:
        bounds.append(grid.dq**2 / (spec.hbar * spec.gamma**2 * p_abs**2))
    if not bounds:
        raise ValueError("generator vanishes on this grid; nothing to evolve")
    return 0.4 * min(bounds)


@njit(cache=True)
def _stage_into_pad(wp, w, k, coef):
    n_p, n_q = w.shape
    for i in range(n_p):
        for j in range(n_q):
            wp[i + 2, j + 2] = w[i, j] + coef * k[i, j]


@njit(cache=True)
def _copy_into_pad(wp, w):
    n_p, n_q = w.shape
    for i in range(n_p):
        for j in range(n_q):
            wp[i + 2, j + 2] = w[i, j]


@njit(cache=True, fastmath=True)
def _pde_rhs(wp, pvals, inv6dq, cp, cq_rows, out):
    # second derivatives: 5-point 4th order; transport: 4-point 3rd order,
    # biased against the local flow direction sign(p); ghosts are zero
    n_p, n_q = out.shape
    for i in range(n_p):
        pi = pvals[i]
        cqi = cq_rows[i]
        ii = i + 2
        for j in range(n_q):
            jj = j + 2
            w_cc = wp[ii, jj]
            d2p = (
                -wp[ii - 2, jj]
                + 16.0 * wp[ii - 1, jj]
                - 30.0 * w_cc
                + 16.0 * wp[ii + 1, jj]
                - wp[ii + 2, jj]
            )
            d2q = (
                -wp[ii, jj - 2]
                + 16.0 * wp[ii, jj - 1]
                - 30.0 * w_cc
                + 16.0 * wp[ii, jj + 1]
                - wp[ii, jj + 2]
            )
            if pi > 0.0:
                d1q = (
                    2.0 * wp[ii, jj + 1] + 3.0 * w_cc - 6.0 * wp[ii, jj - 1] + wp[ii, jj - 2]
                ) * inv6dq
            elif pi < 0.0:
                d1q = -(
                    2.0 * wp[ii, jj - 1] + 3.0 * w_cc - 6.0 * wp[ii, jj + 1] + wp[ii, jj + 2]
                ) * inv6dq
            else:
                d1q = 0.0
            out[i, j] = cp * d2p + cqi * d2q - pi * d1q


@njit(cache=True)
def _pde_run(w0, pvals, inv6dq, cp, cq_rows, h, n_steps):
    n_p, n_q = w0.shape
    wp = np.zeros((n_p + 4, n_q + 4))
    k1 = np.empty((n_p, n_q))
    k2 = np.empty((n_p, n_q))
    k3 = np.empty((n_p, n_q))
    k4 = np.empty((n_p, n_q))
    w = w0.copy()
    for _ in range(n_steps):
        _copy_into_pad(wp, w)
        _pde_rhs(wp, pvals, inv6dq, cp, cq_rows, k1)
        _stage_into_pad(wp, w, k1, 0.5 * h)
        _pde_rhs(wp, pvals, inv6dq, cp, cq_rows, k2)
        _stage_into_pad(wp, w, k2, 0.5 * h)
        _pde_rhs(wp, pvals, inv6dq, cp, cq_rows, k3)
        _stage_into_pad(wp, w, k3, h)
        _pde_rhs(wp, pvals, inv6dq, cp, cq_rows, k4)
        sixth = h / 6.0
        for i in range(n_p):
            for j in range(n_q):
                w[i, j] = w[i, j] + sixth * (
                    k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j]
                )
    return w


def _run_real(spec: ChannelSpec, grid: PhaseSpaceGrid, field, h: float, n_steps: int):
    pvals = grid.p_nodes()
    cp = 0.5 * spec.hbar * spec.sigma**2 / (12.0 * grid.dp**2)
    cq_rows = 0.5 * spec.hbar * spec.gamma**2 * pvals**2 / (12.0 * grid.dq**2)
    return _pde_run(
        np.ascontiguousarray(field, dtype=np.float64),
        pvals,
        1.0 / (6.0 * grid.dq),
        cp,
        cq_rows,
        h,
        n_steps,
    )


def pde_evolve(
    spec: ChannelSpec,
    w0: PhaseSpaceGrid,
    t: float,
    dt: float | None = None,
    return_report: bool = False,
):
    """Integrate the phase-space master equation on the grid by the method
    of lines (RK4 in time, zero Dirichlet ghosts).

    dt defaults to the stability limit from stable_dt; a larger explicit dt
    is rejected. With return_report=True a dict with mass drift and boundary
    figures accompanies the evolved grid.
    """
    if t < 0.0:
        raise ValueError("time must be >= 0")
    limit = stable_dt(spec, w0)
    if dt is None:
        dt = limit
    elif dt <= 0.0:
        raise ValueError("dt must be > 0")
    elif dt > limit * (1.0 + 1e-12):
        raise ValueError(f"dt = {dt:g} violates the stability bound {limit:g}")
    ratio0 = w0.boundary_ratio()
    if t == 0.0:
        out = w0
        n_steps = 0
    else:
        n_steps = max(1, int(math.ceil(t / dt - 1e-12)))
        h = t / n_steps
        field = np.asarray(w0.values)
        if np.iscomplexobj(field) and np.abs(field.imag).max() > 0.0:
            evolved = _run_real(spec, w0, field.real, h, n_steps) + 1j * _run_real(
                spec, w0, field.imag, h, n_steps
            )
        else:
            evolved = _run_real(spec, w0, field.real, h, n_steps)
        out = PhaseSpaceGrid(
            w0.p_min, w0.p_max, w0.q_min, w0.q_max, w0.n_p, w0.n_q, evolved
        )
    if not return_report:
        return out
    vals = np.abs(np.asarray(out.values))
    frame = float(
        (vals[:2].sum() + vals[-2:].sum() + vals[2:-2, :2].sum() + vals[2:-2, -2:].sum())
        * out.dp
        * out.dq
    )
    report = {
        "n_steps": n_steps,
        "dt": dt,
        "mass_initial": w0.mass(),
        "mass_final": out.mass(),
        "mass_drift": abs(out.mass() - w0.mass()),
        "boundary_ratio_initial": ratio0,
        "boundary_abs_mass": frame,
    }
    return out, report


def _ode_rhs(state, sig2, half_g2e2, eta):
    a, c, p_cap, q_cap, d_cap, phi = state
    inv_a = 1.0 / a
    return np.stack(
        (
            2.0 * sig2 - half_g2e2 * a * a,
            -sig2 * inv_a * c,
            -half_g2e2 * a * p_cap,
            -2.0 * sig2 * inv_a * q_cap - eta,
            0.5 * sig2 * q_cap**2 + half_g2e2 * p_cap**2,
            -2.0 * sig2 * inv_a * q_cap * p_cap,
        )
    )


def _rk4_span(state, h, n_steps, sig2, half_g2e2, eta):
    for _ in range(n_steps):
        k1 = _ode_rhs(state, sig2, half_g2e2, eta)
        k2 = _ode_rhs(state + 0.5 * h * k1, sig2, half_g2e2, eta)
        k3 = _ode_rhs(state + 0.5 * h * k2, sig2, half_g2e2, eta)
        k4 = _ode_rhs(state + h * k3, sig2, half_g2e2, eta)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return state


def ode_params_sweep(
    sigma,
    gamma,
    g,
    p0,
    dq,
    eta,
    t,
    n_boundary: int = 4000,
    n_main: int = 8000,
):
    """RK4-integrate the six-parameter system for many parameter draws at
    once; all arguments broadcast.

    The Riccati width equation has a fast boundary layer for strong
    dephasing, so the step count is split: n_boundary steps over
    [0, min(t, 0.05)] and n_main steps over the remainder.

    Returns a (6, ...) array ordered (a, c, p_center, q_center, damping,
    phase).
    """
    sigma, gamma, g, p0, dq, eta, t = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (sigma, gamma, g, p0, dq, eta, t))
    )
    if np.any(t < 0.0):
        raise ValueError("time must be >= 0")
    if np.any(g <= 0.0):
        raise ValueError("width parameter g must be > 0")
    sig2 = sigma**2
    half_g2e2 = 0.5 * gamma**2 * eta**2
    state = np.stack((g, np.ones_like(g), p0, dq, np.zeros_like(g), np.zeros_like(g)))
    t_b = np.minimum(t, 0.05)
    state = _rk4_span(state, t_b / n_boundary, n_boundary, sig2, half_g2e2, eta)
    state = _rk4_span(state, (t - t_b) / n_main, n_main, sig2, half_g2e2, eta)
    return state


def ode_params(
    spec: ChannelSpec,
    term: GaussianTerm,
    eta: float,
    t: float,
    dt: float | None = None,
    check: bool = False,
) -> EvolutionParameters:
    """Evolved chi-parameters of one term by direct ODE integration.

    With dt given, a uniform RK4 grid of that step is used and, when
    check=True, a halved-step rerun must agree to 1e-8 or a RuntimeError is
    raised. With dt=None the two-phase schedule of ode_params_sweep applies.
    """
    if t < 0.0:
        raise ValueError("time must be >= 0")
    p0 = term.z0[0]
    dq = term.dz[1]

    def _integrate(n_b, n_m):
        return ode_params_sweep(
            spec.sigma, spec.gamma, term.g, p0, dq, eta, t, n_boundary=n_b, n_main=n_m
        )

    if dt is None:
        state = _integrate(4000, 8000)
        if check:
            finer = _integrate(8000, 16000)
            if np.max(np.abs(finer - state)) > 1e-8:
                raise RuntimeError("step-halving convergence failure")
            state = finer
    else:
        if dt <= 0.0:
            raise ValueError("dt must be > 0")
        n = max(1, int(math.ceil(t / dt - 1e-12)))
        sig2 = spec.sigma**2
        half_g2e2 = 0.5 * spec.gamma**2 * eta**2
        start = np.array([term.g, 1.0, p0, dq, 0.0, 0.0])
        state = _rk4_span(start, t / n, n, sig2, half_g2e2, float(eta))
        if check:
            finer = _rk4_span(start, t / (2 * n), 2 * n, sig2, half_g2e2, float(eta))
            if np.max(np.abs(finer - state)) > 1e-8:
                raise RuntimeError("step-halving convergence failure")
            state = finer
    a, c, p_cap, q_cap, d_cap, phi = (float(x) for x in state)
    return EvolutionParameters(a, c, p_cap, q_cap, d_cap, phi)


def _plain_widths(spec: ChannelSpec, term: GaussianTerm, t: float) -> tuple[float, float]:
    """Center and envelope width of one term's q-marginal at time t."""
    hbar = spec.hbar
    g = term.g
    p0 = term.z0[0]
    var = hbar * (
        0.5 / g + spec.gamma**2 * p0**2 * t + 0.5 * g * t**2 + spec.sigma**2 * t**3 / 3.0
    ) + 0.5 * hbar**2 * spec.gamma**2 * (g * t + spec.sigma**2 * t**2)
    return term.z0[1] + t * p0, math.sqrt(var)


def entropy_numerical(
    spec: ChannelSpec,
    state,
    t: float,
    n_q: int = 221,
    n_eta: int = 801,
    q_half: float | None = None,
) -> float:
    """Entropy by reconstruction and diagonalization of the position-space
    density matrix.

    rho(q, q') is assembled from the evolved characteristic function, one
    phase-scaled Toeplitz layer per eta node; eigenvalues are weighted by the
    grid spacing, clipped at 1e-12, and summed as -lambda ln lambda. Warns
    when the negative-eigenvalue mass exceeds 1e-6 (grid too coarse).
    """
    if isinstance(state, GaussianTerm):
        state = StateSum((state,), spec.hbar)
    hbar = spec.hbar
    lo = math.inf
    hi = -math.inf
    e_lo = math.inf
    e_hi = -math.inf
    for term in state.terms:
        center, width = _plain_widths(spec, term, t)
        if q_half is not None:
            lo = -q_half
            hi = q_half
        else:
            lo = min(lo, center - 8.0 * width)
            hi = max(hi, center + 8.0 * width)
        w_lo, w_hi = _eta_window(term, hbar)
        e_lo = min(e_lo, w_lo)
        e_hi = max(e_hi, w_hi)
    q_nodes = np.linspace(lo, hi, n_q)
    step = q_nodes[1] - q_nodes[0]
    eta = np.linspace(e_lo, e_hi, n_eta)
    d_eta = eta[1] - eta[0]
    diffs = step * np.arange(-(n_q - 1), n_q, dtype=float)
    chi = char_evolved_sum(spec, state, diffs[:, None], eta[None, :], t)
    weights = np.full(n_eta, d_eta)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    chi = chi * (weights / (2.0 * np.pi * hbar))
    phase = np.exp(-0.5j * np.outer(q_nodes, eta) / hbar)
    idx = np.arange(n_q)[:, None] - np.arange(n_q)[None, :] + n_q - 1
    rho = np.zeros((n_q, n_q), dtype=complex)
    block = 32
    for k0 in range(0, n_eta, block):
        k1 = min(k0 + block, n_eta)
        toe = chi[:, k0:k1][idx]
        rho += np.einsum("ik,ijk,jk->ij", phase[:, k0:k1], toe, phase[:, k0:k1])
    rho = 0.5 * (rho + rho.conj().T) * step
    lam = np.linalg.eigvalsh(rho)
    neg = -float(lam[lam < 0.0].sum())
    if neg > 1e-6:
        warnings.warn(
            f"negative-eigenvalue mass {neg:.2e}; grid too coarse", stacklevel=2
        )
    lam = lam[lam > 1e-12]
    return float(-(lam * np.log(lam)).sum())


def _sinhc_scaled(omega: float, s: float) -> float:
    """sinh(omega s)/omega, stable through omega -> 0."""
    x = omega * s
    if abs(x) < 1e-4:
        return s * (1.0 + x * x / 6.0 + x**4 / 120.0)
    return math.sinh(x) / omega


def _cosh_ratio(omega: float, s: float) -> float:
    """(cosh(omega s) - 1)/omega^2, stable through omega -> 0."""
    x = omega * s
    if abs(x) < 1e-4:
        return 0.5 * s * s * (1.0 + x * x / 12.0 + x**4 / 360.0)
    return (math.cosh(x) - 1.0) / omega**2


def _time_comb(omega: float, beta: float, t: float) -> float:
    """(t v - sh - 2 beta ch)/omega^2, stable through omega -> 0."""
    x = omega * t
    if abs(x) < 0.05:
        return t**3 * (
            (1.0 / 3.0 + beta * t / 12.0)
            + x**2 * (1.0 / 30.0 + beta * t / 180.0)
            + x**4 * (1.0 / 840.0 + beta * t / 6720.0)
            + x**6 * (1.0 / 45360.0 + beta * t / 453600.0)
        )
    sh = _sinhc_scaled(omega, t)
    ch = _cosh_ratio(omega, t)
    v = math.cosh(x) + beta * sh
    return (t * v - sh - 2.0 * beta * ch) / omega**2


_QUAD_OPTS = {"epsabs": 1e-12, "epsrel": 1e-12, "limit": 200}


def integral_lemma_suite(omega: float, beta: float, t: float) -> dict:
    """Check the seven auxiliary-function integral identities and the
    Wronskian constancy at one parameter point.

    Left sides by adaptive quadrature, right sides in closed form. The three
    trajectory integrals are evaluated at fixed internal constants
    (eta, q_cap0, p_cap0, g) = (1.3, 0.7, -1.1, 1.0); they multiply the same
    primitive integrals, so fixed values exercise the identities fully.
    """
    if beta <= 0.0:
        raise ValueError("beta must be > 0")
    if omega < 0.0 or t < 0.0:
        raise ValueError("omega and t must be >= 0")
    eta_c, q0_c, p0_c, g_c = 1.3, 0.7, -1.1, 1.0
    rr = omega**2 / beta

    def v_of(s):
        return math.cosh(omega * s) + beta * _sinhc_scaled(omega, s)

    def u_of(s):
        return math.cosh(omega * s) + rr * _sinhc_scaled(omega, s)

    def q_of(s):
        return (
            q0_c - eta_c * (beta * _cosh_ratio(omega, s) + _sinhc_scaled(omega, s))
        ) / v_of(s)

    def p_of(s):
        return p0_c / u_of(s)

    sh_t = _sinhc_scaled(omega, t)
    ch_t = _cosh_ratio(omega, t)
    v_t = v_of(t)
    u_t = u_of(t)
    checks = []

    def add(name, lhs_fn, rhs, tol=1e-10):
        lhs = quad(lhs_fn, 0.0, t, **_QUAD_OPTS)[0]
        disc = abs(lhs - rhs)
        checks.append(
            {
                "test": name,
                "params": {"omega": omega, "beta": beta, "t": t},
                "discrepancy": disc,
                "tolerance": tol,
                "pass": bool(disc <= tol),
            }
        )

    add("int_u_over_v2", lambda s: u_of(s) / v_of(s) ** 2, (1.0 - 1.0 / v_t) / beta)
    add("int_inv_v2", lambda s: 1.0 / v_of(s) ** 2, sh_t / v_t)
    add("int_inv_u2", lambda s: 1.0 / u_of(s) ** 2, sh_t / u_t)
    add(
        "int_u2_over_v2",
        lambda s: (u_of(s) / v_of(s)) ** 2,
        rr / beta * t + (1.0 - rr / beta) * sh_t / v_t,
    )
    add(
        "int_q2",
        lambda s: q_of(s) ** 2,
        eta_c**2 * _time_comb(omega, beta, t) / v_t
        - 2.0 * eta_c * q0_c * ch_t / v_t
        + q0_c**2 * sh_t / v_t,
    )
    add("int_p2", lambda s: p_of(s) ** 2, p0_c**2 * sh_t / u_t)
    add(
        "int_qp_over_a",
        lambda s: q_of(s) * p_of(s) / (g_c * v_of(s) / u_of(s)),
        p0_c * q0_c / g_c * sh_t / v_t - p0_c * eta_c / g_c * ch_t / v_t,
    )
    wron_ref = beta - rr
    samples = np.linspace(0.0, t, 41) if t > 0.0 else np.array([0.0])
    wron_disc = max(
        abs(beta * u_of(s) ** 2 - rr * v_of(s) ** 2 - wron_ref) for s in samples
    )
    checks.append(
        {
            "test": "wronskian_constancy",
            "params": {"omega": omega, "beta": beta, "t": t},
            "discrepancy": wron_disc,
            "tolerance": 1e-12,
            "pass": bool(wron_disc <= 1e-12),
        }
    )
    return {
        "checks": checks,
        "max_discrepancy": max(c["discrepancy"] for c in checks),
        "pass": all(c["pass"] for c in checks),
    }


def oracle_report(seed: int = 20250814) -> dict:
    """Run a fixed battery of oracle self-checks; JSON-serializable output."""
    rng = np.random.default_rng(seed)
    checks = []

    suite = integral_lemma_suite(1.0, 2.0, 1.0)
    checks.extend(suite["checks"])
    for _ in range(3):
        draw = integral_lemma_suite(
            float(rng.uniform(0.0, 2.0)),
            float(rng.uniform(0.5, 4.0)),
            float(rng.uniform(0.0, 1.0)),
        )
        checks.extend(draw["checks"])

    from bgc.exact_channel import evolve_params

    n_draws = 25
    sig = rng.uniform(0.0, 2.0, n_draws)
    gam = rng.uniform(0.0, 2.0, n_draws)
    gs = rng.uniform(0.2, 5.0, n_draws)
    etas = rng.uniform(-5.0, 5.0, n_draws)
    ts = rng.uniform(0.0, 1.0, n_draws)
    p0s = rng.uniform(-2.0, 2.0, n_draws)
    dqs = rng.uniform(-2.0, 2.0, n_draws)
    numeric = ode_params_sweep(sig, gam, gs, p0s, dqs, etas, ts)
    worst = 0.0
    for i in range(n_draws):
        spec_i = ChannelSpec(float(sig[i]), float(gam[i]), 1.0)
        term_i = GaussianTerm((float(p0s[i]), 0.0), dz=(0.0, float(dqs[i])), g=float(gs[i]))
        par = evolve_params(spec_i, term_i, float(etas[i]), float(ts[i]))
        closed = np.array(
            [par.a, par.c, par.p_center, par.q_center, par.damping, par.phase],
            dtype=float,
        )
        worst = max(worst, float(np.max(np.abs(closed - numeric[:, i]))))
    checks.append(
        {
            "test": "ode_params_vs_closed_forms",
            "params": {"draws": n_draws, "seed": seed},
            "discrepancy": worst,
            "tolerance": 1e-8,
            "pass": bool(worst <= 1e-8),
        }
    )

    spec_e = ChannelSpec(1.0, 0.7, 1.0)
    s_pure = entropy_numerical(
        spec_e, GaussianTerm((0.4, -0.2), g=1.3), 0.0, n_q=161, n_eta=401
    )
    checks.append(
        {
            "test": "entropy_numerical_pure_state",
            "params": {"t": 0.0, "g": 1.3},
            "discrepancy": abs(s_pure),
            "tolerance": 1e-4,
            "pass": bool(abs(s_pure) <= 1e-4),
        }
    )

    from bgc.exact_channel import wigner_evolved

    spec_p = ChannelSpec(1.0, 0.5, 1.0)
    term_p = GaussianTerm((0.0, 0.0))
    n_side = 129
    p_nodes = np.linspace(-6.0, 6.0, n_side)
    q_nodes = np.linspace(-8.0, 8.0, n_side)
    w0 = np.real(wigner_evolved(spec_p, StateSum((term_p,), 1.0), p_nodes, q_nodes, 0.0))
    grid0 = PhaseSpaceGrid(-6.0, 6.0, -8.0, 8.0, n_side, n_side, w0)
    t_pde = 0.1
    grid1 = pde_evolve(spec_p, grid0, t_pde)
    ref = np.real(
        wigner_evolved(spec_p, StateSum((term_p,), 1.0), p_nodes, q_nodes, t_pde)
    )
    disc = float(np.max(np.abs(grid1.values - ref)))
    checks.append(
        {
            "test": "pde_evolve_vs_exact_channel",
            "params": {"t": t_pde, "grid": n_side, "gamma": 0.5},
            "discrepancy": disc,
            "tolerance": 1e-4,
            "pass": bool(disc <= 1e-4),
        }
    )

    return {
        "seed": seed,
        "checks": checks,
        "max_discrepancy": max(c["discrepancy"] for c in checks),
        "pass": all(c["pass"] for c in checks),
    }
