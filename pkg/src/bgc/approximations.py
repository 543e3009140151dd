"""Approximate evolutions: Gaussian wave-packet dynamics driven by a complex
Hamilton function, the closed-form decoherence-onset laws, and the first-order
correction operator in the dephasing strength.

The wave-packet ansatz is

    W(x) = c * exp((i/hbar) d) * exp(-(1/hbar)(x-X).B(x-X)) * exp((i/hbar) x.Y)

with B = G^-1 complex symmetric, X and Y real. The parameter equations follow
from expanding the generator to second order around X; products carrying an
extra hbar relative to their degree are dropped (leading-order closure), which
is exact when the dephasing vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bgc.exact_channel import ChannelSpec
from bgc.gaussian_channel import model_sigma_channel, semigroup_matrices
from bgc.phase_space import OMEGA, CovarianceMatrix, GaussianTerm

__all__ = [
    "PerturbationOperator",
    "SemiclassicalState",
    "decoherence_onset",
    "perturb_correction",
    "sc_gaussian_covariance",
    "sc_nonhermitian_evolve",
    "semiclassical_init",
    "wigner_gamma_zero",
]

_E1 = np.array([1.0, 0.0])
_E2 = np.array([0.0, 1.0])
_F = np.outer(_E2, _E1)


@dataclass(frozen=True)
class SemiclassicalState:
    """Wave-packet parameters: center x_cap, oscillation covector y_cap,
    complex width matrix g_mat (inverse of the exponent matrix), complex
    amplitude c_amp and complex action d_phase. Im(d_phase) accumulates the
    decoherence damping."""

    x_cap: np.ndarray
    y_cap: np.ndarray
    g_mat: np.ndarray
    c_amp: complex
    d_phase: complex

    def __post_init__(self) -> None:
        if np.asarray(self.x_cap).shape != (2,) or np.asarray(self.y_cap).shape != (2,):
            raise ValueError("x_cap and y_cap must be 2-vectors")
        g = np.asarray(self.g_mat)
        if g.shape != (2, 2) or abs(g[0, 1] - g[1, 0]) > 1e-12 * max(1.0, abs(g[0, 1])):
            raise ValueError("g_mat must be a symmetric 2x2 matrix")


def semiclassical_init(term: GaussianTerm) -> SemiclassicalState:
    """Wave-packet parameters of a Gaussian term: X = z0, Y = Omega.dz,
    G = diag(g, 1/g), c = 1, d = 0."""
    y = OMEGA @ np.asarray(term.dz, dtype=float)
    g = np.array([[term.g, 0.0], [0.0, 1.0 / term.g]], dtype=complex)
    return SemiclassicalState(
        x_cap=np.asarray(term.z0, dtype=float),
        y_cap=y,
        g_mat=g,
        c_amp=1.0 + 0.0j,
        d_phase=0.0 + 0.0j,
    )


def sc_gaussian_covariance(spec: ChannelSpec, term: GaussianTerm, t: float) -> CovarianceMatrix:
    """Closed-form width matrix of the Y = 0 wave-packet system at time t.

    G_t = [[g + 2 s2 t,                 g t + s2 t^2                       ],
           [g t + s2 t^2,  1/g + 2 t gamma^2 p0^2 + g t^2 + (2/3) s2 t^3  ]]

    with s2 = sigma^2. Relative to the exact covariance,
    Gamma = (hbar/2) G_t + (hbar^2/2) gamma^2 (g t + s2 t^2) E_qq: the
    wave-packet result misses only the order-hbar^2 dephasing term.
    """
    if term.dz != (0.0, 0.0):
        raise ValueError("the width closed form needs a plain packet (dz = 0)")
    if t < 0.0:
        raise ValueError("time must be >= 0")
    g = term.g
    s2 = spec.sigma**2
    p0 = term.z0[0]
    mat = np.array(
        [
            [g + 2.0 * s2 * t, g * t + s2 * t**2],
            [
                g * t + s2 * t**2,
                1.0 / g + 2.0 * t * spec.gamma**2 * p0**2 + g * t**2 + (2.0 / 3.0) * s2 * t**3,
            ],
        ]
    )
    return CovarianceMatrix(mat, spec.hbar)


def _sc_rhs(spec: ChannelSpec, x, y, g_mat):
    sig2 = spec.sigma**2
    gam2 = spec.gamma**2
    b = np.linalg.inv(g_mat)
    b_r = b.real
    b_i = b.imag
    x1, y2, y1 = x[0], y[1], y[0]
    rhs_vec = (
        -gam2 * y2**2 * x1 * _E1 + 2.0 * sig2 * y1 * b_i[:, 0] + 2.0 * gam2 * x1**2 * y2 * b_i[:, 1]
    )
    x_dot = x1 * _E2 + 0.5 * np.linalg.solve(b_r, rhs_vec)
    y_dot = (
        -y2 * _E1
        - 2.0 * sig2 * y1 * b_r[:, 0]
        - 2.0 * gam2 * x1**2 * y2 * b_r[:, 1]
        - 2.0 * b_i @ x_dot
    )
    fg = _F @ g_mat + g_mat @ _F.T
    ge1 = g_mat[:, 0]
    g_dot = (
        fg * (1.0 - 2.0j * gam2 * x1 * y2)
        + 2.0 * sig2 * np.outer(_E1, _E1)
        + 2.0 * gam2 * x1**2 * np.outer(_E2, _E2)
        - 0.5 * gam2 * y2**2 * np.outer(ge1, ge1)
    )
    k_cplx = x1 * y2 - 0.5j * (sig2 * y1**2 + gam2 * x1**2 * y2**2)
    d_dot = -k_cplx - x @ y_dot
    c_log_dot = -(sig2 * b[0, 0] + gam2 * x1**2 * b[1, 1])
    return x_dot, y_dot, g_dot, d_dot, c_log_dot


def sc_nonhermitian_evolve(
    spec: ChannelSpec, s0: SemiclassicalState, t: float, dt: float = 1e-3
) -> SemiclassicalState:
    """Integrate the wave-packet parameter system to time t by RK4.

    Halts with a RuntimeError diagnostic if the real part of G stops being
    positive definite (the ansatz then no longer describes a decaying
    Gaussian).
    """
    if t < 0.0:
        raise ValueError("time must be >= 0")
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    n_steps = max(1, int(math.ceil(t / dt - 1e-12)))
    h = t / n_steps
    x = np.asarray(s0.x_cap, dtype=float).copy()
    y = np.asarray(s0.y_cap, dtype=float).copy()
    g = np.asarray(s0.g_mat, dtype=complex).copy()
    d = complex(s0.d_phase)
    log_c = np.log(complex(s0.c_amp))
    for step in range(n_steps):
        k1 = _sc_rhs(spec, x, y, g)
        k2 = _sc_rhs(spec, x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], g + 0.5 * h * k1[2])
        k3 = _sc_rhs(spec, x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], g + 0.5 * h * k2[2])
        k4 = _sc_rhs(spec, x + h * k3[0], y + h * k3[1], g + h * k3[2])
        x = x + (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        y = y + (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        g = g + (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        d = d + (h / 6.0) * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        log_c = log_c + (h / 6.0) * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4])
        g = 0.5 * (g + g.T)
        gr = g.real
        if gr[0, 0] + gr[1, 1] <= 0.0 or np.linalg.det(gr) <= 0.0:
            raise RuntimeError(
                f"Re(G) lost positive definiteness at t = {(step + 1) * h:.6g}; "
                "the Gaussian ansatz broke down"
            )
    return SemiclassicalState(x, y, g, np.exp(log_c), d)


def decoherence_onset(spec: ChannelSpec, x0, y0, t) -> np.ndarray:
    """Leading-order damping Im d(t) of a wave packet started at (x0, y0).

    t * ImK with ImK = (sigma^2 y1^2 + gamma^2 x1^2 y2^2)/2 when ImK > 0;
    otherwise the transport-delayed law sigma^2 y2^2 t^3 / 6.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("time must be >= 0")
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    k_im = 0.5 * (spec.sigma**2 * y0[0] ** 2 + spec.gamma**2 * x0[0] ** 2 * y0[1] ** 2)
    if k_im > 0.0:
        return t * k_im
    return spec.sigma**2 * y0[1] ** 2 * t**3 / 6.0


def _poly_add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0.0j) + v
    return out


def _poly_scale(a, s):
    return {k: s * v for k, v in a.items()}


def _poly_mul_mono(a, di, dj):
    return {(i + di, j + dj): v for (i, j), v in a.items()}


def _poly_diff(a, axis):
    out = {}
    for (i, j), v in a.items():
        if axis == 0 and i > 0:
            out[(i - 1, j)] = out.get((i - 1, j), 0.0j) + i * v
        elif axis == 1 and j > 0:
            out[(i, j - 1)] = out.get((i, j - 1), 0.0j) + j * v
    return out


def _poly_eval(a, p, q):
    out = np.zeros(np.broadcast(p, q).shape, dtype=complex)
    for (i, j), v in a.items():
        out += v * p**i * q**j
    return out


class _GaussPoly:
    """poly(p, q) * exp(E(p, q)) with E a fixed complex quadratic; derivative
    operators act exactly within this class."""

    def __init__(self, poly, e_p, e_q):
        self.poly = poly
        self.e_p = e_p  # dE/dp as a degree-1 poly dict
        self.e_q = e_q

    def with_poly(self, poly):
        return _GaussPoly(poly, self.e_p, self.e_q)

    def d_p(self):
        prod = {}
        for (i, j), v in self.poly.items():
            for (a, b), w in self.e_p.items():
                prod[(i + a, j + b)] = prod.get((i + a, j + b), 0.0j) + v * w
        return self.with_poly(_poly_add(_poly_diff(self.poly, 0), prod))

    def d_q(self):
        prod = {}
        for (i, j), v in self.poly.items():
            for (a, b), w in self.e_q.items():
                prod[(i + a, j + b)] = prod.get((i + a, j + b), 0.0j) + v * w
        return self.with_poly(_poly_add(_poly_diff(self.poly, 1), prod))

    def transport(self):
        # p * d/dq, the free-motion generator
        return self.with_poly(_poly_mul_mono(self.d_q().poly, 1, 0))


def _gamma_zero_gaussian(spec: ChannelSpec, term: GaussianTerm, t: float):
    """(amp, m_mat, b_vec) of the dephasing-free evolved characteristic
    function chi(t, zeta) = amp * exp((i/hbar) b.zeta) exp(-zeta.M zeta/2hbar),
    zeta = (xi, eta). M is real positive definite; b is complex when the term
    oscillates."""
    hbar = spec.hbar
    p0, q0 = term.z0
    dp, dq = term.dz
    g = term.g
    m0 = np.array([[0.5 * g, 0.0], [0.0, 0.5 / g]])
    b0 = np.array([p0 - 0.5j * g * dq, q0 + 0.5j * dp / g])
    amp0 = term.weight * np.exp(
        1j * (q0 * dp - p0 * dq) / hbar - dp**2 / (4.0 * hbar * g) - g * dq**2 / (4.0 * hbar)
    )
    mats = semigroup_matrices(model_sigma_channel(spec.sigma), t)
    m_t = mats.r @ m0 @ mats.r.T + mats.d
    b_t = mats.r @ b0
    return amp0, m_t, b_t


def wigner_gamma_zero(spec: ChannelSpec, term: GaussianTerm, t: float, p, q) -> np.ndarray:
    """Wigner function of one term evolved with the dephasing switched off
    (closed Gaussian form), broadcast over grids p, q."""
    amp, m_t, b_t = _gamma_zero_gaussian(spec, term, t)
    hbar = spec.hbar
    s = np.linalg.inv(m_t)
    det_m = np.linalg.det(m_t)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    rp = b_t[0] - p
    rq = b_t[1] - q
    quad = s[0, 0] * rp**2 + 2.0 * s[0, 1] * rp * rq + s[1, 1] * rq**2
    return amp / (2.0 * np.pi * hbar * np.sqrt(det_m)) * np.exp(-quad / (2.0 * hbar))


@dataclass(frozen=True)
class PerturbationOperator:
    """First-order correction operator in the squared dephasing strength.

    A degree-4 differential operator: five terms, one per commutator order
    k = 0..4 of the dephasing generator with the Gaussian-channel generator;
    the ladder terminates because repeated commutators reach constant
    coefficients. Term k carries weight t^(k+1)/(k+1)!.
    """

    spec: ChannelSpec
    t: float

    def weights(self) -> tuple[float, ...]:
        return tuple(
            self.t ** (k + 1) / math.factorial(k + 1) for k in range(5)
        )

    def apply(self, state: _GaussPoly) -> dict:
        """Polynomial of the corrected field: R1 applied to poly*exp(E)."""
        hbar = self.spec.hbar
        sig2 = self.spec.sigma**2
        w = self.weights()
        v2 = state.d_q()
        v22 = v2.d_q()
        terms = []
        # k = 0: (hbar/2) T^2 with T = p d/dq
        terms.append(_poly_scale(state.transport().transport().poly, 0.5 * hbar * w[0]))
        # k = 1: (hbar^2 sig2 / 2)(T V1 + V1 T) V2
        mixed = _poly_add(v2.d_p().transport().poly, v2.transport().d_p().poly)
        terms.append(_poly_scale(mixed, 0.5 * hbar**2 * sig2 * w[1]))
        # k = 2: hbar^2 sig2 (T + hbar sig2 V1^2) V2^2
        k2 = _poly_add(
            v22.transport().poly,
            _poly_scale(v22.d_p().d_p().poly, hbar * sig2),
        )
        terms.append(_poly_scale(k2, hbar**2 * sig2 * w[2]))
        # k = 3: 3 hbar^3 sig2^2 V1 V2^3
        terms.append(_poly_scale(v22.d_q().d_p().poly, 3.0 * hbar**3 * sig2**2 * w[3]))
        # k = 4: 3 hbar^3 sig2^2 V2^4
        terms.append(_poly_scale(v22.d_q().d_q().poly, 3.0 * hbar**3 * sig2**2 * w[4]))
        out = {}
        for term in terms:
            out = _poly_add(out, term)
        return out


def perturb_correction(spec: ChannelSpec, term: GaussianTerm, t: float, p, q) -> np.ndarray:
    """Coefficient of gamma^2 in the evolved Wigner function at (p, q).

    The operator acts analytically on the dephasing-free evolved Gaussian;
    the result is polynomial-times-Gaussian, evaluated on the grid. Real for
    plain packets; for oscillatory terms only the conjugate-paired sum is
    real, and the real part returned here is exactly that pairwise value.
    """
    if t < 0.0:
        raise ValueError("time must be >= 0")
    hbar = spec.hbar
    amp, m_t, b_t = _gamma_zero_gaussian(spec, term, t)
    s = np.linalg.inv(m_t)
    det_m = np.linalg.det(m_t)
    sb = s @ b_t
    # E(p,q) = -(x-b).S(x-b)/2hbar: dE/dp and dE/dq are degree-1 polynomials
    e_p = {(1, 0): -s[0, 0] / hbar, (0, 1): -s[0, 1] / hbar, (0, 0): sb[0] / hbar}
    e_q = {(1, 0): -s[0, 1] / hbar, (0, 1): -s[1, 1] / hbar, (0, 0): sb[1] / hbar}
    base = _GaussPoly({(0, 0): 1.0 + 0.0j}, e_p, e_q)
    poly = PerturbationOperator(spec, t).apply(base)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    rp = b_t[0] - p
    rq = b_t[1] - q
    quad = s[0, 0] * rp**2 + 2.0 * s[0, 1] * rp * rq + s[1, 1] * rq**2
    gauss = amp / (2.0 * np.pi * hbar * np.sqrt(det_m)) * np.exp(-quad / (2.0 * hbar))
    return np.real(_poly_eval(poly, p, q) * gauss)
