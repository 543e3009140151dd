"""Gaussian phase-space states: Wigner functions, characteristic functions,
and superpositions of displaced Gaussian packets.

A state is a weighted sum of Gaussian terms. Each term may carry an internal
oscillation (nonzero ``dz``), which is how coherence between two packets is
represented; physical states keep such terms in conjugate pairs so the Wigner
function is real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "OMEGA",
    "CovarianceMatrix",
    "GaussianTerm",
    "StateSum",
    "cat_state",
    "char_eval",
    "char_eval_term",
    "term_covariance",
    "uncertainty_check",
    "wigner_eval",
    "wigner_eval_term",
]

# Symplectic form in (p, q) ordering: x . OMEGA y = q_x p_y - p_x q_y.
OMEGA = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class CovarianceMatrix:
    """Dimensionless second-moment matrix G, with Cov(x) = (hbar/2) G."""

    mat: np.ndarray
    hbar: float = 1.0

    def __post_init__(self) -> None:
        m = np.asarray(self.mat, dtype=float)
        if m.shape != (2, 2):
            raise ValueError("covariance matrix must be 2x2")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("covariance matrix must be symmetric")
        if self.hbar <= 0.0:
            raise ValueError("hbar must be > 0")
        object.__setattr__(self, "mat", m)

    def cov(self) -> np.ndarray:
        """Dimensionful covariance (hbar/2) G."""
        return 0.5 * self.hbar * self.mat


@dataclass(frozen=True)
class GaussianTerm:
    """One Gaussian packet, optionally oscillating.

    Parameters
    ----------
    z0 : (p0, q0)
        Packet center.
    dz : (dp, dq)
        Oscillation offset. ``(0, 0)`` gives a plain (positive) packet; a
        nonzero offset multiplies the Gaussian by
        ``exp((i/hbar)(q*dp - p*dq))``.
    g : float
        Squeezing parameter, > 0. Var(p) = hbar*g/2 and Var(q) = hbar/(2g)
        for a plain packet.
    weight : complex
        Coefficient of this term in a state sum.
    """

    z0: tuple[float, float]
    dz: tuple[float, float] = (0.0, 0.0)
    g: float = 1.0
    weight: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if not self.g > 0.0:
            raise ValueError("squeezing parameter g must be > 0")
        object.__setattr__(self, "z0", (float(self.z0[0]), float(self.z0[1])))
        object.__setattr__(self, "dz", (float(self.dz[0]), float(self.dz[1])))
        object.__setattr__(self, "weight", complex(self.weight))


@dataclass(frozen=True)
class StateSum:
    """Weighted sum of Gaussian terms sharing one value of hbar."""

    terms: tuple[GaussianTerm, ...]
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.hbar <= 0.0:
            raise ValueError("hbar must be > 0")
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("state needs at least one term")

    def trace(self) -> complex:
        """Total trace, i.e. the characteristic function at the origin."""
        return complex(char_eval(self, 0.0, 0.0))


def wigner_eval_term(term: GaussianTerm, p, q, hbar: float = 1.0) -> np.ndarray:
    """Wigner function of a single term on broadcastable (p, q) arrays.

    For a plain packet the peak value is weight/(pi*hbar); oscillating terms
    return complex values.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p0, q0 = term.z0
    dp, dq = term.dz
    gauss = np.exp(-(term.g * (q - q0) ** 2 + (p - p0) ** 2 / term.g) / hbar)
    phase = np.exp(1j * (q * dp - p * dq) / hbar)
    return term.weight / (np.pi * hbar) * phase * gauss


def char_eval_term(term: GaussianTerm, xi, eta, hbar: float = 1.0) -> np.ndarray:
    """Characteristic function of a single term.

    chi(xi, eta) = Int W(p, q) exp((i/hbar)(xi*p + eta*q)) dp dq, evaluated
    in closed form.
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    p0, q0 = term.z0
    dp, dq = term.dz
    g = term.g
    phase = np.exp(1j * (q0 * (eta + dp) + p0 * (xi - dq)) / hbar)
    gauss = np.exp(-((eta + dp) ** 2) / (4.0 * hbar * g) - g * (xi - dq) ** 2 / (4.0 * hbar))
    return term.weight * phase * gauss


def wigner_eval(state: StateSum, p, q) -> np.ndarray:
    """Wigner function of a state sum on broadcastable (p, q) arrays."""
    out = wigner_eval_term(state.terms[0], p, q, state.hbar)
    for term in state.terms[1:]:
        out = out + wigner_eval_term(term, p, q, state.hbar)
    return out


def char_eval(state: StateSum, xi, eta) -> np.ndarray:
    """Characteristic function of a state sum; chi(0, 0) is the trace."""
    out = char_eval_term(state.terms[0], xi, eta, state.hbar)
    for term in state.terms[1:]:
        out = out + char_eval_term(term, xi, eta, state.hbar)
    return out


def cat_state(
    z1: tuple[float, float],
    z2: tuple[float, float],
    g: float = 1.0,
    hbar: float = 1.0,
) -> StateSum:
    """Normalized superposition of two coherent packets at z1 and z2.

    Returns the four-term sum: one plain packet at each center plus a
    conjugate pair of oscillating terms at the midpoint. The normalization
    enforces unit trace:

        N = 2 + 2 cos((q1 p2 - p1 q2)/(2 hbar)) exp(-(dp^2/g + g dq^2)/(4 hbar))

    with (dp, dq) = z2 - z1. Coincident centers reduce to a single packet
    (N = 4).
    """
    p1, q1 = float(z1[0]), float(z1[1])
    p2, q2 = float(z2[0]), float(z2[1])
    dp, dq = p2 - p1, q2 - q1
    zbar = (0.5 * (p1 + p2), 0.5 * (q1 + q2))
    cross = q1 * p2 - p1 * q2
    overlap = np.exp(-(dp**2 / g + g * dq**2) / (4.0 * hbar))
    norm = 2.0 + 2.0 * np.cos(cross / (2.0 * hbar)) * overlap
    w_osc = np.exp(-0.5j * cross / hbar) / norm
    terms = (
        GaussianTerm((p1, q1), (0.0, 0.0), g, 1.0 / norm),
        GaussianTerm((p2, q2), (0.0, 0.0), g, 1.0 / norm),
        GaussianTerm(zbar, (dp, dq), g, w_osc),
        GaussianTerm(zbar, (-dp, -dq), g, np.conj(w_osc)),
    )
    return StateSum(terms, hbar)


def term_covariance(term: GaussianTerm, hbar: float = 1.0) -> CovarianceMatrix:
    """Dimensionless covariance G = diag(g, 1/g) of a plain packet."""
    return CovarianceMatrix(np.diag([term.g, 1.0 / term.g]), hbar)


def uncertainty_check(cov: CovarianceMatrix, tol: float = 1e-12) -> bool:
    """Whether G + i*Omega >= 0, the admissibility condition for G.

    The condition is invariant under symplectic congruence G -> S^T G S.
    """
    h = cov.mat + 1j * OMEGA
    eigs = np.linalg.eigvalsh(h)
    return bool(eigs.min() >= -tol)
