"""Von Neumann entropy of Gaussian and near-Gaussian states.

For one mode the entropy of a Gaussian state is a function of the single
symplectic eigenvalue z = sqrt(det G) of its dimensionless width matrix:

    f(z) = ((z+1)/2) ln((z+1)/2) - ((z-1)/2) ln((z-1)/2).

The same f admits the thermal form z*arccoth(z) + ln(sqrt(z^2-1)/2); both
routes are computed and cross-checked. The exponential/logarithm helpers map
between a width matrix and the quadratic form of -ln(rho) in Weyl calculus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bgc.approximations import sc_gaussian_covariance
from bgc.exact_channel import ChannelSpec
from bgc.observables import moments_closed
from bgc.phase_space import CovarianceMatrix, GaussianTerm

__all__ = [
    "GaussianLog",
    "entropy_cov",
    "entropy_f",
    "entropy_gaussian",
    "entropy_perturbative",
    "entropy_semiclassical",
    "exp_quadratic_symbol",
    "log_gaussian",
    "symplectic_eigenvalue",
]

_PURE_TOL = 1e-12


def symplectic_eigenvalue(cov: CovarianceMatrix) -> float:
    """sqrt(det G) of the dimensionless width matrix; 1 marks a pure state."""
    mat = np.asarray(cov.mat, dtype=float)
    if mat.shape != (2, 2) or abs(mat[0, 1] - mat[1, 0]) > 1e-12 * (1.0 + abs(mat[0, 1])):
        raise ValueError("width matrix must be 2x2 symmetric")
    if np.linalg.eigvalsh(mat)[0] <= 0.0:
        raise ValueError("width matrix must be positive definite")
    return float(np.sqrt(np.linalg.det(mat)))


def entropy_f(z) -> np.ndarray:
    """Entropy of one mode as a function of its symplectic eigenvalue.

    f(1) = 0 by the limit x ln x -> 0; rejects z < 1 (no physical state).
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 1.0 - _PURE_TOL):
        raise ValueError("symplectic eigenvalue must be >= 1")
    zc = np.maximum(z, 1.0)
    up = 0.5 * (zc + 1.0)
    dn = 0.5 * (zc - 1.0)
    out = up * np.log(up) - np.where(dn > 0.0, dn * np.log(np.where(dn > 0.0, dn, 1.0)), 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GaussianLog:
    """Quadratic form q_mat of -ln(rho) (up to the constant) and ln Z."""

    q_mat: np.ndarray
    log_z: float


def log_gaussian(cov: CovarianceMatrix) -> GaussianLog:
    """Effective thermal Hamiltonian of a mixed Gaussian state.

    rho = exp(-H_op)/Z with Weyl symbol H(x) = (1/2) x.q_mat x and
    Z = sqrt(z^2 - 1)/2. Diverges on pure states: arccoth(z) has a pole at
    z = 1, so z <= 1 + 1e-12 is rejected.
    """
    z = symplectic_eigenvalue(cov)
    if z <= 1.0 + _PURE_TOL:
        raise ValueError("pure-state singularity: log of a rank-deficient state")
    arccoth = 0.5 * math.log((z + 1.0) / (z - 1.0))
    q_mat = 2.0 * (z / cov.hbar) * arccoth * np.linalg.inv(np.asarray(cov.mat, dtype=float))
    # (z-1)(z+1) instead of z^2-1: z-1 is exact, the square cancels digits
    return GaussianLog(q_mat=q_mat, log_z=math.log(0.5 * math.sqrt((z - 1.0) * (z + 1.0))))


def exp_quadratic_symbol(q_mat, beta: float, p, q, hbar: float = 1.0):
    """Weyl symbol of exp(-beta H_op) on the grid (p, q), and its trace.

    For H(x) = (1/2) x.Q x with Q positive definite and w0 = sqrt(det Q):

        A(beta, x) = sech(w0 hbar beta / 2)
                     * exp(-(2 tanh(w0 hbar beta / 2) / (w0 hbar)) H(x)),
        tr = 1 / (2 sinh(hbar w0 beta / 2)).
    """
    if beta <= 0.0:
        raise ValueError("beta must be > 0")
    q_mat = np.asarray(q_mat, dtype=float)
    if q_mat.shape != (2, 2) or abs(q_mat[0, 1] - q_mat[1, 0]) > 1e-12 * (1.0 + abs(q_mat[0, 1])):
        raise ValueError("q_mat must be 2x2 symmetric")
    det = float(np.linalg.det(q_mat))
    if det <= 0.0 or q_mat[0, 0] <= 0.0:
        raise ValueError("q_mat must be positive definite")
    w0 = math.sqrt(det)
    theta = 0.5 * w0 * hbar * beta
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    h_val = 0.5 * (q_mat[0, 0] * p**2 + 2.0 * q_mat[0, 1] * p * q + q_mat[1, 1] * q**2)
    symbol = (1.0 / math.cosh(theta)) * np.exp(-(2.0 * math.tanh(theta) / (w0 * hbar)) * h_val)
    trace = 1.0 / (2.0 * math.sinh(theta))
    return symbol, trace


def entropy_gaussian(cov: CovarianceMatrix) -> float:
    """Entropy of the Gaussian state with the given width matrix.

    Computed as f(z) and, for mixed states, cross-checked against the
    thermal route z*arccoth(z) + ln Z; disagreement beyond rounding is a
    programming error and raises.
    """
    z = symplectic_eigenvalue(cov)
    direct = float(entropy_f(z))
    if z > 1.0 + 1e-9:
        arccoth = 0.5 * math.log((z + 1.0) / (z - 1.0))
        thermal = z * arccoth + math.log(0.5 * math.sqrt((z - 1.0) * (z + 1.0)))
        if abs(direct - thermal) > 1e-10 * (1.0 + abs(direct)):
            raise AssertionError("entropy route mismatch: f(z) vs thermal form")
    return direct


def entropy_cov(spec: ChannelSpec, term: GaussianTerm, t: float) -> float:
    """Entropy of the Gaussian state sharing the exact evolved covariance."""
    if term.dz != (0.0, 0.0):
        raise ValueError("covariance entropy needs a plain packet (dz = 0)")
    gamma_mat = moments_closed(spec, term, t).cov
    return entropy_gaussian(CovarianceMatrix((2.0 / spec.hbar) * gamma_mat, spec.hbar))


def entropy_semiclassical(spec: ChannelSpec, term: GaussianTerm, t: float) -> float:
    """Entropy of the wave-packet width matrix (drops the order-hbar^2
    covariance term that entropy_cov keeps)."""
    return entropy_gaussian(sc_gaussian_covariance(spec, term, t))


def entropy_perturbative(spec: ChannelSpec, term: GaussianTerm, t: float) -> float:
    """First-order entropy in the squared dephasing strength.

    S = f(z) + (gamma^2 hbar t / 4)(g + 2 s2 t)(g + s2 t)
        * (1/z) ln((z+1)/(z-1)),   s2 = sigma^2, z = sqrt(det G_t).

    The coefficient equals arccoth(z) times the first-order change of z^2;
    equivalently it is the linearization of entropy_cov in gamma^2, which the
    trace formula for dS must reproduce since a trace-preserving perturbation
    moves the entropy only through the second moments at this order.

    Only defined for mixed states: at t = 0 (or sigma = 0) z = 1 and the
    correction carries the arccoth pole, so those inputs raise.
    """
    if term.dz != (0.0, 0.0):
        raise ValueError("perturbative entropy needs a plain packet (dz = 0)")
    z = symplectic_eigenvalue(sc_gaussian_covariance(spec, term, t))
    if z <= 1.0 + _PURE_TOL:
        raise ValueError("pure-state singularity: perturbative entropy needs t > 0")
    g = term.g
    s2 = spec.sigma**2
    corr = (
        0.25
        * spec.gamma**2
        * spec.hbar
        * t
        * (g + 2.0 * s2 * t)
        * (g + s2 * t)
        * math.log((z + 1.0) / (z - 1.0))
        / z
    )
    return float(entropy_f(z)) + corr
