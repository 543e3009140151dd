"""Gaussian quantum channels acting on characteristic functions.

A channel is the pair (R_t, D_t): chi'(xi) = exp(-xi.D_t xi/(2 hbar))
chi(R_t^T xi). R_t = expm(t (Omega Q + Im(K) Omega)) and
D_t = Int_0^t R_s Re(K) R_s^T ds with K = sum_k conj(l_k) l_k^T built from the
generator's quadratic Hamiltonian matrix Q and linear jump vectors l_k. The
free-motion/momentum-diffusion model has nilpotent drift, where both matrices
are polynomial in t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from bgc.phase_space import OMEGA

__all__ = [
    "GaussianChannelMatrices",
    "LindbladLinearSpec",
    "apply_gaussian_channel",
    "cp_check",
    "model_sigma_channel",
    "semigroup_matrices",
]


@dataclass(frozen=True)
class LindbladLinearSpec:
    """Quadratic Hamiltonian matrix and linear jump vectors.

    q_mat : real symmetric 2x2 (Hamiltonian H = x.Q x / 2).
    l_vecs : sequence of complex 2-vectors, one per jump operator.
    """

    q_mat: np.ndarray
    l_vecs: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        q = np.asarray(self.q_mat, dtype=float)
        if q.shape != (2, 2) or not np.allclose(q, q.T, atol=1e-12):
            raise ValueError("q_mat must be a symmetric 2x2 matrix")
        object.__setattr__(self, "q_mat", q)
        vecs = tuple(np.asarray(l, dtype=complex).reshape(2) for l in self.l_vecs)
        object.__setattr__(self, "l_vecs", vecs)

    def k_mat(self) -> np.ndarray:
        """K = sum_k conj(l_k) l_k^T."""
        k = np.zeros((2, 2), dtype=complex)
        for l in self.l_vecs:
            k += np.outer(np.conj(l), l)
        return k

    def drift(self) -> np.ndarray:
        """Generator M of the flow R_t = expm(t M)."""
        return OMEGA @ self.q_mat + np.imag(self.k_mat()) @ OMEGA


@dataclass(frozen=True)
class GaussianChannelMatrices:
    """Flow matrix R, diffusion matrix D, and the time they belong to."""

    r: np.ndarray
    d: np.ndarray
    t: float


def model_sigma_channel(sigma: float) -> LindbladLinearSpec:
    """Free motion plus momentum diffusion of strength sigma.

    Yields R_t = [[1, 0], [t, 1]] and D_t = sigma^2 [[t, t^2/2],
    [t^2/2, t^3/3]] in (p, q) ordering.
    """
    if sigma < 0.0:
        raise ValueError("sigma must be >= 0")
    return LindbladLinearSpec(np.diag([1.0, 0.0]), (np.array([-sigma, 0.0]),))


def _expm_pade6(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a fixed [6/6] Pade
    approximant."""
    c = (1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0)
    norm = np.linalg.norm(a, 1)
    s = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    a_s = a / (2.0**s)
    n = a.shape[0]
    num = np.zeros_like(a_s)
    den = np.zeros_like(a_s)
    pk = np.eye(n, dtype=a_s.dtype)
    for k, ck in enumerate(c):
        num = num + ck * pk
        den = den + ck * (-1.0) ** k * pk
        pk = pk @ a_s
    out = np.linalg.solve(den, num)
    for _ in range(s):
        out = out @ out
    return out


def _adaptive_simpson_matrix(
    f: Callable[[float], np.ndarray],
    lo: float,
    hi: float,
    abstol: float,
    max_depth: int = 40,
) -> np.ndarray:
    """Adaptive Simpson quadrature of a matrix-valued integrand, elementwise
    absolute tolerance."""

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        x1a = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + x1a)
        xr = 0.5 * (x1a + x2)
        fl = f(xl)
        fr = f(xr)
        left = (x1a - x0) / 6.0 * (f0 + 4.0 * fl + f1)
        right = (x2 - x1a) / 6.0 * (f1 + 4.0 * fr + f2)
        err = np.max(np.abs(left + right - whole))
        if err <= 15.0 * tol or depth >= max_depth:
            return left + right + (left + right - whole) / 15.0
        return recurse(x0, x1a, f0, fl, f1, left, tol / 2.0, depth + 1) + recurse(
            x1a, x2, f1, fr, f2, right, tol / 2.0, depth + 1
        )

    if hi == lo:
        return np.zeros_like(f(lo))
    f0 = f(lo)
    f2 = f(hi)
    mid = 0.5 * (lo + hi)
    f1 = f(mid)
    whole = (hi - lo) / 6.0 * (f0 + 4.0 * f1 + f2)
    return recurse(lo, hi, f0, f1, f2, whole, abstol, 0)


def semigroup_matrices(lin: LindbladLinearSpec, t: float) -> GaussianChannelMatrices:
    """Channel matrices (R_t, D_t) for the one-parameter semigroup generated
    by ``lin``.

    Nilpotent drift (M^2 = 0, the model case) uses the exact polynomials
    R_t = 1 + t M and D_t = Re(K) t + (M Re(K) + Re(K) M^T) t^2/2
    + M Re(K) M^T t^3/3; otherwise R_t comes from the Pade-6 exponential and
    D_t from adaptive Simpson quadrature at absolute tolerance 1e-12.
    """
    if t < 0.0:
        raise ValueError("time must be >= 0")
    m = lin.drift()
    re_k = np.real(lin.k_mat())
    scale = max(1.0, np.linalg.norm(m, 1))
    if np.max(np.abs(m @ m)) <= 1e-14 * scale**2:
        r = np.eye(2) + t * m
        d = (
            re_k * t
            + (m @ re_k + re_k @ m.T) * (t**2 / 2.0)
            + m @ re_k @ m.T * (t**3 / 3.0)
        )
    else:
        r = _expm_pade6(t * m)

        def integrand(s: float) -> np.ndarray:
            rs = _expm_pade6(s * m)
            return rs @ re_k @ rs.T

        d = _adaptive_simpson_matrix(integrand, 0.0, t, 1e-12)
    return GaussianChannelMatrices(r=r, d=d, t=float(t))


def apply_gaussian_channel(
    chi: Callable[[np.ndarray], np.ndarray],
    m: GaussianChannelMatrices,
    xi: np.ndarray,
    hbar: float = 1.0,
) -> np.ndarray:
    """Push a characteristic function through the channel.

    chi'(xi) = exp(-xi.D xi/(2 hbar)) chi(R^T xi). The transposed flow matrix
    acts on the transform variable because R itself is the phase-space point
    flow; this is the orientation that reproduces the exact channel at
    gamma = 0 and the covariance law G' = R G R^T + 2 D.

    ``xi`` has shape (..., 2); ``chi`` must accept the same shape.
    """
    xi = np.asarray(xi, dtype=float)
    quad = np.einsum("...i,ij,...j->...", xi, m.d, xi)
    return np.exp(-quad / (2.0 * hbar)) * chi(xi @ m.r)


def cp_check(m: GaussianChannelMatrices, tol: float = 1e-12) -> tuple[bool, float]:
    """Complete-positivity test: D + i Omega - i R^T Omega R >= 0.

    Returns (ok, smallest eigenvalue). For symplectic R this reduces to
    D >= 0.
    """
    h = m.d + 1j * OMEGA - 1j * (m.r.T @ OMEGA @ m.r)
    eigs = np.linalg.eigvalsh(h)
    low = float(eigs.min())
    return low >= -tol, low
