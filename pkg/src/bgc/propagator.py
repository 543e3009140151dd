"""Evolution of the partial transform w(t, p) at fixed eta, as an explicit
integral operator.

The generator at fixed eta is quadratic, so the evolution operator has a
Gaussian Weyl symbol A(t, xi, p); quantizing it gives a complex Gaussian
kernel K(t, p, p'). Applying K by quadrature evolves arbitrary initial data,
Gaussian or not, and cross-validates the closed-form channel.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from bgc.exact_channel import ChannelSpec

__all__ = [
    "DistributionalKernelError",
    "PropagatorSymbol",
    "apply_kernel",
    "kernel",
    "weyl_symbol",
]

_TAU_SERIES_CUT = 0.05


class DistributionalKernelError(ValueError):
    """The kernel has no density: its Gaussian width parameter vanishes
    (t = 0 or sigma = 0), so it degenerates to a delta distribution."""


def _tau_pieces(omega, t):
    """(tau, t_cap) with tau = 2 tanh(omega t/2)/omega and
    t_cap = (t - tau)/omega^2, series below the cut so omega -> 0 is exact."""
    omega = np.asarray(omega, dtype=float)
    t = np.asarray(t, dtype=float)
    x = omega * t
    small = np.abs(x) < _TAU_SERIES_CUT
    x2 = x * x
    t_series = t**3 * (
        1.0 / 12.0
        - x2 * (1.0 / 120.0 - x2 * (17.0 / 20160.0 - x2 * (31.0 / 362880.0)))
    )
    omega_safe = np.where(small, 1.0, omega)
    with np.errstate(over="ignore"):
        t_direct = (t - 2.0 * np.tanh(omega_safe * t / 2.0) / omega_safe) / omega_safe**2
    t_cap = np.where(small, t_series, t_direct)
    tau = t - omega**2 * t_cap
    return tau, t_cap


def weyl_symbol(spec: ChannelSpec, t, eta, xi, p) -> np.ndarray:
    """Weyl symbol A(t, xi, p) of the fixed-eta evolution operator.

    A = sech(omega t/2) * exp(-sigma^2 eta^2 T / 2 hbar)
          * exp(-(tau/2 hbar)(sigma^2 xi^2 + gamma^2 eta^2 p^2))
          * exp((i/hbar) tau eta p),

    with omega = sigma*gamma*eta, tau = 2 tanh(omega t/2)/omega and
    T = (t - tau)/omega^2. T stays finite as omega -> 0 (series branch), so
    gamma = 0, sigma = 0 and eta = 0 are all exact limits. Broadcasts over
    every argument; A(0, xi, p) = 1.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("time must be >= 0")
    eta = np.asarray(eta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    p = np.asarray(p, dtype=float)
    hbar = spec.hbar
    sig2 = spec.sigma**2
    gam2 = spec.gamma**2
    omega = spec.sigma * spec.gamma * eta
    tau, t_cap = _tau_pieces(omega, t)
    pref = 1.0 / np.cosh(omega * t / 2.0)
    expo = (
        -sig2 * eta**2 * t_cap / (2.0 * hbar)
        - tau * (sig2 * xi**2 + gam2 * eta**2 * p**2) / (2.0 * hbar)
    )
    return pref * np.exp(expo + 1j * tau * eta * p / hbar)


@dataclass(frozen=True)
class PropagatorSymbol:
    """A(t, xi, p) at fixed (t, eta), evaluated lazily via __call__."""

    spec: ChannelSpec
    t: float
    eta: float

    def __call__(self, xi, p) -> np.ndarray:
        return weyl_symbol(self.spec, self.t, self.eta, xi, p)


def kernel(spec: ChannelSpec, t, eta, p, p_prime) -> np.ndarray:
    """Integral kernel K(t, p, p') of the fixed-eta evolution,

        K = (2 pi hbar)^-1 Int exp((i/hbar)(p - p') xi) A(t, xi, m) d xi,
        m = (p + p')/2,

    done analytically: the xi-integral is Gaussian with width tau*sigma^2.

    Raises DistributionalKernelError when tau*sigma^2 = 0 (t = 0 or
    sigma = 0): the kernel degenerates to a delta and has no density.
    """
    t = float(t)
    if t < 0.0:
        raise ValueError("time must be >= 0")
    if t == 0.0 or spec.sigma == 0.0:
        raise DistributionalKernelError(
            "kernel is distributional at t = 0 or sigma = 0; "
            "apply the symbol as a multiplication operator instead"
        )
    p = np.asarray(p, dtype=float)
    p_prime = np.asarray(p_prime, dtype=float)
    hbar = spec.hbar
    sig2 = spec.sigma**2
    gam2 = spec.gamma**2
    omega = spec.sigma * spec.gamma * eta
    tau, t_cap = _tau_pieces(omega, t)
    m = 0.5 * (p + p_prime)
    width = hbar * tau * sig2
    amp = 1.0 / (np.cosh(omega * t / 2.0) * np.sqrt(2.0 * np.pi * width))
    expo = (
        -sig2 * eta**2 * t_cap / (2.0 * hbar)
        - (p - p_prime) ** 2 / (2.0 * width)
        - tau * gam2 * eta**2 * m**2 / (2.0 * hbar)
    )
    return amp * np.exp(expo + 1j * tau * eta * m / hbar)


def apply_kernel(spec: ChannelSpec, t, eta, p_grid, w0) -> np.ndarray:
    """Evolve sampled initial data w0 on a uniform p-grid by trapezoidal
    quadrature of the kernel integral.

    Parameters
    ----------
    p_grid : uniform 1-D grid carrying w0; the output lives on the same grid.
    w0 : complex samples of the initial partial transform at this eta.

    Warns when the relative tail mass of w0 at the grid ends exceeds 1e-10:
    truncation then limits the quadrature accuracy.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    w0 = np.asarray(w0)
    if p_grid.ndim != 1 or p_grid.size < 2 or w0.shape != p_grid.shape:
        raise ValueError("w0 must be sampled on a 1-D grid matching p_grid")
    steps = np.diff(p_grid)
    dp = steps[0]
    if not np.allclose(steps, dp, rtol=1e-9, atol=0.0):
        raise ValueError("p_grid must be uniform")
    mass = np.sum(np.abs(w0)) * dp
    tail = 0.5 * dp * (np.abs(w0[0]) + np.abs(w0[-1]))
    if mass > 0.0 and tail / mass > 1e-10:
        warnings.warn(
            f"tail mass {tail / mass:.2e} of w0 lies at the grid boundary; "
            "enlarge the p-domain",
            stacklevel=2,
        )
    ker = kernel(spec, t, eta, p_grid[:, None], p_grid[None, :])
    weights = np.full(p_grid.size, dp)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return ker @ (weights * w0)
