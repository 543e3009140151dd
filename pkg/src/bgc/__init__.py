"""Phase-space toolkit for a free particle with momentum diffusion and
momentum-dependent dephasing.

Conventions used throughout: phase-space points are ordered x = (p, q),
the symplectic form is Omega = [[0, -1], [1, 0]], and characteristic
functions use the kernel exp((i/hbar) * (xi*p + eta*q)).
"""

from bgc.phase_space import (
    OMEGA,
    CovarianceMatrix,
    GaussianTerm,
    StateSum,
    cat_state,
    char_eval,
    uncertainty_check,
    wigner_eval,
)
from bgc.exact_channel import ChannelSpec

__version__ = "0.1.0"

__all__ = [
    "OMEGA",
    "CovarianceMatrix",
    "GaussianTerm",
    "StateSum",
    "ChannelSpec",
    "cat_state",
    "char_eval",
    "uncertainty_check",
    "wigner_eval",
    "__version__",
]
