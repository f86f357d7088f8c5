"""System builders shared across the test modules.

Each builder returns a SystemSpec for one of the boundary families whose
spectra and supersymmetry structure have closed forms, so tests can assert
against independent formulas instead of against the code under test.
"""

import numpy as np

from singular_susy import (
    Geometry,
    SIGMA3,
    SystemSpec,
    robin_matrix,
    su2_from_euler,
    theta_for_scale,
)


def matched_robin_interval(theta, l=1.0, lam=1.0, L0=1.0):
    """U = Dl = diag(e^{i theta}, -1): Robin and Dirichlet components with
    the same length at both ends.  Good N=2 pair, ground at -(lam/L)^2."""
    m = np.diag([np.exp(1j * theta), -1.0]).astype(complex)
    return SystemSpec(Geometry.interval(l), m, m, lam, L0)


def crossed_robin_interval(L, l=1.0, lam=1.0, L0=1.0):
    """Dirichlet/Robin at the origin crossed to Robin/Dirichlet at the wall,
    with negative Robin length L.  Broken N=2; nothing is annihilated."""
    theta = theta_for_scale(L, L0)
    u = np.diag([-1.0, np.exp(-1j * theta)]).astype(complex)
    return SystemSpec(Geometry.interval(l), u, robin_matrix(theta), lam, L0)


def reflected_crossed_interval(L, l=1.0, lam=1.0, L0=1.0):
    """Image of crossed_robin_interval under the upper-component reflection:
    scalar U = e^{-i theta} I with a Dirichlet wall."""
    theta = theta_for_scale(L, L0)
    u = np.exp(-1j * theta) * np.eye(2, dtype=complex)
    return SystemSpec(Geometry.interval(l), u, -np.eye(2, dtype=complex), lam, L0)


def simple_charge_interval(mu, nu=0.0, l=1.0, lam=1.0, L0=1.0):
    """U = V(mu, nu)^dag sigma3 V(mu, nu) against a sigma3 wall: one N=1
    charge for mu strictly inside (0, pi), an N=2 pair at the edges."""
    v = su2_from_euler(mu, nu)
    return SystemSpec(Geometry.interval(l), v.conj().T @ SIGMA3 @ v, SIGMA3, lam, L0)


def robin_line(theta, lam=1.0, L0=1.0):
    """Robin plus Dirichlet point interaction on the line."""
    return SystemSpec(Geometry.line(), robin_matrix(theta), None, lam, L0)
