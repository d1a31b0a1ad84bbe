"""Momentum maps and 2-forms on the discretized path space.

All integrals are composite trapezoid sums on the path's grid.  The twisted
term of the 2-form is

    Omega_1(u, v) = OMEGA1_WEIGHT * int phi(X)(pi#(X) eta, xi_u, xi_v) dt

with weight -1: this is the normalization for which the gauge fields are
Hamiltonian, i_{xi_B} Omega = dH_B, with the structure functions that
include the phi-correction.
"""

from __future__ import annotations

import numpy as np

from tpw.pathspace.numeric_model import numeric
from tpw.pathspace.paths import AlgebroidPath, GaugeGenerator, PathTangent
from tpw.tensorcalc.model import Model

OMEGA1_WEIGHT = -1.0


def _same_grid(path: AlgebroidPath, *tangents: PathTangent):
    for u in tangents:
        if u.xi.shape != path.X.shape:
            raise ValueError("tangent and path live on different grids")


def momentum(model: Model, B: GaugeGenerator, path: AlgebroidPath, order: int = 2) -> float:
    """H_B(X, eta) = int <B_X, dX/dt - pi#(X) eta> dt."""
    if B.is_zero:
        return 0.0
    Xdot = path.grid.derivative(path.X, order)
    integrand = np.einsum("ki,ki->k", B.along(path), Xdot - numeric(model).sharp(path.X, path.eta))
    return path.grid.integrate(integrand)


def omega0_density(u: PathTangent, v: PathTangent) -> np.ndarray:
    return np.einsum("ki,ki->k", u.e, v.xi) - np.einsum("ki,ki->k", v.e, u.xi)


def omega0(path: AlgebroidPath, u: PathTangent, v: PathTangent) -> float:
    """Canonical form int <e_u, xi_v> - <e_v, xi_u> dt."""
    _same_grid(path, u, v)
    return path.grid.integrate(omega0_density(u, v))


def omega1_density(model: Model, path: AlgebroidPath, u: PathTangent, v: PathTangent, weight: float = OMEGA1_WEIGHT):
    nm = numeric(model)
    if not model.has_phi or not np.any(path.eta):
        return np.zeros(path.grid.N + 1)
    anchor = nm.sharp(path.X, path.eta)
    return weight * np.einsum("kabc,ka,kb,kc->k", nm.phi(path.X), anchor, u.xi, v.xi)


def omega1(model: Model, path: AlgebroidPath, u: PathTangent, v: PathTangent, weight: float = OMEGA1_WEIGHT) -> float:
    """Twisted term weight * int phi(X)(pi#(X) eta, xi_u, xi_v) dt; exactly 0 when eta = 0."""
    _same_grid(path, u, v)
    return path.grid.integrate(omega1_density(model, path, u, v, weight))


def omega(model: Model, path: AlgebroidPath, u: PathTangent, v: PathTangent, weight: float = OMEGA1_WEIGHT) -> float:
    """Omega_0 + Omega_1, antisymmetric in (u, v) node by node."""
    _same_grid(path, u, v)
    return path.grid.integrate(omega0_density(u, v) + omega1_density(model, path, u, v, weight))


def omega1_matrices(model: Model, path: AlgebroidPath, weight: float = OMEGA1_WEIGHT) -> np.ndarray:
    """A[k, a, b] with Omega_1 density xi_u^a A[k, a, b] xi_v^b."""
    nm = numeric(model)
    n = model.n
    if not model.has_phi:
        return np.zeros((path.grid.N + 1, n, n))
    anchor = nm.sharp(path.X, path.eta)
    return weight * np.einsum("kcab,kc->kab", nm.phi(path.X), anchor)


def transgression(model: Model, X: np.ndarray, w1: np.ndarray, w2: np.ndarray, grid, Xdot: np.ndarray | None = None) -> float:
    """Fiber integral int phi(X(t))(X'(t), w1(t), w2(t)) dt.

    X' is differenced on the grid unless given explicitly.
    """
    if not model.has_phi:
        return 0.0
    Xdot = grid.derivative(X) if Xdot is None else Xdot
    integrand = np.einsum("kabc,ka,kb,kc->k", numeric(model).phi(X), Xdot, w1, w2)
    return grid.integrate(integrand)
