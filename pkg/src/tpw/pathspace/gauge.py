"""Gauge vector fields, their flows and the Hamiltonian / invariance residuals."""

from __future__ import annotations

import numpy as np

from tpw.pathspace.forms import OMEGA1_WEIGHT, momentum, omega, omega1_matrices
from tpw.pathspace.grid import derivative_matrix
from tpw.pathspace.numeric_model import numeric
from tpw.pathspace.paths import AlgebroidPath, GaugeGenerator, PathDivergenceError, PathTangent
from tpw.tensorcalc.model import Model

EPS_FD = 1e-5
TRANSPORT_EPS = 1e-4
FLOW_STEPS = 100


def gauge_vector_field(
    model: Model, B: GaugeGenerator, path: AlgebroidPath, order: int = 2, time_derivative: str = "exact"
) -> PathTangent:
    """xi_B: horizontal -pi#(X) B_X, vertical -d(B_X)/dt - f^{rs}_i(X) eta_r (B_X)_s.

    ``time_derivative`` selects how d(B_X)/dt is formed (see
    ``GaugeGenerator.time_derivative_along``).  Flows use "grid": with it the
    discrete anchor residual is invariant when pi is constant, and in general
    changes only by the O(h^2) commutator of the difference operator.
    """
    if B.is_zero:
        return PathTangent.zero(path)
    nm = numeric(model)
    Bx = B.along(path)
    xi = -nm.sharp(path.X, Bx)
    f = nm.structure(path.X)
    e = -B.time_derivative_along(path, order, time_derivative) - np.einsum("krsi,kr,ks->ki", f, path.eta, Bx)
    return PathTangent(xi, e)


def hamiltonian_vector_field(model: Model, B: GaugeGenerator, path: AlgebroidPath, weight: float = OMEGA1_WEIGHT) -> PathTangent:
    """The field xi with Omega(xi, u) = dH_B(u) exactly for the discrete Omega and H_B.

    It agrees with ``gauge_vector_field`` on algebroid paths up to the
    discretization error; off-shell the two differ by terms proportional to
    the anchor residual.
    """
    if B.is_zero:
        return PathTangent.zero(path)
    nm = numeric(model)
    grid = path.grid
    w = grid.weights
    D = derivative_matrix(grid.N, 2)
    P = nm.pi(path.X)
    Bx = B.along(path)
    J = B.jacobian_along(path)
    R = D @ path.X - nm.sharp(path.X, path.eta)
    # dH/dX_k, component a
    grad = w[:, None] * np.einsum("kia,ki->ka", J, R)
    grad -= w[:, None] * np.einsum("kaji,ki,kj->ka", nm.dpi(path.X), Bx, path.eta)
    grad += D.T @ (w[:, None] * Bx)
    h_hat = np.einsum("kji,ki->kj", P, Bx)
    A = omega1_matrices(model, path, weight)
    e_hat = grad / w[:, None] - np.einsum("kab,ka->kb", A, h_hat)
    return PathTangent(h_hat, e_hat)


def hamiltonian_relation_residual(model: Model, B: GaugeGenerator, path: AlgebroidPath, u: PathTangent, eps_fd: float = EPS_FD) -> float:
    """Omega(xi_B, u) - D_u H_B with a central difference of step eps_fd."""
    if B.is_zero:
        return 0.0
    lhs = omega(model, path, hamiltonian_vector_field(model, B, path), u)
    dH = (momentum(model, B, path.shifted(u, eps_fd)) - momentum(model, B, path.shifted(u, -eps_fd))) / (2 * eps_fd)
    return lhs - dH


def gauge_flow(
    model: Model, B: GaugeGenerator, path: AlgebroidPath, s_total: float, steps: int | None = None
) -> AlgebroidPath:
    """RK4 in flow time s of the field p -> gauge_vector_field(B, p).

    The default step count is 100 (flow step s_total/100).
    """
    steps = FLOW_STEPS if steps is None else steps
    if steps < 1:
        raise ValueError("steps must be positive")
    if B.is_zero or s_total == 0:
        return path
    ds = s_total / steps
    X, eta = np.array(path.X), np.array(path.eta)

    def field(X, eta):
        v = gauge_vector_field(model, B, AlgebroidPath(path.grid, X, eta), time_derivative="grid")
        return v.xi, v.e

    for step in range(steps):
        a1, b1 = field(X, eta)
        a2, b2 = field(X + 0.5 * ds * a1, eta + 0.5 * ds * b1)
        a3, b3 = field(X + 0.5 * ds * a2, eta + 0.5 * ds * b2)
        a4, b4 = field(X + ds * a3, eta + ds * b3)
        X = X + (ds / 6.0) * (a1 + 2 * a2 + 2 * a3 + a4)
        eta = eta + (ds / 6.0) * (b1 + 2 * b2 + 2 * b3 + b4)
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(eta))):
            bad = int(np.argmax(~np.isfinite(X).all(axis=1) | ~np.isfinite(eta).all(axis=1)))
            raise PathDivergenceError(bad, path.grid.nodes[bad])
    return AlgebroidPath(path.grid, X, eta, on_shell=path.on_shell)


def horizontality_residual(model: Model, B: GaugeGenerator, path: AlgebroidPath, u: PathTangent) -> float:
    """|Omega(xi_B, u)|; small when u is tangent to the space of algebroid paths."""
    if B.is_zero:
        return 0.0
    return abs(omega(model, path, gauge_vector_field(model, B, path), u))


def transported_tangent(model, B, path, u, s, steps, eps=TRANSPORT_EPS) -> tuple[AlgebroidPath, PathTangent]:
    """Flow the path by s and push u forward by a divided difference of the flow map."""
    base = gauge_flow(model, B, path, s, steps)
    plus = gauge_flow(model, B, path.shifted(u, eps), s, steps)
    minus = gauge_flow(model, B, path.shifted(u, -eps), s, steps)
    return base, PathTangent((plus.X - minus.X) / (2 * eps), (plus.eta - minus.eta) / (2 * eps))


def invariance_residual(
    model: Model,
    B: GaugeGenerator,
    path: AlgebroidPath,
    u: PathTangent,
    v: PathTangent,
    ds: float = 1e-2,
    steps: int = 2,
    eps: float = TRANSPORT_EPS,
) -> float:
    """|d/ds Omega(u_s, v_s)| at s = 0 along the gauge flow, by central differences."""
    if B.is_zero:
        return 0.0
    values = []
    for s in (ds, -ds):
        p_s, u_s = transported_tangent(model, B, path, u, s, steps, eps)
        _, v_s = transported_tangent(model, B, path, v, s, steps, eps)
        values.append(omega(model, p_s, u_s, v_s))
    return abs(values[0] - values[1]) / (2 * ds)
