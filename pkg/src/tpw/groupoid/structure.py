"""Structure of Omega along the identity section and under the groupoid operations.

At a constant path with eta = 0 the twisted term of Omega vanishes, so
everything here reduces to the canonical pairing of fiber lifts

    R(xi)(t) = (pi#(m) xi (t - 1), xi)

(tangent to the fiber of beta = X(1)) with horizontal constants (v, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tpw.groupoid.elements import GroupoidElementRep, concatenate, identity_element, invert_tangent, join_tangents
from tpw.pathspace.forms import omega, omega0
from tpw.pathspace.grid import Grid
from tpw.pathspace.numeric_model import numeric
from tpw.pathspace.paths import PathTangent
from tpw.tensorcalc.model import Model


@dataclass(frozen=True)
class BasePairing:
    """gamma[i, j] = Omega(R(dx^i), R(dx^j)), lambda_[i, j] = Omega_0(R(dx^i), (e_j, 0))."""

    gamma: np.ndarray
    lambda_: np.ndarray


def unit_fiber_lift(model: Model, point, xi, grid: Grid) -> PathTangent:
    """R(xi): horizontal part pi#(m) xi (t - 1), vertical part the constant xi."""
    xi = np.asarray(xi, dtype=float)
    anchor = numeric(model).sharp(np.asarray(point, dtype=float), xi)
    t = grid.nodes[:, None]
    return PathTangent(anchor[None, :] * (t - 1.0), np.tile(xi, (grid.N + 1, 1)))


def horizontal_constant(v, grid: Grid) -> PathTangent:
    v = np.asarray(v, dtype=float)
    return PathTangent(np.tile(v, (grid.N + 1, 1)), np.zeros((grid.N + 1, v.size)))


def base_pairing(model: Model, point, grid: Grid) -> BasePairing:
    n = model.n
    g = identity_element(point, grid)
    basis = np.eye(n)
    lifts = [unit_fiber_lift(model, point, basis[i], grid) for i in range(n)]
    consts = [horizontal_constant(basis[j], grid) for j in range(n)]
    gamma = np.array([[omega(model, g.path, lifts[i], lifts[j]) for j in range(n)] for i in range(n)])
    lam = np.array([[omega0(g.path, lifts[i], consts[j]) for j in range(n)] for i in range(n)])
    return BasePairing(gamma, lam)


def omega_gram_at_identity(model: Model, point, grid: Grid) -> np.ndarray:
    """Gram matrix of Omega on {R(e_i)} followed by {(e_j, 0)}."""
    n = model.n
    g = identity_element(point, grid)
    basis = np.eye(n)
    vectors = [unit_fiber_lift(model, point, basis[i], grid) for i in range(n)]
    vectors += [horizontal_constant(basis[j], grid) for j in range(n)]
    return np.array([[omega(model, g.path, a, b) for b in vectors] for a in vectors])


def nondegeneracy_at_identity(model: Model, point, grid: Grid) -> float:
    """Smallest singular value of the 2n x 2n Gram matrix of Omega at the identity."""
    return float(np.linalg.svd(omega_gram_at_identity(model, point, grid), compute_uv=False).min())


def multiplicativity_residual(
    model: Model,
    g: GroupoidElementRep,
    h: GroupoidElementRep,
    u: tuple[PathTangent, PathTangent],
    v: tuple[PathTangent, PathTangent],
    split: float = 0.5,
    intervals: int | None = None,
) -> float:
    """|Omega_gh(u_g * u_h, v_g * v_h) - Omega_g(u_g, v_g) - Omega_h(u_h, v_h)|."""
    gh = concatenate(g, h, split=split, intervals=intervals)
    u_gh = join_tangents(g, h, u[0], u[1], split=split, intervals=intervals)
    v_gh = join_tangents(g, h, v[0], v[1], split=split, intervals=intervals)
    total = omega(model, gh.path, u_gh, v_gh)
    return abs(total - omega(model, g.path, u[0], v[0]) - omega(model, h.path, u[1], v[1]))


def identity_section_checks(model: Model, point, grid: Grid, rng: np.random.Generator | None = None) -> dict[str, float]:
    """Residuals of the identities satisfied by a multiplicative Omega at the identity section.

    unit_pullback     Omega on two horizontal constants at the identity (= 0)
    inversion         Omega(i_* u, i_* v) + Omega(u, v) for mixed tangents at the identity
    orthogonality     Omega(R(a), i_* R(b)) for lifts of random covectors (= 0)
    inverted_lifts    Omega(i_* R(a), i_* R(b)) + Omega(R(a), R(b)), i.e. left lifts pair to -pi
    """
    rng = np.random.default_rng(0) if rng is None else rng
    n = model.n
    e = identity_element(point, grid)
    P = numeric(model).pi(np.asarray(point, dtype=float))
    out = {"unit_pullback": 0.0, "inversion": 0.0, "orthogonality": 0.0, "inverted_lifts": 0.0}
    for _ in range(3):
        a, b, c, d = rng.normal(size=(4, n))
        ha, hb = horizontal_constant(c, grid), horizontal_constant(d, grid)
        Ra, Rb = unit_fiber_lift(model, point, a, grid), unit_fiber_lift(model, point, b, grid)
        u, v = Ra + ha, Rb + hb
        out["unit_pullback"] = max(out["unit_pullback"], abs(omega(model, e.path, ha, hb)))
        out["inversion"] = max(
            out["inversion"], abs(omega(model, e.path, invert_tangent(u), invert_tangent(v)) + omega(model, e.path, u, v))
        )
        out["orthogonality"] = max(out["orthogonality"], abs(omega(model, e.path, Ra, invert_tangent(Rb))))
        left = omega(model, e.path, invert_tangent(Ra), invert_tangent(Rb))
        out["inverted_lifts"] = max(
            out["inverted_lifts"], abs(left + omega(model, e.path, Ra, Rb)), abs(left + a @ P @ b)
        )
    return out


# short name for the same report
prop22_checks = identity_section_checks
