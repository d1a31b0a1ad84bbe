"""Measurements over random draws used by the verification suite.

Every function takes a numpy Generator so a whole study is reproducible
from one seed.  The functions return raw measurements; thresholds are
applied by the suite.
"""

from __future__ import annotations

import numpy as np

from tpw.pathspace.forms import momentum, omega, omega0_density, omega1, omega1_density, transgression
from tpw.pathspace.gauge import (
    gauge_flow,
    gauge_vector_field,
    hamiltonian_relation_residual,
    hamiltonian_vector_field,
    horizontality_residual,
    invariance_residual,
)
from tpw.pathspace.grid import Grid
from tpw.pathspace.paths import AlgebroidPath, PathTangent, identity_path, solve_base_path
from tpw.pathspace.sampling import (
    random_constraint_tangent,
    random_eta,
    random_generator,
    random_on_shell_path,
)
from tpw.pathspace.stokes import PolynomialFamily, stokes_residual
from tpw.tensorcalc.model import Model

# generator amplitude for flows whose constraint residual is tracked; larger
# generators roughen the flowed path and raise its O(h^2) residual
FLOW_GENERATOR_SCALE = 0.15
PROBE_GENERATOR_SCALE = 0.5


def self_convergence(model: Model, x0, eta, grids=(25, 50, 100, 200), exact_tol: float = 1e-12) -> tuple[list, list]:
    """Successive differences max|X_N - X_2N| on the coarse nodes and the observed orders.

    When every difference is below ``exact_tol`` the scheme is exact for this
    problem (e.g. constant pi with polynomial eta) and the orders are reported
    as infinite.
    """
    grids = sorted(grids)
    sols = [solve_base_path(model, x0, eta, Grid(N)).X for N in grids]
    diffs = []
    for coarse, fine, N, M in zip(sols, sols[1:], grids, grids[1:]):
        if M % N:
            raise ValueError("grids must be nested")
        diffs.append(float(np.max(np.abs(fine[:: M // N] - coarse))))
    if max(diffs) <= exact_tol:
        return diffs, [float("inf")] * (len(diffs) - 1)
    orders = [float(np.log2(a / b)) for a, b in zip(diffs, diffs[1:])]
    return diffs, orders


def momentum_constants(model: Model, rng: np.random.Generator, N: int = 200, draws: int = 10) -> list[tuple[float, float]]:
    """(|H_B| N^2 on grid N, same on grid 2N) for random on-shell paths and generators."""
    out = []
    for _ in range(draws):
        path, x0, eta = random_on_shell_path(model, rng, Grid(N))
        B = random_generator(rng, model.n, PROBE_GENERATOR_SCALE)
        fine = solve_base_path(model, x0, eta, Grid(2 * N))
        out.append((abs(momentum(model, B, path)) * N**2, abs(momentum(model, B, fine)) * (2 * N) ** 2))
    return out


def identity_momenta(model: Model, rng: np.random.Generator, N: int = 200, draws: int = 5) -> list[float]:
    """|H_B| on constant paths with eta = 0 (zero integrand, so exactly 0)."""
    out = []
    for _ in range(draws):
        point = model.sample_points(rng, 1)[0]
        B = random_generator(rng, model.n, PROBE_GENERATOR_SCALE)
        out.append(abs(momentum(model, B, identity_path(point, Grid(N)))))
    return out


def constraint_growth(
    model: Model,
    rng: np.random.Generator,
    bound_constant: float,
    N: int = 200,
    flows: int = 5,
    probes: int = 5,
    s_total: float = 1.0,
    scale: float = FLOW_GENERATOR_SCALE,
    margin: float = 0.05,
) -> dict:
    """Flow random on-shell paths and compare probe momenta with the bound C N^-2.

    Flows that bring the path within ``margin`` of a pole are redrawn and
    counted in ``rejected``.
    """
    grid = Grid(N)
    growth, drift, pre, rejected = [], [], [], 0
    while len(growth) < flows:
        if rejected > 10 * flows:
            raise RuntimeError(f"gauge flows on {model.name} keep reaching the poles")
        path, _, _ = random_on_shell_path(model, rng, grid)
        B = random_generator(rng, model.n, scale, profile="bump")
        probe_gens = [random_generator(rng, model.n, PROBE_GENERATOR_SCALE) for _ in range(probes)]
        flowed = gauge_flow(model, B, path, s_total)
        if min(model.distance_to_poles(x) for x in flowed.X) < margin:
            rejected += 1
            continue
        before = max(abs(momentum(model, b, path)) for b in probe_gens)
        after = max(abs(momentum(model, b, flowed)) for b in probe_gens)
        bound = bound_constant / N**2
        pre.append(before / bound)
        growth.append(after / bound)
        drift.append(float(max(np.max(np.abs(flowed.X[0] - path.X[0])), np.max(np.abs(flowed.X[-1] - path.X[-1])))))
    return {"growth": growth, "pre_flow": pre, "endpoint_drift": drift, "rejected": rejected}


def random_off_shell_point(model: Model, rng: np.random.Generator, grid: Grid, size: float = 0.1) -> AlgebroidPath:
    """An on-shell path with a smooth random perturbation of X (fixed ends) and eta."""
    path, _, _ = random_on_shell_path(model, rng, grid)
    t = grid.nodes[:, None]
    dX = size * np.sin(np.pi * t) * rng.normal(size=(1, model.n)) + size * np.sin(2 * np.pi * t) * rng.normal(size=(1, model.n))
    deta = size * (rng.normal(size=(1, model.n)) + t * rng.normal(size=(1, model.n)))
    return AlgebroidPath(grid, path.X + dX, path.eta + deta)


def random_tangent(rng: np.random.Generator, grid: Grid, n: int) -> PathTangent:
    t = grid.nodes[:, None]
    xi = rng.normal(size=(1, n)) + t * rng.normal(size=(1, n)) + np.sin(np.pi * t) * rng.normal(size=(1, n))
    e = rng.normal(size=(1, n)) + np.cos(np.pi * t) * rng.normal(size=(1, n))
    return PathTangent(xi, e)


def hamiltonian_relation_draws(model: Model, rng: np.random.Generator, N: int = 200, draws: int = 50) -> list[float]:
    """Relative residual |Omega(xi_B, u) - dH_B(u)| / max(|Omega(xi_B, u)|, |dH_B(u)|) off-shell."""
    grid = Grid(N)
    out = []
    for _ in range(draws):
        point = random_off_shell_point(model, rng, grid)
        B = random_generator(rng, model.n, PROBE_GENERATOR_SCALE, profile="bump")
        u = random_tangent(rng, grid, model.n)
        residual = hamiltonian_relation_residual(model, B, point, u)
        lhs = omega(model, point, hamiltonian_vector_field(model, B, point), u)
        scale = max(abs(lhs), abs(lhs - residual))
        out.append(abs(residual) / scale if scale > 0 else abs(residual))
    return out


def field_agreement(model: Model, rng: np.random.Generator, N: int = 200, draws: int = 5) -> list[tuple[float, float]]:
    """Interior-node gap between the discrete Hamiltonian field and xi_B on on-shell paths, on N and 2N.

    At the two boundary nodes the fields differ by O(1) (those nodes carry
    half weight in every integral), so only interior nodes are compared.
    """
    out = []
    for _ in range(draws):
        path, x0, eta = random_on_shell_path(model, rng, Grid(N))
        B = random_generator(rng, model.n, PROBE_GENERATOR_SCALE, profile="bump")
        gaps = []
        for p in (path, solve_base_path(model, x0, eta, Grid(2 * N))):
            a, b = hamiltonian_vector_field(model, B, p), gauge_vector_field(model, B, p)
            gaps.append(float(max(np.max(np.abs(a.xi - b.xi)[1:-1]), np.max(np.abs(a.e - b.e)[1:-1]))))
        out.append(tuple(gaps))
    return out


def omega_scale(model: Model, path: AlgebroidPath, u: PathTangent, v: PathTangent) -> float:
    """Trapezoid integral of |Omega density|, the natural size of Omega(u, v)."""
    density = omega0_density(u, v) + omega1_density(model, path, u, v)
    return path.grid.integrate(np.abs(density))


def horizontality_invariance_draws(model: Model, rng: np.random.Generator, N: int = 200, configs: int = 10) -> list[dict]:
    """Horizontality and invariance on constraint tangents with flat-ended generators."""
    grid = Grid(N)
    out = []
    for _ in range(configs):
        path, x0, eta = random_on_shell_path(model, rng, grid)
        B = random_generator(rng, model.n, PROBE_GENERATOR_SCALE, profile="flat")
        u = random_constraint_tangent(model, rng, x0, eta, grid)
        v = random_constraint_tangent(model, rng, x0, eta, grid)
        out.append({
            "horizontality": horizontality_residual(model, B, path, u),
            "invariance": invariance_residual(model, B, path, u, v),
            "scale": omega_scale(model, path, u, v),
        })
    return out


def omega1_at_identity(model: Model, rng: np.random.Generator, N: int = 50, draws: int = 5) -> list[float]:
    """|Omega_1| on constant paths with eta = 0 for random tangents."""
    grid = Grid(N)
    out = []
    for point in model.sample_points(rng, draws):
        path = identity_path(point, grid)
        out.append(abs(omega1(model, path, random_tangent(rng, grid, model.n), random_tangent(rng, grid, model.n))))
    return out


def measure_c_phi(model: Model, paths: int = 10, grid: int = 200, seed: int = 0) -> list[float]:
    """Ratios Omega_1(u, v) / Phi(xi_u, xi_v) on on-shell paths with constraint tangents.

    Phi uses fourth-order differences for X' so the ratio is resolved well
    below the spread tolerance.
    """
    rng = np.random.default_rng(seed)
    g = Grid(grid)
    ratios = []
    while len(ratios) < paths:
        path, x0, eta = random_on_shell_path(model, rng, g)
        u = random_constraint_tangent(model, rng, x0, eta, g)
        v = random_constraint_tangent(model, rng, x0, eta, g)
        phi = transgression(model, path.X, u.xi, v.xi, g, Xdot=g.derivative(path.X, 4))
        if abs(phi) < 1e-6:
            continue
        ratios.append(omega1(model, path, u, v) / phi)
    return ratios


def stokes_draws(model: Model, rng: np.random.Generator, families: int = 3, N: int = 400, frozen_ends: bool = False) -> list[float]:
    return [stokes_residual(model, PolynomialFamily.random(rng, model.n, frozen_ends=frozen_ends), Grid(N)) for _ in range(families)]


__all__ = [
    "FLOW_GENERATOR_SCALE",
    "PROBE_GENERATOR_SCALE",
    "constraint_growth",
    "field_agreement",
    "hamiltonian_relation_draws",
    "horizontality_invariance_draws",
    "identity_momenta",
    "measure_c_phi",
    "momentum_constants",
    "omega1_at_identity",
    "omega_scale",
    "random_eta",
    "random_off_shell_point",
    "random_tangent",
    "self_convergence",
    "stokes_draws",
]
