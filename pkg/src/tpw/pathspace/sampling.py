"""Random configurations for the path-space checks.

Closed-form objects are built from float coefficients converted exactly,
so every draw is reproducible from the generator's seed.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from tpw.expr import compile_value, nodes
from tpw.expr.numeric import DomainError
from tpw.pathspace.grid import Grid
from tpw.pathspace.paths import AlgebroidPath, GaugeGenerator, PathTangent, solve_base_path
from tpw.tensorcalc.model import Model

# bump profiles for generators; the flat one vanishes with two derivatives at both ends
PROFILES = {
    "bump": 4 * nodes.T * (1 - nodes.T),
    "flat": 64 * (nodes.T * (1 - nodes.T)) ** 3,
}


def _c(v: float):
    return nodes.const(Fraction(float(v)))


def random_eta(rng: np.random.Generator, n: int, scale: float = 0.3) -> tuple:
    """Quadratic-in-t closed-form eta."""
    return tuple(_c(rng.normal(0, scale)) + _c(rng.normal(0, scale)) * nodes.T + _c(rng.normal(0, scale)) * nodes.T**2 for _ in range(n))


def random_generator(rng: np.random.Generator, n: int, scale: float = 0.5, profile: str = "flat") -> GaugeGenerator:
    """B_i(t, x) = profile(t) * (c_i + sum_a c_ia x_a)."""
    bump = PROFILES[profile]
    comps = []
    for _ in range(n):
        affine = _c(rng.normal(0, scale))
        for a in range(n):
            affine = affine + _c(rng.normal(0, scale)) * nodes.Var(a + 1)
        comps.append(bump * affine)
    return GaugeGenerator.closed_form(comps)


def sample_eta(exprs, grid: Grid) -> np.ndarray:
    t = grid.nodes
    return np.stack([np.broadcast_to(compile_value(e)((), t), t.shape) for e in exprs], axis=-1)


def _clear_of_poles(model: Model, path: AlgebroidPath, margin: float) -> bool:
    stride = max(1, path.grid.N // 20)
    return min(model.distance_to_poles(x) for x in path.X[::stride]) >= margin


def random_on_shell_path(
    model: Model, rng: np.random.Generator, grid: Grid, scale: float = 0.3, radius: float = 0.5, margin: float = 0.2
) -> tuple[AlgebroidPath, np.ndarray, tuple]:
    """Draw (x0, eta) until the solved path keeps ``margin`` away from every pole."""
    for _ in range(100):
        x0 = rng.uniform(-radius, radius, size=model.n)
        eta = random_eta(rng, model.n, scale)
        try:
            path = solve_base_path(model, x0, eta, grid)
        except DomainError:
            continue
        if _clear_of_poles(model, path, margin):
            return path, x0, eta
    raise RuntimeError(f"could not draw a path on {model.name} away from its poles")


def random_path_from(
    model: Model, rng: np.random.Generator, x0, grid: Grid, scale: float = 0.3, margin: float = 0.2
) -> tuple[AlgebroidPath, tuple]:
    """Draw eta until the path from the fixed start ``x0`` keeps ``margin`` away from every pole."""
    x0 = np.asarray(x0, dtype=float)
    for _ in range(100):
        eta = random_eta(rng, model.n, scale)
        try:
            path = solve_base_path(model, x0, eta, grid)
        except DomainError:
            continue
        if _clear_of_poles(model, path, margin):
            return path, eta
    raise RuntimeError(f"could not draw a path on {model.name} from {x0.tolist()} away from its poles")


def constraint_tangent(model: Model, x0, eta, dx0, deta, grid: Grid, eps: float = 1e-6) -> PathTangent:
    """Tangent to the space of algebroid paths: central difference of the solution map."""
    x0 = np.asarray(x0, dtype=float)
    dx0 = np.asarray(dx0, dtype=float)
    plus = tuple(e + _c(eps) * d for e, d in zip(eta, deta))
    minus = tuple(e - _c(eps) * d for e, d in zip(eta, deta))
    Xp = solve_base_path(model, x0 + eps * dx0, plus, grid).X
    Xm = solve_base_path(model, x0 - eps * dx0, minus, grid).X
    return PathTangent((Xp - Xm) / (2 * eps), sample_eta(deta, grid))


def random_constraint_tangent(model, rng, x0, eta, grid, scale: float = 0.3) -> PathTangent:
    return constraint_tangent(model, x0, eta, rng.normal(0, scale, size=model.n), random_eta(rng, model.n, scale), grid)
