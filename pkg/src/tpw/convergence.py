"""Grid-refinement studies: successive differences and log-log slopes.

Each study fixes its random inputs (path data, generator, tangents) from one
generator and re-evaluates them on every grid, so only the discretization
changes between rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tpw.pathspace import Grid, momentum, omega1, solve_base_path
from tpw.pathspace.checks import PROBE_GENERATOR_SCALE, random_tangent, self_convergence
from tpw.pathspace.sampling import random_generator, random_on_shell_path
from tpw.tensorcalc.model import Model

DEFAULT_GRIDS = {"path": (25, 50, 100, 200), "momentum": (50, 100, 200, 400), "omega1": (50, 100, 200, 400)}
# below this every difference is rounding noise and the scheme is exact
EXACT_TOL = 1e-12


@dataclass
class Study:
    quantity: str
    grids: list
    values: list
    # errors[k] belongs to grids[k]: a difference to the next grid or the value itself
    errors: list
    orders: list
    slope: float

    def rows(self) -> list[dict]:
        out = []
        for k, N in enumerate(self.grids):
            row = {"N": N, "value": self.values[k]}
            if k < len(self.errors):
                row["error"] = self.errors[k]
            if 0 < k < len(self.errors):
                row["order"] = self.orders[k - 1]
            out.append(row)
        return out

    def to_json(self) -> dict:
        return {"quantity": self.quantity, "slope": self.slope, "rows": self.rows()}


def fitted_slope(grids, errors) -> float:
    """Negated least-squares slope of log(error) against log(N); inf when all errors vanish."""
    grids = np.asarray(grids[: len(errors)], dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.all(errors <= EXACT_TOL):
        return float("inf")
    if np.any(errors <= 0):
        raise ValueError("cannot fit a slope through zero errors")
    return float(-np.polyfit(np.log(grids), np.log(errors), 1)[0])


def _orders(errors) -> list[float]:
    if all(e <= EXACT_TOL for e in errors):
        return [float("inf")] * (len(errors) - 1)
    return [float(np.log2(a / b)) for a, b in zip(errors, errors[1:])]


def _check_grids(grids) -> list[int]:
    grids = sorted(int(N) for N in grids)
    if len(grids) < 3:
        raise ValueError("a convergence study needs at least three grids")
    if any(M != 2 * N for N, M in zip(grids, grids[1:])):
        raise ValueError("grids must double from one entry to the next")
    return grids


def path_study(model: Model, rng: np.random.Generator, grids=DEFAULT_GRIDS["path"]) -> Study:
    """Self-convergence of the RK4 base path on the coarse nodes."""
    grids = _check_grids(grids)
    _, x0, eta = random_on_shell_path(model, rng, Grid(grids[-1]))
    diffs, orders = self_convergence(model, x0, eta, grids, EXACT_TOL)
    ends = [float(np.max(np.abs(solve_base_path(model, x0, eta, Grid(N)).X[-1]))) for N in grids]
    return Study("max|X_N - X_2N|", grids, ends, diffs, orders, fitted_slope(grids, diffs))


def momentum_study(model: Model, rng: np.random.Generator, grids=DEFAULT_GRIDS["momentum"]) -> Study:
    """|H_B| on the same algebroid path solved on each grid; the exact value is 0."""
    grids = _check_grids(grids)
    _, x0, eta = random_on_shell_path(model, rng, Grid(grids[-1]))
    B = random_generator(rng, model.n, PROBE_GENERATOR_SCALE)
    values = [abs(momentum(model, B, solve_base_path(model, x0, eta, Grid(N)))) for N in grids]
    return Study("|H_B|", grids, values, values, _orders(values), fitted_slope(grids, values))


def omega1_study(model: Model, rng: np.random.Generator, grids=DEFAULT_GRIDS["omega1"]) -> Study:
    """Successive differences of Omega_1(u, v) for fixed smooth tangents along one path."""
    grids = _check_grids(grids)
    _, x0, eta = random_on_shell_path(model, rng, Grid(grids[-1]))
    state = rng.bit_generator.state
    values = []
    for N in grids:
        grid = Grid(N)
        # the same coefficients on every grid
        rng.bit_generator.state = state
        u, v = random_tangent(rng, grid, model.n), random_tangent(rng, grid, model.n)
        values.append(omega1(model, solve_base_path(model, x0, eta, grid), u, v))
    diffs = [abs(a - b) for a, b in zip(values, values[1:])]
    return Study("|Omega1_N - Omega1_2N|", grids, values, diffs, _orders(diffs), fitted_slope(grids, diffs))


STUDIES = {"path": path_study, "momentum": momentum_study, "omega1": omega1_study}


__all__ = ["DEFAULT_GRIDS", "STUDIES", "Study", "fitted_slope", "momentum_study", "omega1_study", "path_study"]
