"""The verification suite: one named check per acceptance criterion.

Each check draws from its own generator seeded by (seed, check index), so
checks are reproducible individually and as a suite.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from tpw.checks import CheckResult, Part, worst
from tpw.groupoid import (
    GroupoidElementRep,
    base_pairing,
    concatenate,
    identity_element,
    invert,
    multiplicativity_residual,
    nondegeneracy_at_identity,
    identity_section_checks,
)
from tpw.pathspace import Grid
from tpw.pathspace import checks as pc
from tpw.pathspace.sampling import constraint_tangent, random_constraint_tangent, random_eta, random_on_shell_path, random_path_from
from tpw.tensorcalc import checks as tc
from tpw.tensorcalc.forms import exterior_derivative
from tpw.tensorcalc.model import Model

# thresholds
NUMERIC_ZERO = 1e-9  # symbolic identities on models outside the exact fragment
CONVERGENCE_ORDER = 3.5
CONVERGENCE_GRIDS = (25, 50, 100, 200)
CONSTANT_STABILITY = 0.1
HAM_REL_TOL = 1e-6
HAM_REL_TOL_TWISTED = 1e-5
# observed order of an O(h^2) gap, same threshold as the convergence studies
GAP_ORDER = 1.8
ENDPOINT_TOL = 1e-12
GROWTH_FACTOR = 10.0
PAIRING_TOL = 1e-10
HORIZONTALITY_TOL = 1e-5
INVARIANCE_REL_TOL = 1e-3
C_PHI_SPREAD = 1e-4
STOKES_TOL = 1e-4
STOKES_GRID = 400
ADDITIVITY_GRIDS = (50, 100, 200, 400)
# an order-2 error observed on finite grids is 2 - O(h^2); accept within this slack
ORDER_SLACK = 0.05
IDENTITY_SECTION_TOL = 1e-6
IDENTITY_SECTION_GRID = 400
NONDEGENERACY_MIN = 0.5


@dataclass
class SuiteContext:
    model: Model
    grid: int = 200
    seed: int = 0
    numeric: bool | None = None
    # evaluation points for sampled symbolic residuals (None: model defaults)
    points: np.ndarray | None = None
    cache: dict = field(default_factory=dict)

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, index])

    @property
    def symbolic_relation(self) -> tuple[str, float]:
        exact = self.model.exact if self.numeric is None else not self.numeric
        return ("==0", 0.0) if exact else ("<=", NUMERIC_ZERO)

    def momentum_constant(self) -> tuple[float, list]:
        if "momentum" not in self.cache:
            pairs = pc.momentum_constants(self.model, self.rng(6), self.grid)
            self.cache["momentum"] = (max(a for a, _ in pairs), pairs)
        return self.cache["momentum"]


def _zero_part(ctx: SuiteContext, label: str, value: float) -> Part:
    relation, threshold = ctx.symbolic_relation
    return Part(label, value, threshold, relation)


def check_closedness(ctx: SuiteContext) -> CheckResult:
    """d(phi) = 0; models are normally rejected at load time when it fails."""
    m = ctx.model
    size = 0.0
    if m.n >= 4 and m.has_phi:
        size = tc.residual_size(m, exterior_derivative(m.phi), ctx.points, ctx.numeric)
    return CheckResult("closedness", [_zero_part(ctx, "d_phi", size)])


def check_twisted_jacobi(ctx: SuiteContext) -> CheckResult:
    return CheckResult("twisted_jacobi", [_zero_part(ctx, "residual", tc.jacobi_size(ctx.model, ctx.points, ctx.numeric))])


def check_bracket_consistency(ctx: SuiteContext) -> CheckResult:
    return CheckResult(
        "bracket_consistency", [_zero_part(ctx, "residual", tc.bracket_consistency_size(ctx.model, ctx.points, ctx.numeric))]
    )


def check_bracket_identities(ctx: SuiteContext) -> CheckResult:
    eq3, eq4 = tc.bracket_identity_sizes(ctx.model, ctx.rng(3), points=ctx.points, numeric=ctx.numeric)
    return CheckResult(
        "bracket_identities",
        [_zero_part(ctx, "d_bracket", worst(eq3)), _zero_part(ctx, "hamiltonian_bracket", worst(eq4))],
        {"pairs": len(eq3), "hamiltonian_bracket_nonzero": sum(v != 0 for v in eq4)},
    )


def check_delta_suite(ctx: SuiteContext) -> CheckResult:
    sizes = tc.delta_suite_sizes(ctx.model, ctx.rng(4), points=ctx.points, numeric=ctx.numeric)
    return CheckResult(
        "delta_suite",
        [_zero_part(ctx, key, worst(v)) for key, v in sizes.items()],
        {"s_delta": str(ctx.model.calibration.s_delta)},
    )


def check_path_convergence(ctx: SuiteContext) -> CheckResult:
    rng = ctx.rng(5)
    _, x0, eta = random_on_shell_path(ctx.model, rng, Grid(max(CONVERGENCE_GRIDS)))
    diffs, orders = pc.self_convergence(ctx.model, x0, eta, CONVERGENCE_GRIDS)
    return CheckResult(
        "path_convergence",
        [Part("order", min(orders), CONVERGENCE_ORDER, ">=")],
        {"grids": list(CONVERGENCE_GRIDS), "differences": diffs, "orders": orders},
    )


def check_constraint_momentum(ctx: SuiteContext) -> CheckResult:
    C, pairs = ctx.momentum_constant()
    stability = max(abs(a / b - 1.0) if b > 0 else (0.0 if a == 0 else np.inf) for a, b in pairs)
    identity = pc.identity_momenta(ctx.model, ctx.rng(60), ctx.grid)
    return CheckResult(
        "constraint_momentum",
        [Part("constant_drift_N_to_2N", stability, CONSTANT_STABILITY), Part("identity_paths", worst(identity), 0.0, "==0")],
        {"C": C, "grid": ctx.grid, "constants": [a for a, _ in pairs]},
    )


def check_hamiltonian_relation(ctx: SuiteContext) -> CheckResult:
    tol = HAM_REL_TOL_TWISTED if ctx.model.has_phi else HAM_REL_TOL
    rel = pc.hamiltonian_relation_draws(ctx.model, ctx.rng(7), ctx.grid)
    gaps = pc.field_agreement(ctx.model, ctx.rng(70), ctx.grid)
    order = min(np.log2(a / b) if b > 0 else np.inf for a, b in gaps)
    return CheckResult(
        "hamiltonian_relation",
        [Part("relative_residual", worst(rel), tol), Part("field_gap_order", order, GAP_ORDER, ">=")],
        {"draws": len(rel), "field_gaps": gaps},
    )


def check_gauge_flow(ctx: SuiteContext) -> CheckResult:
    C, _ = ctx.momentum_constant()
    out = pc.constraint_growth(ctx.model, ctx.rng(8), C, ctx.grid)
    return CheckResult(
        "gauge_flow",
        [Part("endpoint_drift", worst(out["endpoint_drift"]), ENDPOINT_TOL), Part("growth", worst(out["growth"]), GROWTH_FACTOR)],
        {"bound_C": C, "pre_flow": out["pre_flow"], "growth": out["growth"], "rejected": out["rejected"],
         "generator_scale": pc.FLOW_GENERATOR_SCALE},
    )


def check_base_pairing(ctx: SuiteContext) -> CheckResult:
    m = ctx.model
    grid = Grid(ctx.grid)
    g_err, l_err = [], []
    for point in m.sample_points(ctx.rng(9), 5):
        bp = base_pairing(m, point, grid)
        g_err.append(float(np.max(np.abs(bp.gamma - m.pi_matrix_at(point)))))
        l_err.append(float(np.max(np.abs(bp.lambda_ - np.eye(m.n)))))
    return CheckResult("base_pairing", [Part("gamma_minus_pi", worst(g_err), PAIRING_TOL), Part("lambda_minus_id", worst(l_err), PAIRING_TOL)])


def check_omega1_identity(ctx: SuiteContext) -> CheckResult:
    return CheckResult("omega1_identity", [Part("omega1", worst(pc.omega1_at_identity(ctx.model, ctx.rng(10), ctx.grid)), 0.0, "==0")])


def check_horizontality_invariance(ctx: SuiteContext) -> CheckResult:
    draws = pc.horizontality_invariance_draws(ctx.model, ctx.rng(11), ctx.grid)
    return CheckResult(
        "horizontality_invariance",
        [
            Part("horizontality", worst(d["horizontality"] for d in draws), HORIZONTALITY_TOL),
            Part("invariance_over_scale", worst(d["invariance"] / d["scale"] for d in draws), INVARIANCE_REL_TOL),
        ],
        {"configurations": len(draws)},
    )


def check_transgression_stokes(ctx: SuiteContext) -> CheckResult:
    m = ctx.model
    parts, details = [], {}
    if m.has_phi:
        ratios = pc.measure_c_phi(m, grid=ctx.grid, seed=int(ctx.rng(12).integers(2**31)))
        mean = float(np.mean(ratios))
        parts.append(Part("c_phi_spread", float(np.ptp(ratios)), C_PHI_SPREAD))
        parts.append(Part("c_phi_vs_calibrated", abs(mean - float(m.calibration.c_phi)), C_PHI_SPREAD))
        details["c_phi_mean"] = mean
    else:
        details["c_phi"] = "phi = 0: ratio undefined"
    stokes = pc.stokes_draws(m, ctx.rng(120), families=3, N=STOKES_GRID)
    parts.append(Part("stokes", worst(stokes), STOKES_TOL))
    return CheckResult("transgression_stokes", parts, details)


def _composable_pair(m: Model, rng: np.random.Generator, N: int):
    grid = Grid(N)
    p, x0, eta = random_on_shell_path(m, rng, grid)
    g = GroupoidElementRep(p)
    hp, eta2 = random_path_from(m, rng, g.source, grid)
    h = GroupoidElementRep(hp)
    ug = random_constraint_tangent(m, rng, x0, eta, grid)
    vg = random_constraint_tangent(m, rng, x0, eta, grid)
    uh = constraint_tangent(m, g.source, eta2, ug.xi[-1], random_eta(rng, m.n), grid)
    vh = constraint_tangent(m, g.source, eta2, vg.xi[-1], random_eta(rng, m.n), grid)
    return g, h, (ug, uh), (vg, vh)


def check_groupoid_observables(ctx: SuiteContext) -> CheckResult:
    m = ctx.model
    seed = int(ctx.rng(13).integers(2**31))
    residuals = []
    endpoint_failures = 0
    for N in ADDITIVITY_GRIDS:
        g, h, u, v = _composable_pair(m, np.random.default_rng(seed), N)
        residuals.append(multiplicativity_residual(m, g, h, u, v))
        gh = concatenate(g, h)
        inv = invert(g)
        endpoint_failures += int(not np.array_equal(gh.target, g.target))
        endpoint_failures += int(not np.array_equal(gh.source, h.source))
        endpoint_failures += int(not np.array_equal(inv.target, g.source))
        endpoint_failures += int(not (np.array_equal(invert(inv).path.X, g.path.X) and np.array_equal(invert(inv).path.eta, g.path.eta)))
        unit = concatenate(g, identity_element(g.source, g.grid))
        endpoint_failures += int(not (np.array_equal(unit.target, g.target) and np.array_equal(unit.source, g.source)))
    orders = [float(np.log2(a / b)) for a, b in zip(residuals, residuals[1:])]
    point = m.points[0] if m.points else np.zeros(m.n)
    prop = identity_section_checks(m, point, Grid(IDENTITY_SECTION_GRID), ctx.rng(130))
    sigma = nondegeneracy_at_identity(m, point, Grid(ctx.grid))
    return CheckResult(
        "groupoid_observables",
        [
            Part("endpoint_law_failures", endpoint_failures, 0.0, "==0"),
            Part("additivity_order", min(orders), 2.0 - ORDER_SLACK, ">="),
            Part("identity_section", worst(prop.values()), IDENTITY_SECTION_TOL),
            Part("min_singular_value", sigma, NONDEGENERACY_MIN, ">="),
        ],
        {"additivity_residuals": residuals, "grids": list(ADDITIVITY_GRIDS), "orders": orders,
         "identity_section": {k: float(v) for k, v in prop.items()}},
    )


CHECKS: tuple[tuple[str, Callable[[SuiteContext], CheckResult]], ...] = (
    ("twisted_jacobi", check_twisted_jacobi),
    ("bracket_consistency", check_bracket_consistency),
    ("bracket_identities", check_bracket_identities),
    ("delta_suite", check_delta_suite),
    ("path_convergence", check_path_convergence),
    ("constraint_momentum", check_constraint_momentum),
    ("hamiltonian_relation", check_hamiltonian_relation),
    ("gauge_flow", check_gauge_flow),
    ("base_pairing", check_base_pairing),
    ("omega1_identity", check_omega1_identity),
    ("horizontality_invariance", check_horizontality_invariance),
    ("transgression_stokes", check_transgression_stokes),
    ("groupoid_observables", check_groupoid_observables),
)

CHECK_NAMES = tuple(name for name, _ in CHECKS)


# checks outside the acceptance list, available to run_check by name
EXTRA_CHECKS = {"closedness": check_closedness}
SYMBOLIC_CHECKS = ("closedness", "twisted_jacobi", "bracket_consistency", "bracket_identities", "delta_suite")


def run_check(ctx: SuiteContext, name: str) -> CheckResult:
    funcs = {**dict(CHECKS), **EXTRA_CHECKS}
    if name not in funcs:
        raise KeyError(f"unknown check {name!r}; choose from {', '.join(funcs)}")
    start = time.perf_counter()
    try:
        result = funcs[name](ctx)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        result = CheckResult(name, [Part("error", float("nan"))], {"error": f"{type(exc).__name__}: {exc}"})
    result.seconds = time.perf_counter() - start
    return result


def run_suite(
    model: Model, grid: int = 200, seed: int = 0, names=None, numeric: bool | None = None, points=None
) -> list[CheckResult]:
    ctx = SuiteContext(model, grid, seed, numeric, points)
    return [run_check(ctx, name) for name in (names or CHECK_NAMES)]
