"""Residual sizes for the symbolic identities, exact when possible.

For models in the exact fragment a residual is reported as 0.0 exactly when
its normal form vanishes; otherwise its size is the largest absolute value
of its components at sample points.  Models outside the exact fragment are
always measured at sample points.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

from tpw.expr import compile_value, nodes
from tpw.tensorcalc.brackets import (
    bracket_consistency_residual,
    differential_bracket_residual,
    hamiltonian_bracket_residual,
    twisted_jacobi_residual,
)
from tpw.tensorcalc.delta import delta, delta_square_residual, derivation_residual
from tpw.tensorcalc.forms import Alternating, KForm, exterior_derivative
from tpw.tensorcalc.model import Model


def _scalars(residual) -> list:
    if isinstance(residual, Alternating):
        return list(residual.comps.values())
    if isinstance(residual, dict):
        return [s for v in residual.values() for s in _scalars(v)]
    if isinstance(residual, (list, tuple)):
        out = []
        for v in residual:
            out.extend(_scalars(v) if isinstance(v, (Alternating, dict, list, tuple)) else [v])
        return out
    return [residual]


def residual_size(model: Model, residual, points=None, numeric: bool | None = None) -> float:
    """0.0 for an exactly vanishing residual, else max |component| at the points.

    ``numeric`` forces sampling even for exact models.  A residual that is
    symbolically nonzero but happens to vanish at every point is reported as
    the smallest positive float, so it still counts as nonzero.
    """
    alg = model.alg
    scalars = [s for s in _scalars(residual) if s is not None]
    use_numeric = (not alg.exact) if numeric is None else numeric
    if not use_numeric and all(alg.is_zero(s) for s in scalars):
        return 0.0
    if points is None:
        points = default_points(model)
    best = 0.0
    for s in scalars:
        e = alg.to_expr(s) if alg.exact else s
        f = compile_value(nodes.as_expr(e))
        values = np.asarray([f(tuple(p), 0.0) for p in points], dtype=float)
        best = max(best, float(np.max(np.abs(values))))
    if not use_numeric and best == 0.0:
        return float(np.finfo(float).tiny)
    return best


def default_points(model: Model, count: int = 5, seed: int = 0) -> np.ndarray:
    pts = [np.asarray(p, dtype=float) for p in model.points]
    pts.extend(model.sample_points(np.random.default_rng(seed), count))
    return np.array(pts)


def random_polynomial(rng: np.random.Generator, n: int, degree: int = 2, coeff: int = 3) -> nodes.Expr:
    """Sum of all monomials of total degree <= ``degree`` with integer coefficients in [-coeff, coeff]."""
    terms = [t for d in range(degree + 1) for t in combinations_with_replacement(range(n), d)]
    out = nodes.ZERO
    for t in terms:
        c = int(rng.integers(-coeff, coeff + 1))
        if c == 0:
            continue
        mono = nodes.const(c)
        for k in t:
            mono = nodes.mul(mono, nodes.Var(k + 1))
        out = nodes.add(out, mono)
    return out


def random_one_form(model: Model, rng: np.random.Generator, degree: int = 2) -> KForm:
    return model.one_form([random_polynomial(rng, model.n, degree) for _ in range(model.n)])


def jacobi_size(model: Model, points=None, numeric=None) -> float:
    return residual_size(model, twisted_jacobi_residual(model), points, numeric)


def bracket_consistency_size(model: Model, points=None, numeric=None) -> float:
    return residual_size(model, bracket_consistency_residual(model), points, numeric)


def bracket_identity_sizes(model: Model, rng: np.random.Generator, pairs: int = 20, points=None, numeric=None):
    """Sizes of the d-bracket and Hamiltonian-bracket residuals over random polynomial pairs."""
    eq3, eq4 = [], []
    for _ in range(pairs):
        f, g = random_polynomial(rng, model.n), random_polynomial(rng, model.n)
        eq3.append(residual_size(model, differential_bracket_residual(model, f, g), points, numeric))
        eq4.append(residual_size(model, hamiltonian_bracket_residual(model, f, g), points, numeric))
    return eq3, eq4


def delta_suite_sizes(model: Model, rng: np.random.Generator, forms: int = 10, points=None, numeric=None) -> dict:
    """delta f = df, the derivation property and delta^2 = s_delta [phi, .] on 1-forms.

    Uses the coordinate differentials and ``forms`` random polynomial 1-forms.
    """
    one_forms = [model.dx(i + 1) for i in range(model.n)] + [random_one_form(model, rng) for _ in range(forms)]
    fn_sizes = []
    for _ in range(3):
        f = KForm.function(model.alg, model.scalar(random_polynomial(rng, model.n)))
        fn_sizes.append(residual_size(model, delta(model, f) - exterior_derivative(f), points, numeric))
    derivation = []
    for k, a in enumerate(one_forms):
        b = one_forms[(k + 1) % len(one_forms)]
        derivation.append(residual_size(model, derivation_residual(model, a, b), points, numeric))
    square = [residual_size(model, delta_square_residual(model, a), points, numeric) for a in one_forms]
    return {"delta_function": fn_sizes, "derivation": derivation, "delta_square": square}
