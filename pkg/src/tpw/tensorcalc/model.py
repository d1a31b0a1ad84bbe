"""Twisted Poisson models: a bivector and a closed 3-form on one chart."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

import numpy as np

from tpw.expr import Expr, algebra_for, nodes
from tpw.expr.numeric import DomainError, compile_value
from tpw.tensorcalc.forms import Bivector, KForm, ThreeForm, exterior_derivative, sort_sign

ALLOWED_CONSTANTS = tuple(Fraction(v) for v in (1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2))


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class CalibrationConstants:
    """Convention constants fixed once by the calibration routines.

    c_jac   factor between the Jacobiator of pi and the phi-trivector
    c_phi   ratio between the twisted 2-form term and the transgressed phi
    s_inv   sign of phi in the nondegenerate fixture
    s_delta sign in delta^2 = s_delta [phi, .]
    """

    c_jac: Fraction = Fraction(1)
    c_phi: Fraction = Fraction(-1)
    s_inv: Fraction = Fraction(1)
    s_delta: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("c_jac", "c_phi", "s_inv", "s_delta"):
            value = Fraction(getattr(self, name))
            if value not in ALLOWED_CONSTANTS:
                raise ModelError(f"calibration constant {name}={value} is not in {{±1, ±1/2, ±2}}")
            object.__setattr__(self, name, value)

    def as_dict(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in ("c_jac", "c_phi", "s_inv", "s_delta")}


def _normalize(entries: Mapping, degree: int, n: int, what: str) -> dict[tuple[int, ...], Expr]:
    """1-based index tuples to sorted 0-based keys, folding permutation signs."""
    out: dict[tuple[int, ...], Expr] = {}
    for idx, e in entries.items():
        idx = tuple(idx)
        if len(idx) != degree or any(not 1 <= i <= n for i in idx):
            raise ModelError(f"{what} index {idx} must be {degree} indices within 1..{n}")
        sign, key = sort_sign(i - 1 for i in idx)
        if sign == 0:
            raise ModelError(f"{what} index {idx} repeats an index")
        e = nodes.as_expr(e)
        if nodes.max_index(e) > n or nodes.T_INDEX in nodes.variables(e):
            raise ModelError(f"{what}{idx} may only depend on x1..x{n}")
        e = e if sign > 0 else nodes.neg(e)
        out[key] = nodes.add(out[key], e) if key in out else e
    return {k: v for k, v in out.items() if v != nodes.ZERO}


@dataclass(frozen=True)
class Model:
    """Chart of dimension n with bivector pi, 3-form phi and calibration.

    ``pi_exprs`` and ``phi_exprs`` are keyed by sorted 0-based index tuples;
    ``pi`` and ``phi`` hold the same data in the scalar algebra ``alg``.
    """

    n: int
    pi_exprs: dict
    phi_exprs: dict
    calibration: CalibrationConstants = field(default_factory=CalibrationConstants)
    name: str = "model"
    points: tuple = ()
    alg: object = field(default=None, compare=False, repr=False)
    pi: Bivector = field(default=None, compare=False, repr=False)
    phi: ThreeForm = field(default=None, compare=False, repr=False)

    @classmethod
    def build(
        cls,
        n: int,
        pi: Mapping | None = None,
        phi: Mapping | None = None,
        *,
        calibration: CalibrationConstants | None = None,
        name: str = "model",
        points=(),
        check_closed: bool = True,
    ) -> "Model":
        """Model from 1-based entries, e.g. ``pi={(1, 2): x(3)}``.

        Any index order is accepted; entries are antisymmetrized.
        """
        if n < 1:
            raise ModelError("dimension must be positive")
        pi_exprs = _normalize(pi or {}, 2, n, "pi")
        phi_exprs = _normalize(phi or {}, 3, n, "phi")
        alg = algebra_for(list(pi_exprs.values()) + list(phi_exprs.values()), n)
        bivector = Bivector(alg, 2, {k: alg.from_expr(v) for k, v in pi_exprs.items()})
        three = ThreeForm(alg, 3, {k: alg.from_expr(v) for k, v in phi_exprs.items()})
        points = tuple(tuple(float(v) for v in p) for p in points)
        for p in points:
            if len(p) != n:
                raise ModelError(f"point {p} does not have {n} coordinates")
        model = cls(n, pi_exprs, phi_exprs, calibration or CalibrationConstants(), name, points, alg, bivector, three)
        if check_closed:
            residual = model.closedness_residual()
            if residual > 0:
                raise ModelError(f"phi is not closed (|d phi| = {residual:.3g})")
        return model

    def with_calibration(self, calibration: CalibrationConstants) -> "Model":
        return replace(self, calibration=calibration)

    @property
    def exact(self) -> bool:
        return self.alg.exact

    @property
    def has_phi(self) -> bool:
        return bool(self.phi_exprs)

    def scalar(self, e) -> object:
        """Convert an expression (or number) into the model's scalar algebra."""
        return self.alg.from_expr(nodes.as_expr(e))

    def form(self, degree: int, entries: Mapping) -> KForm:
        """k-form from 1-based index entries, e.g. ``{(1,): x(2)}``."""
        comps = _normalize(entries, degree, self.n, "form") if degree else {(): nodes.as_expr(entries.get((), 0))}
        return KForm(self.alg, degree, {k: self.alg.from_expr(v) for k, v in comps.items()})

    def one_form(self, coefficients) -> KForm:
        """1-form sum c_i dx^i from a length-n sequence of expressions."""
        return KForm.from_covector(self.alg, [self.scalar(c) for c in coefficients])

    def dx(self, i: int) -> KForm:
        """Coordinate differential dx^i, 1-based."""
        return KForm.coordinate(self.alg, i - 1)

    def pi_matrix_exprs(self) -> list[list[Expr]]:
        out = [[nodes.ZERO] * self.n for _ in range(self.n)]
        for (i, j), e in self.pi_exprs.items():
            out[i][j] = e
            out[j][i] = nodes.neg(e)
        return out

    def pi_matrix_at(self, point) -> np.ndarray:
        """Numeric matrix P[i, j] = pi^{ij}(point)."""
        p = tuple(float(v) for v in point)
        out = np.zeros((self.n, self.n))
        for (i, j), e in self.pi_exprs.items():
            v = compile_value(e)(p, 0.0)
            out[i, j], out[j, i] = v, -v
        return out

    def sample_points(self, rng: np.random.Generator, count: int, margin: float = 0.05) -> np.ndarray:
        """Uniform points in [-0.9, 0.9]^n at distance >= margin from every pole."""
        out = []
        attempts = 0
        while len(out) < count:
            attempts += 1
            if attempts > 1000 * count:
                raise ModelError("could not find sample points away from the poles")
            p = rng.uniform(-0.9, 0.9, size=self.n)
            if self.distance_to_poles(p) >= margin:
                out.append(p)
        return np.array(out)

    def denominators(self) -> list[Expr]:
        """Every expression that appears as a divisor in pi or phi."""
        from tpw.expr.nodes import Div, Pow, children

        dens = []
        for e in list(self.pi_exprs.values()) + list(self.phi_exprs.values()):
            stack = [e]
            while stack:
                node = stack.pop()
                if isinstance(node, Div):
                    dens.append(node.right)
                elif isinstance(node, Pow) and node.exponent < 0:
                    dens.append(node.base)
                stack.extend(children(node))
        return dens

    def distance_to_poles(self, point, h: float = 0.05) -> float:
        """Crude pole clearance: first-order distance to the nearest zero of a denominator."""
        dens = self.denominators()
        if not dens:
            return np.inf
        p = tuple(float(v) for v in point)
        best = np.inf
        for d in dens:
            try:
                value, grad = _value_and_gradient(d, p)
            except DomainError:
                return 0.0
            # first-order distance to the zero set of the denominator
            g = np.linalg.norm(grad)
            best = min(best, abs(value) / g if g > 0 else (np.inf if value != 0 else 0.0))
        return best

    def closedness_residual(self, samples: int = 8) -> float:
        """Size of d(phi): exact zero test, or sampled maximum for transcendental models."""
        if self.n < 4 or not self.phi_exprs:
            return 0.0
        dphi = exterior_derivative(self.phi)
        if self.exact:
            return 0.0 if dphi.is_zero() else float("inf")
        rng = np.random.default_rng(0)
        worst = 0.0
        for p in self.sample_points(rng, samples):
            for v in dphi.comps.values():
                worst = max(worst, abs(compile_value(v)(tuple(p), 0.0)))
        return 0.0 if worst <= 1e-10 else worst


def _value_and_gradient(e: Expr, p):
    from tpw.expr.numeric import compile_dual

    f = compile_dual(e)
    n = len(p)
    grad = []
    value = None
    for k in range(n):
        direction = tuple(1.0 if i == k else 0.0 for i in range(n))
        value, d = f(p, direction, 0.0, 0.0)
        grad.append(d)
    if value is None:
        value = compile_value(e)(p, 0.0)
    return float(value), np.array(grad)
