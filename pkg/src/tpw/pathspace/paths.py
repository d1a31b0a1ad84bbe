"""Algebroid paths, path tangents and gauge generators on a uniform grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from tpw.expr import Expr, compile_value, differentiate, is_exact, nodes, normal_form, substitute
from tpw.expr.numeric import DomainError
from tpw.pathspace.grid import Grid
from tpw.pathspace.numeric_model import numeric
from tpw.tensorcalc.model import Model


class PathDivergenceError(ArithmeticError):
    def __init__(self, node: int, t: float):
        super().__init__(f"path diverged at node {node} (t={t:.6g})")
        self.node = node


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class AlgebroidPath:
    """Nodal base path X and dt-coefficient eta of eta_i dt (x) dx^i."""

    grid: Grid
    X: np.ndarray
    eta: np.ndarray
    eta_form: tuple | None = None
    on_shell: bool = False

    def __post_init__(self):
        X, eta = _frozen(self.X), _frozen(self.eta)
        if X.ndim != 2 or X.shape[0] != self.grid.N + 1 or eta.shape != X.shape:
            raise ValueError(f"X and eta must both have shape ({self.grid.N + 1}, n)")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "eta", eta)

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def target(self) -> np.ndarray:
        """alpha = X(0)."""
        return self.X[0]

    @property
    def source(self) -> np.ndarray:
        """beta = X(1)."""
        return self.X[-1]

    def shifted(self, tangent: "PathTangent", eps: float) -> "AlgebroidPath":
        """The off-shell point (X + eps*xi, eta + eps*e)."""
        return AlgebroidPath(self.grid, self.X + eps * tangent.xi, self.eta + eps * tangent.e)

    def to_json(self) -> dict:
        return {"grid": self.grid.N, "X": self.X.tolist(), "eta": self.eta.tolist(), "on_shell": self.on_shell}

    @classmethod
    def from_json(cls, data: dict) -> "AlgebroidPath":
        grid = Grid(int(data["grid"]))
        return cls(grid, np.array(data["X"], dtype=float), np.array(data["eta"], dtype=float),
                   on_shell=bool(data.get("on_shell", False)))


@dataclass(frozen=True, eq=False)
class PathTangent:
    """Horizontal part xi (vector per node) and vertical part e (covector per node)."""

    xi: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        xi, e = _frozen(self.xi), _frozen(self.e)
        if xi.shape != e.shape or xi.ndim != 2:
            raise ValueError("xi and e must have the same (N+1, n) shape")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "e", e)

    @classmethod
    def zero(cls, like: AlgebroidPath) -> "PathTangent":
        return cls(np.zeros_like(like.X), np.zeros_like(like.eta))

    def __add__(self, other):
        return PathTangent(self.xi + other.xi, self.e + other.e)

    def __sub__(self, other):
        return PathTangent(self.xi - other.xi, self.e - other.e)

    def __mul__(self, c: float):
        return PathTangent(c * self.xi, c * self.e)

    __rmul__ = __mul__

    def to_json(self, grid: Grid) -> dict:
        return {"grid": grid.N, "xi": self.xi.tolist(), "e": self.e.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "PathTangent":
        return cls(np.array(data["xi"], dtype=float), np.array(data["e"], dtype=float))


def _constant_zero(e: Expr, n: int) -> bool:
    if is_exact(e):
        return normal_form(e, n).is_zero
    rng = np.random.default_rng(0)
    f = compile_value(e)
    pts = rng.uniform(-0.9, 0.9, size=(16, n))
    values = f(tuple(pts[:, k] for k in range(n)), 0.0)
    return bool(np.all(np.abs(values) <= 1e-12))


@dataclass(frozen=True, eq=False)
class GaugeGenerator:
    """Time-dependent covector field B(t, x) with B(0, .) = B(1, .) = 0.

    Either closed form (``exprs``: one expression in t and x per component)
    or nodal data depending on t only (``values``).
    """

    n: int
    exprs: tuple | None = None
    values: np.ndarray | None = None
    _compiled: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if (self.exprs is None) == (self.values is None):
            raise ValueError("give exactly one of exprs or values")
        if self.exprs is not None:
            exprs = tuple(nodes.as_expr(e) for e in self.exprs)
            if len(exprs) != self.n:
                raise ValueError(f"expected {self.n} components")
            for e in exprs:
                for t_end in (0, 1):
                    if not _constant_zero(substitute(e, {nodes.T_INDEX: nodes.const(t_end)}), self.n):
                        raise ValueError(f"generator component {e} does not vanish at t={t_end}")
            value = [compile_value(e) for e in exprs]
            partial_t = [compile_value(differentiate(e, "t")) for e in exprs]
            jac = [[compile_value(differentiate(e, a + 1)) for a in range(self.n)] for e in exprs]
            object.__setattr__(self, "exprs", exprs)
            object.__setattr__(self, "_compiled", (value, partial_t, jac))
        else:
            values = _frozen(self.values)
            if values.ndim != 2 or values.shape[1] != self.n:
                raise ValueError(f"values must have shape (N+1, {self.n})")
            if np.any(values[0] != 0) or np.any(values[-1] != 0):
                raise ValueError("generator values must vanish at both endpoints")
            object.__setattr__(self, "values", values)

    @classmethod
    def closed_form(cls, exprs: Sequence) -> "GaugeGenerator":
        return cls(len(exprs), exprs=tuple(exprs))

    @classmethod
    def zero(cls, n: int) -> "GaugeGenerator":
        return cls(n, exprs=tuple(nodes.ZERO for _ in range(n)))

    @property
    def is_zero(self) -> bool:
        if self.exprs is not None:
            return all(e == nodes.ZERO or (isinstance(e, nodes.Const) and e.value == 0) for e in self.exprs)
        return not np.any(self.values)

    def _check_grid(self, path: AlgebroidPath):
        if self.values is not None and self.values.shape[0] != path.grid.N + 1:
            raise ValueError("generator data and path use different grids")

    def _eval(self, funcs, path: AlgebroidPath) -> np.ndarray:
        cols = tuple(path.X[:, k] for k in range(self.n))
        t = path.grid.nodes
        out = np.zeros((path.grid.N + 1, len(funcs)))
        for i, f in enumerate(funcs):
            out[:, i] = f(cols, t)
        return out

    def along(self, path: AlgebroidPath) -> np.ndarray:
        """B_X(t_k) = B(t_k, X(t_k)); endpoint rows are exactly zero."""
        self._check_grid(path)
        if self.values is not None:
            return np.array(self.values)
        out = self._eval(self._compiled[0], path)
        out[0] = out[-1] = 0.0
        return out

    def jacobian_along(self, path: AlgebroidPath) -> np.ndarray:
        """J[k, i, a] = d_a B_i at (t_k, X(t_k))."""
        N1 = path.grid.N + 1
        if self.values is not None:
            return np.zeros((N1, self.n, self.n))
        cols = tuple(path.X[:, k] for k in range(self.n))
        t = path.grid.nodes
        out = np.zeros((N1, self.n, self.n))
        for i, row in enumerate(self._compiled[2]):
            for a, f in enumerate(row):
                out[:, i, a] = f(cols, t)
        return out

    def time_derivative_along(self, path: AlgebroidPath, order: int = 2, method: str = "exact") -> np.ndarray:
        """d/dt B_X(t).

        ``method="exact"`` uses the chain rule dB/dt + dB/dx . dX/dt for closed
        forms (dX/dt differenced on the grid); ``method="grid"`` differences the
        nodal values B_X, the same operator that defines the anchor residual.
        Nodal generator data is always differenced.
        """
        self._check_grid(path)
        if method not in ("exact", "grid"):
            raise ValueError(f"unknown time-derivative method {method!r}")
        if self.values is not None:
            return path.grid.derivative(self.values, order)
        if method == "grid":
            return path.grid.derivative(self.along(path), order)
        dt = self._eval(self._compiled[1], path)
        Xdot = path.grid.derivative(path.X, order)
        return dt + np.einsum("kia,ka->ki", self.jacobian_along(path), Xdot)


def _eta_sampler(eta, grid: Grid, n: int):
    """Return (nodal eta, callable eta(t) for RK4 stages, closed form or None)."""
    if isinstance(eta, (list, tuple)) and len(eta) == n and all(isinstance(e, (Expr, int, float, Fraction)) for e in eta):
        exprs = tuple(nodes.as_expr(e) for e in eta)
        for e in exprs:
            if nodes.max_index(e) > 0:
                raise ValueError("closed-form eta may depend on t only")
        funcs = [compile_value(e) for e in exprs]

        def sample(t):
            t = np.asarray(t, dtype=float)
            return np.stack([np.broadcast_to(f((), t), t.shape) for f in funcs], axis=-1)

        return sample(grid.nodes), sample, exprs
    data = np.asarray(eta, dtype=float)
    if data.shape != (grid.N + 1, n):
        raise ValueError(f"eta data must have shape ({grid.N + 1}, {n})")
    nodes_t = grid.nodes

    def interp(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.stack([np.interp(t, nodes_t, data[:, i]) for i in range(n)], axis=-1)
        return out

    return data, interp, None


def solve_base_path(model: Model, x0, eta, grid: Grid) -> AlgebroidPath:
    """Integrate dX/dt = pi#(X) eta(t) from x0 with classical RK4 on the grid.

    ``eta`` is either n closed-form expressions in t (sampled exactly at the
    RK4 stages) or nodal data of shape (N+1, n) (linearly interpolated).
    """
    nm = numeric(model)
    n = model.n
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (n,):
        raise ValueError(f"x0 must have {n} coordinates")
    eta_nodes, sample, exprs = _eta_sampler(eta, grid, n)
    h = grid.h
    t = grid.nodes
    mids = sample(t[:-1] + 0.5 * h).reshape(grid.N, n)
    X = np.empty((grid.N + 1, n))
    X[0] = x0
    for k in range(grid.N):
        x = X[k]
        try:
            k1 = nm.sharp(x, eta_nodes[k])
            k2 = nm.sharp(x + 0.5 * h * k1, mids[k])
            k3 = nm.sharp(x + 0.5 * h * k2, mids[k])
            k4 = nm.sharp(x + h * k3, eta_nodes[k + 1])
        except DomainError as exc:
            raise DomainError(f"{exc} on the step from node {k} (t={t[k]:.6g})") from None
        X[k + 1] = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(X[k + 1])) or np.max(np.abs(X[k + 1])) > 1e12:
            raise PathDivergenceError(k + 1, t[k + 1])
        if nm.crosses_pole(x, X[k + 1]):
            raise DomainError(f"path reaches a pole of {model.name} on the step from node {k} (t={t[k]:.6g})")
    return AlgebroidPath(grid, X, eta_nodes, eta_form=exprs, on_shell=True)


def identity_path(point, grid: Grid) -> AlgebroidPath:
    """Constant path at ``point`` with eta = 0."""
    point = np.asarray(point, dtype=float)
    X = np.tile(point, (grid.N + 1, 1))
    return AlgebroidPath(grid, X, np.zeros_like(X), on_shell=True)


def anchor_residual(model: Model, path: AlgebroidPath, order: int = 2) -> np.ndarray:
    """r_k = dX/dt(t_k) - pi#(X(t_k)) eta(t_k) with differenced dX/dt."""
    return path.grid.derivative(path.X, order) - numeric(model).sharp(path.X, path.eta)


def anchor_residual_norm(model: Model, path: AlgebroidPath, order: int = 2) -> float:
    return float(np.max(np.abs(anchor_residual(model, path, order))))
