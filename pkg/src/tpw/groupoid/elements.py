"""Groupoid operations on representatives of gauge classes of algebroid paths.

alpha(g) = X(0) and beta(g) = X(1).  Inversion is time reversal with eta
negated; concatenation runs g on the first part of [0, 1] and h on the rest
after both are reparametrized by tau(t) = t - sin(2 pi t)/(2 pi), which makes
eta and its first derivative vanish at the junction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from tpw.pathspace.grid import Grid
from tpw.pathspace.paths import AlgebroidPath, PathTangent, anchor_residual_norm, identity_path
from tpw.tensorcalc.model import Model

GLUE_TOL = 1e-8


class GlueError(ValueError):
    """beta(g) and alpha(h) differ by more than the glue tolerance."""


def flatten_time(t):
    """tau(t) = t - sin(2 pi t)/(2 pi): tau(0) = 0, tau(1) = 1, tau' = tau'' = 0 at both ends."""
    t = np.asarray(t, dtype=float)
    return t - np.sin(2 * np.pi * t) / (2 * np.pi)


def flatten_rate(t):
    """tau'(t) = 1 - cos(2 pi t)."""
    return 1.0 - np.cos(2 * np.pi * np.asarray(t, dtype=float))


@dataclass(frozen=True, eq=False)
class GroupoidElementRep:
    """An on-shell algebroid path standing for its gauge class."""

    path: AlgebroidPath

    def __post_init__(self):
        if not self.path.on_shell:
            raise ValueError("groupoid elements are represented by on-shell paths")

    @classmethod
    def from_path(cls, model: Model, path: AlgebroidPath, tol: float) -> "GroupoidElementRep":
        """Accept any path whose anchor residual is within ``tol``."""
        r = anchor_residual_norm(model, path)
        if r > tol:
            raise ValueError(f"anchor residual {r:.3g} exceeds {tol:.3g}")
        return cls(AlgebroidPath(path.grid, path.X, path.eta, on_shell=True))

    @property
    def target(self) -> np.ndarray:
        """alpha = X(0)."""
        return self.path.X[0]

    @property
    def source(self) -> np.ndarray:
        """beta = X(1)."""
        return self.path.X[-1]

    @property
    def grid(self) -> Grid:
        return self.path.grid

    def to_json(self) -> dict:
        data = self.path.to_json()
        data["source"] = self.source.tolist()
        data["target"] = self.target.tolist()
        return data

    @classmethod
    def from_json(cls, data: dict) -> "GroupoidElementRep":
        path = AlgebroidPath.from_json({**data, "on_shell": True})
        g = cls(path)
        for key, value in (("source", g.source), ("target", g.target)):
            if key in data and not np.array_equal(np.asarray(data[key], dtype=float), value):
                raise ValueError(f"stored {key} does not match the path endpoint")
        return g


def identity_element(point, grid: Grid) -> GroupoidElementRep:
    return GroupoidElementRep(identity_path(point, grid))


def invert(g: GroupoidElementRep) -> GroupoidElementRep:
    """X(1 - t) with eta negated; an involution on the nose."""
    p = g.path
    return GroupoidElementRep(AlgebroidPath(p.grid, p.X[::-1], -p.eta[::-1], on_shell=True))


def invert_tangent(u: PathTangent) -> PathTangent:
    """Pushforward of a tangent under inversion."""
    return PathTangent(u.xi[::-1], -u.e[::-1])


def _resample(values: np.ndarray, grid: Grid, local_t: np.ndarray, rate: float, covector: bool) -> np.ndarray:
    """values(tau(s)) (times rate * tau'(s) for covector data) at local parameters s."""
    spline = CubicSpline(grid.nodes, values, axis=0)
    out = spline(flatten_time(local_t))
    out[0], out[-1] = values[0], values[-1]
    if covector:
        out = rate * flatten_rate(local_t)[:, None] * out
    return out


def _layout(g: GroupoidElementRep, h: GroupoidElementRep, split: float, intervals: int | None):
    M = intervals if intervals is not None else g.grid.N + h.grid.N
    j = int(round(split * M))
    if not 0 < j < M:
        raise ValueError(f"split {split} leaves an empty piece on {M} intervals")
    return Grid(M), j


def _join(g_vals, h_vals, g_grid, h_grid, grid, j, covector):
    t = grid.nodes
    s_split = t[j]
    first = _resample(g_vals, g_grid, t[: j + 1] / s_split, 1.0 / s_split, covector)
    second = _resample(h_vals, h_grid, (t[j:] - s_split) / (1.0 - s_split), 1.0 / (1.0 - s_split), covector)
    return np.concatenate([first, second[1:]])


def concatenate(
    g: GroupoidElementRep,
    h: GroupoidElementRep,
    split: float = 0.5,
    intervals: int | None = None,
    glue_tol: float = GLUE_TOL,
) -> GroupoidElementRep:
    """Product g.h: g runs on [0, split], h on [split, 1].

    Requires beta(g) = alpha(h) within ``glue_tol``.  The joined grid has
    g.N + h.N intervals unless ``intervals`` is given; each piece is
    resampled with a cubic spline at the flattened times.  The endpoints are
    copied, so alpha(g.h) = alpha(g) and beta(g.h) = beta(h) exactly.
    """
    gap = float(np.max(np.abs(g.source - h.target)))
    if gap > glue_tol:
        raise GlueError(f"beta(g) and alpha(h) differ by {gap:.3g} (tolerance {glue_tol:.3g})")
    grid, j = _layout(g, h, split, intervals)
    X = _join(g.path.X, h.path.X, g.grid, h.grid, grid, j, covector=False)
    eta = _join(g.path.eta, h.path.eta, g.grid, h.grid, grid, j, covector=True)
    X[j] = g.source
    return GroupoidElementRep(AlgebroidPath(grid, X, eta, on_shell=True))


def join_tangents(
    g: GroupoidElementRep,
    h: GroupoidElementRep,
    u_g: PathTangent,
    u_h: PathTangent,
    split: float = 0.5,
    intervals: int | None = None,
) -> PathTangent:
    """The tangent at g.h made of u_g and u_h, reparametrized like the paths."""
    grid, j = _layout(g, h, split, intervals)
    xi = _join(u_g.xi, u_h.xi, g.grid, h.grid, grid, j, covector=False)
    e = _join(u_g.e, u_h.e, g.grid, h.grid, grid, j, covector=True)
    return PathTangent(xi, e)


def arc_length_split(g: GroupoidElementRep, h: GroupoidElementRep, clamp: float = 0.2) -> float:
    """Split point proportional to the polygonal lengths of the two base paths.

    Clamped to [clamp, 1 - clamp] so neither piece collapses.
    """
    lg = float(np.sum(np.linalg.norm(np.diff(g.path.X, axis=0), axis=1)))
    lh = float(np.sum(np.linalg.norm(np.diff(h.path.X, axis=0), axis=1)))
    if lg + lh == 0:
        return 0.5
    return min(max(lg / (lg + lh), clamp), 1.0 - clamp)
