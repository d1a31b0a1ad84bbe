"""Three-parameter polynomial families of base paths and the Stokes identity.

For the transgressed form Phi_X(w1, w2) = int phi(X)(X', w1, w2) dt the
exterior derivative along a family X_{a,b,c} satisfies

    dPhi = phi(X(1))(dX(1), dX(1), dX(1)) - phi(X(0))(dX(0), dX(0), dX(0)),

the boundary terms of the fiber integration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tpw.pathspace.grid import Grid
from tpw.pathspace.numeric_model import numeric
from tpw.tensorcalc.model import Model


@dataclass(frozen=True)
class PolynomialFamily:
    """X(t; a, b, c) = sum over monomials a^i b^j c^k of polynomial paths in t.

    ``terms`` maps exponent triples to coefficient arrays of shape (deg+1, n)
    (row d multiplies t^d).
    """

    n: int
    terms: dict

    def _poly(self, coeffs, t, dt_order=0):
        p = np.polynomial.polynomial
        out = np.empty((len(t), self.n))
        for i in range(self.n):
            c = coeffs[:, i]
            if dt_order:
                c = p.polyder(c, dt_order)
            out[:, i] = p.polyval(t, c)
        return out

    def position(self, t, params, dt_order: int = 0, param_derivative: int | None = None) -> np.ndarray:
        """X (or a t-derivative / first parameter derivative of it) at parameters (a, b, c)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros((len(t), self.n))
        for (i, j, k), coeffs in self.terms.items():
            exps = [i, j, k]
            if param_derivative is not None:
                e = exps[param_derivative]
                if e == 0:
                    continue
                factor = e
                exps[param_derivative] -= 1
            else:
                factor = 1
            weight = factor * params[0] ** exps[0] * params[1] ** exps[1] * params[2] ** exps[2]
            if weight != 0:
                out += weight * self._poly(np.asarray(coeffs, dtype=float), t, dt_order)
        return out

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, base_scale=0.3, scale=0.3, frozen_ends=False):
        """Random cubic-in-t family with linear and mixed parameter dependence."""
        terms = {(0, 0, 0): rng.normal(scale=base_scale, size=(4, n))}
        for key in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1)):
            coeffs = rng.normal(scale=scale, size=(3, n))
            if frozen_ends:
                # multiply by t(1-t) so that parameter variations vanish at both ends
                coeffs = np.array([np.polynomial.polynomial.polymul(coeffs[:, i], [0.0, 1.0, -1.0]) for i in range(n)]).T
            terms[key] = coeffs
        return cls(n, terms)


def _phi_integral(model: Model, family: PolynomialFamily, grid: Grid, params, u: int, v: int) -> float:
    t = grid.nodes
    X = family.position(t, params)
    Xdot = family.position(t, params, dt_order=1)
    w1 = family.position(t, params, param_derivative=u)
    w2 = family.position(t, params, param_derivative=v)
    integrand = np.einsum("kabc,ka,kb,kc->k", numeric(model).phi(X), Xdot, w1, w2)
    return grid.integrate(integrand)


def stokes_terms(model: Model, family: PolynomialFamily, grid: Grid, fd_step: float = 1e-3) -> tuple[float, float]:
    """(dPhi on the three parameter directions at 0, boundary term beta*phi - alpha*phi)."""
    if not model.has_phi:
        return 0.0, 0.0
    origin = np.zeros(3)

    def partial(direction, u, v):
        step = np.zeros(3)
        step[direction] = fd_step
        plus = _phi_integral(model, family, grid, origin + step, u, v)
        minus = _phi_integral(model, family, grid, origin - step, u, v)
        return (plus - minus) / (2 * fd_step)

    d_phi = partial(0, 1, 2) - partial(1, 0, 2) + partial(2, 0, 1)
    nm = numeric(model)
    ends = np.array([0.0, 1.0])
    X = family.position(ends, origin)
    W = [family.position(ends, origin, param_derivative=d) for d in range(3)]
    phis = nm.phi(X)
    boundary = [np.einsum("abc,a,b,c->", phis[k], W[0][k], W[1][k], W[2][k]) for k in (0, 1)]
    return d_phi, float(boundary[1] - boundary[0])


def stokes_residual(model: Model, family: PolynomialFamily, grid: Grid, fd_step: float = 1e-3) -> float:
    """|dPhi - (beta*phi - alpha*phi)| on the family's parameter directions at 0."""
    d_phi, boundary = stokes_terms(model, family, grid, fd_step)
    return abs(d_phi - boundary)
