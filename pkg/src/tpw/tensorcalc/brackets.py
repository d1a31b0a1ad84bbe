"""Anchor, brackets and Jacobi-type residuals of a twisted Poisson model.

Index conventions: pi(s, t) = sum pi^{ij} s_i t_j, (pi# s)^j = sum_i pi^{ij} s_i,
phi(u, v, w) = sum phi_{ijk} u^i v^j w^k with phi fully antisymmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

from tpw.expr import Expr

from tpw.tensorcalc.forms import (
    KForm,
    MultiVector,
    apply_vector,
    exterior_derivative,
    interior,
    lie_derivative,
    vector_bracket,
)
from tpw.tensorcalc.model import Model


def _scalar(m: Model, f):
    """Accept expressions and plain numbers as well as algebra scalars."""
    return m.scalar(f) if isinstance(f, (Expr, Number)) else f


def sharp(m: Model, sigma: KForm) -> tuple:
    """Anchor pi#: components sum_i pi^{ij} sigma_i."""
    if sigma.degree != 1:
        raise ValueError("sharp takes a 1-form")
    alg = m.alg
    out = [alg.zero] * m.n
    for (i,), s in sigma.comps.items():
        for j in range(m.n):
            if i == j:
                continue
            p = m.pi[(i, j)]
            if not alg.is_zero(p):
                out[j] = out[j] + p * s
    return tuple(out)


def pairing(m: Model, sigma: KForm, tau: KForm):
    """pi(sigma, tau) = sum pi^{ij} sigma_i tau_j."""
    alg = m.alg
    out = alg.zero
    for (i,), s in sigma.comps.items():
        for (j,), t in tau.comps.items():
            if i != j:
                p = m.pi[(i, j)]
                if not alg.is_zero(p):
                    out = out + p * s * t
    return out


def d_function(m: Model, f) -> KForm:
    return exterior_derivative(KForm.function(m.alg, _scalar(m, f)))


def poisson_bracket_fn(m: Model, f, g):
    """{f, g} = sum pi^{ij} d_i f d_j g."""
    return pairing(m, d_function(m, f), d_function(m, g))


def hamiltonian_vf(m: Model, f) -> tuple:
    """X_f = pi# df."""
    return sharp(m, d_function(m, f))


def phi_contraction(m: Model, u, v) -> KForm:
    """The 1-form phi(u, v, .)."""
    if not m.phi.comps:
        return KForm.zero(m.alg, 1)
    return interior(v, interior(u, m.phi))


def twisted_bracket(m: Model, sigma: KForm, tau: KForm) -> KForm:
    """L_{pi#s} t - L_{pi#t} s - d pi(s, t) + phi(pi#s, pi#t, .)."""
    if sigma.degree != 1 or tau.degree != 1:
        raise ValueError("twisted_bracket takes two 1-forms")
    a, b = sharp(m, sigma), sharp(m, tau)
    out = lie_derivative(a, tau) - lie_derivative(b, sigma)
    out = out - exterior_derivative(KForm.function(m.alg, pairing(m, sigma, tau)))
    return out + phi_contraction(m, a, b)


def jacobiator(m: Model, sigma: KForm, tau: KForm, rho: KForm) -> KForm:
    br = lambda a, b: twisted_bracket(m, a, b)  # noqa: E731
    return br(br(sigma, tau), rho) + br(br(tau, rho), sigma) + br(br(rho, sigma), tau)


def jacobi_trivector(m: Model) -> MultiVector:
    """J^{ijk} = cyclic sum of pi^{il} d_l pi^{jk}."""
    alg, n = m.alg, m.n
    P = m.pi.matrix()
    dP = {}

    def d_pi(l, j, k):
        key = (l, j, k)
        if key not in dP:
            dP[key] = alg.diff(P[j][k], l)
        return dP[key]

    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = alg.zero
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    for l in range(n):
                        if not alg.is_zero(P[a][l]):
                            total = total + P[a][l] * d_pi(l, b, c)
                comps[(i, j, k)] = total
    return MultiVector(alg, 3, comps)


def phi_trivector(m: Model) -> MultiVector:
    """Phi3^{ijk} = sum pi^{li} pi^{mj} pi^{nk} phi_{lmn}."""
    alg, n = m.alg, m.n
    P = m.pi.matrix()
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = alg.zero
                for (l, mm, nn), v in m.phi.comps.items():
                    # phi_{lmn} fully antisymmetric: sum over permutations of the stored index
                    for (a, b, c), sign in _PERMUTATIONS:
                        idx = (l, mm, nn)
                        coeff = P[idx[a]][i] * P[idx[b]][j] * P[idx[c]][k]
                        if not alg.is_zero(coeff):
                            total = total + (coeff * v if sign > 0 else -(coeff * v))
                comps[(i, j, k)] = total
    return MultiVector(alg, 3, comps)


_PERMUTATIONS = (
    ((0, 1, 2), 1),
    ((1, 2, 0), 1),
    ((2, 0, 1), 1),
    ((1, 0, 2), -1),
    ((0, 2, 1), -1),
    ((2, 1, 0), -1),
)


def twisted_jacobi_residual(m: Model, c_jac=None) -> MultiVector:
    """J - c_jac Phi3; identically zero exactly for twisted Poisson models."""
    c = m.calibration.c_jac if c_jac is None else c_jac
    return jacobi_trivector(m) - phi_trivector(m).scale(m.alg.const(c))


@dataclass(frozen=True)
class StructureFunctions:
    """f^{ij}_k stored for i<j (0-based); f^{ji}_k = -f^{ij}_k."""

    n: int
    alg: object
    values: dict

    def __getitem__(self, key):
        i, j, k = key
        if i == j:
            return self.alg.zero
        if i < j:
            return self.values[(i, j)][k]
        return -self.values[(j, i)][k]

    def exprs(self) -> dict:
        return {
            (i, j, k): self.alg.to_expr(v)
            for (i, j), row in self.values.items()
            for k, v in enumerate(row)
            if not self.alg.is_zero(v)
        }


def structure_functions(m: Model) -> StructureFunctions:
    """f^{ij}_k = d_k pi^{ij} + pi^{ai} pi^{bj} phi_{abk}."""
    alg, n = m.alg, m.n
    P = m.pi.matrix()
    values = {}
    for i in range(n):
        for j in range(i + 1, n):
            row = []
            for k in range(n):
                v = alg.diff(P[i][j], k)
                for a in range(n):
                    if alg.is_zero(P[a][i]):
                        continue
                    for b in range(n):
                        if alg.is_zero(P[b][j]):
                            continue
                        ph = m.phi[(a, b, k)]
                        if not alg.is_zero(ph):
                            v = v + P[a][i] * P[b][j] * ph
                row.append(v)
            values[(i, j)] = tuple(row)
    return StructureFunctions(n, alg, values)


def bracket_consistency_residual(m: Model) -> dict:
    """[dx^i, dx^j] - f^{ij}_k dx^k for all i<j (0-based keys)."""
    f = structure_functions(m)
    out = {}
    for (i, j), row in f.values.items():
        expected = KForm.from_covector(m.alg, row)
        out[(i, j)] = twisted_bracket(m, KForm.coordinate(m.alg, i), KForm.coordinate(m.alg, j)) - expected
    return out


def anchor_morphism_residual(m: Model, sigma: KForm, tau: KForm) -> tuple:
    """pi#[s, t] - [pi# s, pi# t] as a vector field."""
    lhs = sharp(m, twisted_bracket(m, sigma, tau))
    rhs = vector_bracket(sharp(m, sigma), sharp(m, tau), m.alg)
    return tuple(a - b for a, b in zip(lhs, rhs))


def differential_bracket_residual(m: Model, f, g) -> KForm:
    """[df, dg] - d{f, g} - phi(X_f, X_g, .); vanishes on every model."""
    df, dg = d_function(m, f), d_function(m, g)
    xf, xg = sharp(m, df), sharp(m, dg)
    out = twisted_bracket(m, df, dg) - exterior_derivative(KForm.function(m.alg, pairing(m, df, dg)))
    return out - phi_contraction(m, xf, xg)


def hamiltonian_bracket_residual(m: Model, f, g) -> tuple:
    """[X_f, X_g] - X_{f,g} - pi#(phi(X_f, X_g, .)); vanishes on twisted Poisson models."""
    xf, xg = hamiltonian_vf(m, f), hamiltonian_vf(m, g)
    lhs = vector_bracket(xf, xg, m.alg)
    xfg = hamiltonian_vf(m, poisson_bracket_fn(m, f, g))
    correction = sharp(m, phi_contraction(m, xf, xg))
    return tuple(a - b - c for a, b, c in zip(lhs, xfg, correction))


def vector_is_zero(m: Model, X) -> bool:
    return all(m.alg.is_zero(v) for v in X)


def apply_anchor(m: Model, sigma: KForm, f):
    """(pi# sigma)(f)."""
    return apply_vector(sharp(m, sigma), _scalar(m, f), m.alg)
