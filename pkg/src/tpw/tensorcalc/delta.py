"""The twisted differential delta and the extended bracket on all forms.

delta is the degree +1 derivation with delta f = df and
delta s = ds - i_{pi# s} phi on 1-forms.  The bracket of 1-forms extends to
forms of any degree as the Schouten-type biderivation

    [s1 ^ ... ^ sp, t1 ^ ... ^ tq]
        = sum_{r,s} (-1)^{r+s} [sr, ts] ^ s1..^sr^..sp ^ t1..^ts^..tq,

with [s, f] = (pi# s)(f) and [f, g] = 0.
"""

from __future__ import annotations

from tpw.tensorcalc.brackets import apply_anchor, sharp, twisted_bracket, twisted_jacobi_residual
from tpw.tensorcalc.forms import KForm, exterior_derivative, interior, wedge
from tpw.tensorcalc.model import Model


class NotTwistedPoissonError(ValueError):
    def __init__(self):
        super().__init__("model not twisted Poisson: the Jacobi residual does not vanish")


def _delta_coordinate(m: Model, i: int) -> KForm:
    """delta(dx^i) = -i_{pi# dx^i} phi (d dx^i = 0)."""
    if not m.phi.comps:
        return KForm.zero(m.alg, 2)
    return -interior(sharp(m, KForm.coordinate(m.alg, i)), m.phi)


def delta(m: Model, a: KForm) -> KForm:
    """Twisted differential, extended to every degree as a derivation over wedge."""
    alg = m.alg
    if a.degree >= m.n:
        # top-degree forms: both d and the phi-term land in a zero space
        return KForm.zero(alg, a.degree + 1)
    if a.degree == 0:
        return exterior_derivative(a)
    out = exterior_derivative(a)
    if not m.phi.comps:
        return out
    coordinate_delta = {}
    for idx, v in a.comps.items():
        for pos, i in enumerate(idx):
            if i not in coordinate_delta:
                coordinate_delta[i] = _delta_coordinate(m, i)
            # delta(dx^i) has even degree, so it commutes past the preceding 1-forms
            rest = KForm(alg, a.degree - 1, {idx[:pos] + idx[pos + 1 :]: v})
            term = wedge(coordinate_delta[i], rest)
            out = out + (term if pos % 2 == 0 else -term)
    return out


def _factors(m: Model, a: KForm):
    """Decompose a form into (coefficient-absorbed) wedge products of 1-forms."""
    alg = m.alg
    for idx, v in a.comps.items():
        if not idx:
            yield v, []
            continue
        first = KForm(alg, 1, {(idx[0],): v})
        yield None, [first] + [KForm.coordinate(alg, i) for i in idx[1:]]


def _wedge_all(m: Model, forms, degree_if_empty=0) -> KForm:
    out = KForm.function(m.alg, m.alg.one)
    for f in forms:
        out = wedge(out, f)
    return out


def _bracket_decomposable(m: Model, fa, A, gb, B) -> KForm:
    """Bracket of two decomposables; a function is passed as (f, [])."""
    alg = m.alg
    p, q = len(A), len(B)
    degree = p + q - 1
    if p == 0 and q == 0:
        return KForm.zero(alg, 0) if degree < 0 else KForm.zero(alg, degree)
    out = KForm.zero(alg, degree)
    if q == 0:
        # [A1^...^Ap, g] = sum_r (-1)^(p+r) (pi# A_r)(g) A_{-r}
        for r in range(1, p + 1):
            c = apply_anchor(m, A[r - 1], gb)
            if alg.is_zero(c):
                continue
            term = _wedge_all(m, A[: r - 1] + A[r:]).scale(c)
            out = out + (term if (p + r) % 2 == 0 else -term)
        return out
    if p == 0:
        # [f, B1^...^Bq] = sum_s (-1)^s (pi# B_s)(f) B_{-s}
        for s in range(1, q + 1):
            c = apply_anchor(m, B[s - 1], fa)
            if alg.is_zero(c):
                continue
            term = _wedge_all(m, B[: s - 1] + B[s:]).scale(c)
            out = out + (term if s % 2 == 0 else -term)
        return out
    for r in range(1, p + 1):
        for s in range(1, q + 1):
            br = twisted_bracket(m, A[r - 1], B[s - 1])
            if br.is_zero():
                continue
            term = wedge(br, _wedge_all(m, A[: r - 1] + A[r:] + B[: s - 1] + B[s:]))
            out = out + (term if (r + s) % 2 == 0 else -term)
    return out


def extended_bracket(m: Model, a: KForm, b: KForm) -> KForm:
    """Biderivation extension of the twisted bracket to forms of any degree."""
    if a.degree + b.degree > 5:
        raise ValueError("extended_bracket supports total degree at most 5")
    degree = a.degree + b.degree - 1
    if degree < 0:
        # [f, g] = 0; represented as the zero 0-form
        return KForm.zero(m.alg, 0)
    out = KForm.zero(m.alg, degree)
    for fa, A in _factors(m, a):
        for gb, B in _factors(m, b):
            out = out + _bracket_decomposable(m, fa, A, gb, B)
    return out


def derivation_residual(m: Model, sigma: KForm, tau: KForm) -> KForm:
    """delta[s, t] - [delta s, t] - [s, delta t]."""
    lhs = delta(m, twisted_bracket(m, sigma, tau))
    return lhs - extended_bracket(m, delta(m, sigma), tau) - extended_bracket(m, sigma, delta(m, tau))


def delta_square_residual(m: Model, sigma: KForm, s_delta=None) -> KForm:
    """delta(delta s) - s_delta [phi, s]."""
    s = m.calibration.s_delta if s_delta is None else s_delta
    out = delta(m, delta(m, sigma))
    if not m.phi.comps:
        return out
    return out - extended_bracket(m, m.phi, sigma).scale(m.alg.const(s))


def delta_identities_residuals(m: Model, sigma: KForm, tau: KForm, *, check_model: bool = True):
    """(derivation residual, delta-square residual); both vanish on twisted Poisson models."""
    if check_model and m.exact and not twisted_jacobi_residual(m).is_zero():
        raise NotTwistedPoissonError()
    return derivation_residual(m, sigma, tau), delta_square_residual(m, sigma)
