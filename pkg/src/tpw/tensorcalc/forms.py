"""Alternating tensors on one coordinate chart.

A k-form (or k-vector) is stored sparsely as ``{multi_index: coefficient}``
with strictly increasing 0-based multi-indices and nonzero coefficients.
Coefficients live in a scalar algebra (see ``tpw.expr.exact``): exact
rational functions for the symbolic checks, expression trees otherwise.
Vector fields are plain tuples of n coefficients.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable


def sort_sign(indices: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``indices`` and the sorted tuple.

    Returns sign 0 when an index repeats (the wedge vanishes).
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


class Alternating:
    """Sparse antisymmetric tensor of a fixed degree over a scalar algebra."""

    __slots__ = ("alg", "n", "degree", "comps")

    def __init__(self, alg, degree: int, comps: dict | None = None):
        self.alg = alg
        self.n = alg.n
        self.degree = degree
        self.comps = {}
        for idx, v in (comps or {}).items():
            if len(idx) != degree:
                raise ValueError(f"multi-index {idx} does not have length {degree}")
            if not alg.is_zero(v):
                if any(a >= b for a, b in zip(idx, idx[1:])) or (idx and (idx[0] < 0 or idx[-1] >= self.n)):
                    raise ValueError(f"multi-index {idx} is not strictly increasing within 0..{self.n - 1}")
                self.comps[idx] = v

    @classmethod
    def from_terms(cls, alg, degree: int, terms: Iterable[tuple[tuple[int, ...], object]]):
        """Accumulate (multi-index, coefficient) terms given in any index order."""
        acc: dict = {}
        for idx, v in terms:
            sign, key = sort_sign(idx)
            if sign == 0:
                continue
            term = v if sign > 0 else -v
            acc[key] = acc[key] + term if key in acc else term
        return cls(alg, degree, acc)

    @classmethod
    def zero(cls, alg, degree: int):
        return cls(alg, degree)

    def __getitem__(self, idx) -> object:
        """Coefficient on any ordering of a multi-index (with permutation sign)."""
        sign, key = sort_sign(idx)
        if sign == 0:
            return self.alg.zero
        v = self.comps.get(key, self.alg.zero)
        return v if sign > 0 else -v

    def _family(self):
        return KForm if isinstance(self, KForm) else MultiVector

    def __add__(self, other):
        family = self._family()
        if not isinstance(other, family) or other.degree != self.degree:
            raise TypeError(f"cannot add {other!r} to a degree-{self.degree} {family.__name__}")
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return family(self.alg, self.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._family()(self.alg, self.degree, {k: -v for k, v in self.comps.items()})

    def scale(self, c):
        """Multiply every coefficient by the scalar ``c``."""
        return self._family()(self.alg, self.degree, {k: c * v for k, v in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def exprs(self) -> dict:
        """Coefficients as expression trees."""
        return {k: self.alg.to_expr(v) for k, v in self.comps.items()}

    def __repr__(self):
        body = ", ".join(f"{k}: {self.alg.to_expr(v)}" for k, v in sorted(self.comps.items()))
        return f"{type(self).__name__}(degree={self.degree}, {{{body}}})"


class KForm(Alternating):
    """Differential k-form sum of a_I dx^I."""

    __slots__ = ()

    @classmethod
    def function(cls, alg, f):
        return cls(alg, 0, {(): f})

    @classmethod
    def coordinate(cls, alg, i: int):
        """The 1-form dx^i (0-based i)."""
        return cls(alg, 1, {(i,): alg.one})

    @property
    def scalar(self):
        """The coefficient of a 0-form."""
        if self.degree != 0:
            raise ValueError("only 0-forms have a scalar value")
        return self.comps.get((), self.alg.zero)

    def covector(self) -> tuple:
        """Components (a_1, ..., a_n) of a 1-form."""
        if self.degree != 1:
            raise ValueError("only 1-forms have covector components")
        return tuple(self.comps.get((i,), self.alg.zero) for i in range(self.n))

    @classmethod
    def from_covector(cls, alg, comps):
        return cls(alg, 1, {(i,): v for i, v in enumerate(comps)})


class MultiVector(Alternating):
    """Multivector field sum of P^I d_I (k-vector)."""

    __slots__ = ()


class Bivector(MultiVector):
    """Bivector pi^{ij}; antisymmetry is structural (only i<j stored)."""

    __slots__ = ()

    def __init__(self, alg, degree: int = 2, comps: dict | None = None):
        if degree != 2:
            raise ValueError("a bivector has degree 2")
        super().__init__(alg, 2, comps)

    def matrix(self) -> list[list]:
        """Full antisymmetric coefficient matrix P[i][j] = pi^{ij}."""
        return [[self[(i, j)] for j in range(self.n)] for i in range(self.n)]


class ThreeForm(KForm):
    """Closed 3-form phi_{ijk} with structural antisymmetry."""

    __slots__ = ()

    def __init__(self, alg, degree: int = 3, comps: dict | None = None):
        if degree != 3:
            raise ValueError("a three-form has degree 3")
        super().__init__(alg, 3, comps)


def wedge(a: KForm, b: KForm) -> KForm:
    alg = a.alg
    terms = [(i + j, va * vb) for i, va in a.comps.items() for j, vb in b.comps.items()]
    return KForm.from_terms(alg, a.degree + b.degree, terms)


def exterior_derivative(a: KForm) -> KForm:
    """d(sum a_I dx^I) = sum_l d_l a_I dx^l ^ dx^I."""
    if a.degree >= a.n:
        raise ValueError(f"degree overflow: d of a {a.degree}-form on a {a.n}-dimensional chart")
    alg = a.alg
    terms = []
    for idx, v in a.comps.items():
        for l in range(a.n):
            if l in idx:
                continue
            dv = alg.diff(v, l)
            if not alg.is_zero(dv):
                terms.append(((l,) + idx, dv))
    return KForm.from_terms(alg, a.degree + 1, terms)


def interior(X, a: KForm) -> KForm:
    """Contraction in the first slot: (i_X a)(v2, ...) = a(X, v2, ...)."""
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    alg = a.alg
    terms = []
    for idx, v in a.comps.items():
        for pos, i in enumerate(idx):
            if alg.is_zero(X[i]):
                continue
            c = X[i] * v
            terms.append((idx[:pos] + idx[pos + 1 :], c if pos % 2 == 0 else -c))
    return KForm.from_terms(alg, a.degree - 1, terms)


def lie_derivative(X, a: KForm) -> KForm:
    """Cartan formula L_X = i_X d + d i_X."""
    out = KForm.zero(a.alg, a.degree)
    if a.degree < a.n:
        out = out + interior(X, exterior_derivative(a))
    if a.degree > 0:
        out = out + exterior_derivative(interior(X, a))
    return out


def apply_vector(X, f, alg):
    """Directional derivative X(f) = sum X^i d_i f."""
    out = alg.zero
    for i, xi in enumerate(X):
        if not alg.is_zero(xi):
            out = out + xi * alg.diff(f, i)
    return out


def vector_bracket(X, Y, alg) -> tuple:
    """Lie bracket [X, Y]^j = X(Y^j) - Y(X^j)."""
    return tuple(apply_vector(X, Y[j], alg) - apply_vector(Y, X[j], alg) for j in range(alg.n))


def vectors_equal(X, Y, alg) -> bool:
    return all(alg.is_zero(a - b) for a, b in zip(X, Y))


def evaluate_on(a: Alternating, vectors) -> object:
    """a(v1, ..., vk) with full antisymmetrization."""
    alg = a.alg
    out = alg.zero
    for idx, v in a.comps.items():
        # determinant of the k x k minor [v_r^{idx_c}]
        det = _minor_determinant([[vec[i] for i in idx] for vec in vectors], alg)
        out = out + v * det
    return out


def _minor_determinant(rows, alg):
    k = len(rows)
    if k == 0:
        return alg.one
    if k == 1:
        return rows[0][0]
    out = alg.zero
    for c in range(k):
        if alg.is_zero(rows[0][c]):
            continue
        sub = [r[:c] + r[c + 1 :] for r in rows[1:]]
        term = rows[0][c] * _minor_determinant(sub, alg)
        out = out + term if c % 2 == 0 else out - term
    return out


def basis_indices(n: int, k: int):
    return list(combinations(range(n), k))
