"""Vectorized floating-point evaluation of a model's tensors along paths.

Every method accepts points of shape (..., n) and returns arrays with the
tensor indices appended, so a whole path is evaluated in one call.
"""

from __future__ import annotations

import numpy as np

from tpw.expr import compile_value, differentiate, nodes
from tpw.expr.numeric import DomainError
from tpw.tensorcalc.model import Model


def _columns(X: np.ndarray):
    return tuple(X[..., k] for k in range(X.shape[-1]))


class NumericModel:
    def __init__(self, model: Model):
        self.model = model
        self.n = n = model.n
        self._pi = [(key, compile_value(e)) for key, e in model.pi_exprs.items()]
        self._dpi = []
        for (i, j), e in model.pi_exprs.items():
            for a in range(n):
                de = differentiate(e, a + 1)
                if de != nodes.ZERO and not (isinstance(de, nodes.Const) and de.value == 0):
                    self._dpi.append(((a, i, j), compile_value(de)))
        self._phi = [(key, compile_value(e)) for key, e in model.phi_exprs.items()]
        self._den = [compile_value(e) for e in model.denominators()]

    def _eval(self, X, table, shape):
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[:-1] + shape)
        cols = _columns(X)
        try:
            for key, f in table:
                out[(...,) + key] = f(cols, 0.0)
        except DomainError as exc:
            raise DomainError(f"{exc} while evaluating {self.model.name}") from None
        return out

    def pi(self, X) -> np.ndarray:
        """P[..., i, j] = pi^{ij}(X)."""
        out = self._eval(X, self._pi, (self.n, self.n))
        return out - np.swapaxes(out, -1, -2)

    def dpi(self, X) -> np.ndarray:
        """dP[..., a, i, j] = d_a pi^{ij}(X)."""
        out = self._eval(X, self._dpi, (self.n, self.n, self.n))
        return out - np.swapaxes(out, -1, -2)

    def phi(self, X) -> np.ndarray:
        """Fully antisymmetric phi[..., i, j, k]."""
        base = self._eval(X, self._phi, (self.n, self.n, self.n))
        if not self._phi:
            return base
        out = np.zeros_like(base)
        for perm, sign in (
            ((0, 1, 2), 1.0),
            ((1, 2, 0), 1.0),
            ((2, 0, 1), 1.0),
            ((1, 0, 2), -1.0),
            ((0, 2, 1), -1.0),
            ((2, 1, 0), -1.0),
        ):
            axes = tuple(range(base.ndim - 3)) + tuple(base.ndim - 3 + p for p in perm)
            out += sign * np.transpose(base, axes)
        return out

    def crosses_pole(self, a, b) -> bool:
        """True when some denominator vanishes at a or b or changes sign between them."""
        cols_a, cols_b = _columns(np.asarray(a, dtype=float)), _columns(np.asarray(b, dtype=float))
        for f in self._den:
            if np.any(np.asarray(f(cols_a, 0.0)) * np.asarray(f(cols_b, 0.0)) <= 0):
                return True
        return False

    def sharp(self, X, sigma) -> np.ndarray:
        """(pi# sigma)^j = sum_i pi^{ij} sigma_i."""
        return np.einsum("...ij,...i->...j", self.pi(X), sigma)

    def structure(self, X) -> np.ndarray:
        """f[..., i, j, k] = d_k pi^{ij} + pi^{ai} pi^{bj} phi_{abk}."""
        P = self.pi(X)
        f = np.moveaxis(self.dpi(X), -3, -1)
        if self._phi:
            f = f + np.einsum("...ai,...bj,...abk->...ijk", P, P, self.phi(X))
        return f


def numeric(model: Model) -> NumericModel:
    """Cached numeric evaluator attached to the model instance."""
    cached = model.__dict__.get("_numeric_cache")
    if cached is None:
        cached = NumericModel(model)
        object.__setattr__(model, "_numeric_cache", cached)
    return cached
