"""Uniform grids on [0, 1], trapezoid weights and finite-difference operators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class Grid:
    """N uniform intervals, nodes t_k = k/N for k = 0..N."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"a grid needs at least 2 intervals, got N={self.N}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.N + 1)

    @property
    def weights(self) -> np.ndarray:
        """Composite trapezoid weights h*(1/2, 1, ..., 1, 1/2)."""
        w = np.full(self.N + 1, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ np.asarray(values))

    def derivative(self, values: np.ndarray, order: int = 2) -> np.ndarray:
        """Time derivative of nodal data along axis 0.

        The data is shifted by its first row first (every stencil annihilates
        constants), so constant data has an exactly zero derivative.
        """
        values = np.asarray(values, dtype=float)
        return derivative_matrix(self.N, order) @ (values - values[0])


@lru_cache(maxsize=64)
def derivative_matrix(N: int, order: int = 2) -> sparse.csr_matrix:
    """Sparse differentiation matrix on N+1 uniform nodes of [0, 1].

    order 2: centered differences with one-sided second-order ends.
    order 4: five-point centered stencil with one-sided fourth-order ends.
    """
    h = 1.0 / N
    size = N + 1
    D = sparse.lil_matrix((size, size))
    if order == 2:
        D[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2 * h)
        D[N, N - 2 :] = np.array([1.0, -4.0, 3.0]) / (2 * h)
        for k in range(1, N):
            D[k, k - 1] = -1.0 / (2 * h)
            D[k, k + 1] = 1.0 / (2 * h)
    elif order == 4:
        if N < 4:
            raise ValueError("the fourth-order stencil needs N >= 4")
        edge0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12 * h)
        edge1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / (12 * h)
        D[0, :5] = edge0
        D[1, :5] = edge1
        D[N, N - 4 :] = -edge0[::-1]
        D[N - 1, N - 4 :] = -edge1[::-1]
        for k in range(2, N - 1):
            D[k, k - 2 : k + 3] = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12 * h)
    else:
        raise ValueError(f"unsupported difference order {order}")
    return D.tocsr()
