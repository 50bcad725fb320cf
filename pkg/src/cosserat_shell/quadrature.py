"""Gauss-Legendre rules on intervals and on cell grids over a parameter rectangle."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def _rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def interval_rule(lo: float, hi: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _rule(order)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def thickness_rule(h: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    return interval_rule(-0.5 * h, 0.5 * h, order)


def surface_rule(bounds, order: int, cells: tuple[int, int] = (1, 1)) -> np.ndarray:
    """Tensor-product points as rows (x1, x2, weight), cell by cell in a fixed order."""
    (lo1, hi1), (lo2, hi2) = bounds
    n1, n2 = cells
    if n1 < 1 or n2 < 1:
        raise ValueError("cell counts must be positive")
    e1 = np.linspace(lo1, hi1, n1 + 1)
    e2 = np.linspace(lo2, hi2, n2 + 1)
    rows = []
    for i in range(n1):
        p1, w1 = interval_rule(e1[i], e1[i + 1], order)
        for j in range(n2):
            p2, w2 = interval_rule(e2[j], e2[j + 1], order)
            X1, X2 = np.meshgrid(p1, p2, indexing="ij")
            W = np.outer(w1, w2)
            rows.append(np.column_stack([X1.ravel(), X2.ravel(), W.ravel()]))
    return np.vstack(rows)
