"""Reduced shell energy: thickness polynomial coefficients, reduction identities,
and the closed-form membrane and bending densities accurate to O(h^5).

The density kernels (``membrane_split``, ``bending_split``) broadcast over
leading axes so the grid solver can evaluate all nodes at once; the
pointwise wrappers take a :class:`PointGeometry`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureViolation
from .kinematics import ThicknessCoefficients, strain_measures, tilde_strain_brackets
from .material import (
    MaterialParams,
    stress_s2,
    w_curv,
    w_curv3,
    w_m,
    w_mixt,
    w_mixt_kappa,
    w_mp,
    w_mp3,
    w_mp3_kappa,
)
from .quadrature import surface_rule
from .surface_geometry import PointGeometry, SurfacePatch, point_geometry
from .tensor_core import norm, tr

__all__ = [
    "MaterialParams",
    "EnergyBreakdown",
    "w_mp3",
    "w_mp",
    "w_mp3_kappa",
    "w_curv3",
    "w_curv",
    "w_mixt",
    "w_mixt_kappa",
    "w_m",
    "stress_s2",
    "normal_dyad_identities",
    "membrane_coefficients",
    "reduced_membrane_coefficients",
    "curvature_coefficients",
    "inverse_shifter_series",
    "membrane_split",
    "bending_split",
    "membrane_density",
    "bending_density",
    "energy_density",
    "integrate_energy",
    "total_shell_energy",
]

STRUCTURE_TOL = 1e-10


def _col(x):
    return np.asarray(x, dtype=float)[..., None, None]


@dataclass(frozen=True)
class EnergyBreakdown:
    membH: float
    membH3: float
    membH5: float
    bendH: float
    bendH3: float
    bendH5: float
    total: float

    def __post_init__(self):
        parts = self.membH + self.membH3 + self.membH5 + self.bendH + self.bendH3 + self.bendH5
        if abs(parts - self.total) > 1e-14 * max(1.0, abs(self.total), abs(parts)):
            raise ValueError("total does not match the sum of its parts")

    @classmethod
    def from_parts(cls, memb, bend) -> "EnergyBreakdown":
        m = [float(v) for v in memb]
        b = [float(v) for v in bend]
        return cls(*m, *b, total=sum(m) + sum(b))

    @property
    def membrane(self) -> float:
        return self.membH + self.membH3 + self.membH5

    @property
    def bending(self) -> float:
        return self.bendH + self.bendH3 + self.bendH5

    FIELDS = ("membH", "membH3", "membH5", "bendH", "bendH3", "bendH5", "total")

    def as_row(self) -> list[float]:
        return [getattr(self, f) for f in self.FIELDS]


def normal_dyad_identities(S, T, alpha: float, beta: float, pg: PointGeometry, mat: MaterialParams):
    """Residuals of the two normal-dyad absorption identities for tangential-column S, T."""
    n0 = pg.n0
    for name, X in (("S", S), ("T", T)):
        if np.linalg.norm(X @ n0) > STRUCTURE_TOL * max(1.0, float(norm(X))):
            raise StructureViolation(f"{name} has a nonzero n0-column")
    nn = pg.nn
    lam, mu = mat.lam, mat.mu
    trS, trT = float(tr(S)), float(tr(T))
    lhs1 = w_mp3(S + alpha * nn, T + beta * nn, mat)
    rhs1 = w_mp3(S, T, mat) + 0.5 * lam * (alpha * trT + beta * trS) + 0.5 * (lam + 2 * mu) * alpha * beta
    lhs2 = w_mp3(S - mat.q * trS * nn, T + beta * nn, mat)
    return abs(float(lhs1 - rhs1)), abs(float(lhs2 - w_mixt(S, T, mat)))


def membrane_coefficients(Ee, Ke, co: ThicknessCoefficients, pg: PointGeometry, mat: MaterialParams):
    """C0..C6 of W_mp(simplified strain) b(x3)^2 as a polynomial in x3."""
    P0, P1, P2, P3 = tilde_strain_brackets(Ee, Ke, co, pg)
    f = lambda S, T: float(w_mp3(S, T, mat))  # noqa: E731
    return (
        f(P0, P0),
        2 * f(P0, P1),
        f(P1, P1) + 2 * f(P0, P2),
        2 * f(P0, P3) + 2 * f(P1, P2),
        f(P2, P2) + 2 * f(P1, P3),
        2 * f(P2, P3),
        f(P3, P3),
    )


def reduced_membrane_coefficients(Ee, Ke, pg: PointGeometry, mat: MaterialParams):
    """C0..C4 rewritten with W_m / W_mixt after absorbing the normal dyads."""
    b, H = pg.b, pg.H
    cK = pg.c @ Ke
    X = Ee @ b + cK - 2 * H * Ee
    Y = cK @ b - 2 * H * cK
    extra = 0.5 * mat.lam**2 / (mat.lam + 2 * mat.mu) * float(tr((Ee @ b + cK) @ b)) ** 2
    wm = lambda S: float(w_m(S, mat))  # noqa: E731
    wx = lambda S, T: float(w_mixt(S, T, mat))  # noqa: E731
    return (
        wm(Ee),
        2 * wx(Ee, X),
        wm(X) + 2 * wx(Ee, Y),
        2 * wx(X, Y),
        wm(Y) + extra,
    )


def curvature_coefficients(Ke, pg: PointGeometry, mat: MaterialParams):
    Y = Ke @ pg.b - 2 * pg.H * Ke
    return float(w_curv(Ke, mat)), 2 * float(w_curv3(Ke, Y, mat)), float(w_curv(Y, mat))


def inverse_shifter_series(H, K):
    """Coefficients of 1/b(x3) = sum_k s_k x3^k for k = 0..4."""
    return (1.0, 2 * H, 4 * H**2 - K, 8 * H**3 - 4 * H * K, K**2 - 12 * H**2 * K + 16 * H**4)


def membrane_split(Ee, Ke, b, c, H, K, mat: MaterialParams):
    """(h, h^3, h^5) contributions to the membrane density; broadcasts."""
    h = mat.h
    H, K = _col(H), _col(K)
    cK = c @ Ke
    X = Ee @ b + cK
    Y = cK @ b - 2 * H * cK
    Kf = K[..., 0, 0]
    wmE = w_m(Ee, mat)
    wmX = w_m(X, mat)
    p1 = h * wmE
    p3 = h**3 / 12 * (-Kf * wmE + wmX + 2 * w_mixt(Ee, Y, mat))
    p5 = h**5 / 80 * (-Kf * wmX + w_mp(X @ b, mat))
    return p1, p3, p5


def bending_split(Ke, b, K, mat: MaterialParams):
    h = mat.h
    Kb = Ke @ b
    wK = w_curv(Ke, mat)
    wKb = w_curv(Kb, mat)
    K = np.asarray(K, dtype=float)
    return h * wK, h**3 / 12 * (-K * wK + wKb), h**5 / 80 * (-K * wKb + w_curv(Kb @ b, mat))


def membrane_density(Ee, Ke, pg: PointGeometry, mat: MaterialParams):
    parts = tuple(float(v) for v in membrane_split(Ee, Ke, pg.b, pg.c, pg.H, pg.K, mat))
    return sum(parts), parts


def bending_density(Ke, pg: PointGeometry, mat: MaterialParams):
    parts = tuple(float(v) for v in bending_split(Ke, pg.b, pg.K, mat))
    return sum(parts), parts


def energy_density(Ee, Ke, pg: PointGeometry, mat: MaterialParams) -> EnergyBreakdown:
    _, memb = membrane_density(Ee, Ke, pg, mat)
    _, bend = bending_density(Ke, pg, mat)
    return EnergyBreakdown.from_parts(memb, bend)


def integrate_energy(
    patch: SurfacePatch, field, mat: MaterialParams, quad_order: int = 8, cells: tuple[int, int] = (1, 1)
) -> EnergyBreakdown:
    """Integral over the parameter rectangle of each density part times the area factor."""
    if quad_order < 2:
        raise ValueError("quad_order must be >= 2")
    acc = np.zeros(6)
    for x1, x2, w in surface_rule(patch.bounds, quad_order, cells):
        pg = point_geometry(patch, x1, x2)
        sm = strain_measures(field.evaluate(pg), pg, mat)
        _, memb = membrane_density(sm.Ee, sm.Ke, pg, mat)
        _, bend = bending_density(sm.Ke, pg, mat)
        acc += w * pg.area * np.array(memb + bend)
    return EnergyBreakdown.from_parts(acc[:3], acc[3:])


def total_shell_energy(
    patch: SurfacePatch, field, mat: MaterialParams, quad_order: int = 8, cells: tuple[int, int] = (1, 1)
) -> float:
    return integrate_energy(patch, field, mat, quad_order, cells).total
