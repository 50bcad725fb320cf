"""Brute-force through-thickness quadrature of the reconstructed 3D energy.

The oracle integrates W_mp(simplified strain) and W_curv(Gamma_s) against
the exact volume weight a b(x3) with Gauss-Legendre in x3, so the only
difference from the closed-form densities is the truncated 1/b(x3) series.
Both sides share the same surface quadrature points; the surface
quadrature error therefore cancels in the comparison.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .energy import bending_density, membrane_density
from .errors import ThicknessExceedsCurvature
from .kinematics import full_strain_verbatim, reconstructed_strain, strain_measures
from .material import MaterialParams, w_curv, w_mp
from .quadrature import surface_rule, thickness_rule
from .surface_geometry import SurfacePatch, point_geometry

PARTS = ("membrane", "curvature", "total")


@dataclass(frozen=True)
class OracleReport:
    h: float
    analytic: float
    oracle: float
    part: str = "total"

    @property
    def abs_error(self) -> float:
        return abs(self.analytic - self.oracle)

    @property
    def error_over_h7(self) -> float:
        return self.abs_error / self.h**7

    @property
    def rel_error(self) -> float:
        return self.abs_error / max(abs(self.oracle), np.finfo(float).tiny)

    def as_row(self) -> list[float]:
        return [self.h, self.analytic, self.oracle, self.abs_error, self.error_over_h7]


CSV_HEADER = ["h", "analytic", "oracle", "abs_error", "error_over_h7"]


class _PointCache:
    """Geometry and strain measures at surface quadrature points (independent of h)."""

    def __init__(self, patch, field, mat, surf_order, cells):
        self.items = []
        for x1, x2, w in surface_rule(patch.bounds, surf_order, cells):
            pg = point_geometry(patch, x1, x2)
            sm = strain_measures(field.evaluate(pg), pg, mat)
            self.items.append((w, pg, sm))


def _check_admissible(pg, h):
    for x3 in (-0.5 * h, 0.5 * h):
        if pg.shifter(x3) <= 0.0:
            raise ThicknessExceedsCurvature(
                f"b(x3) <= 0 at x3 = {x3} (x = ({pg.x1:.4g}, {pg.x2:.4g}), H = {pg.H:.4g}, K = {pg.K:.4g})"
            )
    k1, k2 = pg.principal_curvatures
    if 0.5 * h * max(abs(k1), abs(k2)) >= 1.0:
        raise ThicknessExceedsCurvature(f"h/2 exceeds the radius of curvature at ({pg.x1}, {pg.x2})")


def _column(pg, sm, mat, h, thick_order, full=False):
    """Thickness integrals (membrane, curvature) of one surface point, per unit area factor."""
    xs, ws = thickness_rule(h, thick_order)
    co = sm.coefficients
    memb = 0.0
    curv = 0.0
    for x3, w in zip(xs, ws):
        rs = reconstructed_strain(sm.Ee, sm.Ke, co, pg, x3)
        bx = float(pg.shifter(x3))
        E = full_strain_verbatim(sm.Ee, sm.Ke, co, pg, x3) if full else rs.EsTilde
        memb += w * float(w_mp(E, mat)) * bx
        curv += w * float(w_curv(rs.GammaS, mat)) * bx
    return memb, curv


def _integrate(cache: _PointCache, mat: MaterialParams, thick_order: int, full: bool):
    h = mat.h
    memb = curv = 0.0
    a_memb = a_curv = 0.0
    for w, pg, sm in cache.items:
        _check_admissible(pg, h)
        m, c = _column(pg, sm, mat, h, thick_order, full)
        wa = w * pg.area
        memb += wa * m
        curv += wa * c
        a_memb += wa * membrane_density(sm.Ee, sm.Ke, pg, mat)[0]
        a_curv += wa * bending_density(sm.Ke, pg, mat)[0]
    return (a_memb, memb), (a_curv, curv)


def integrate_membrane_3d(
    patch: SurfacePatch,
    field,
    mat: MaterialParams,
    surf_order: int = 8,
    thick_order: int = 12,
    cells: tuple[int, int] = (1, 1),
    full: bool = False,
) -> float:
    """Volume integral of W_mp over the shell; ``full`` swaps in the unsimplified strain."""
    cache = _PointCache(patch, field, mat, surf_order, cells)
    return _integrate(cache, mat, thick_order, full)[0][1]


def integrate_curvature_3d(
    patch: SurfacePatch,
    field,
    mat: MaterialParams,
    surf_order: int = 8,
    thick_order: int = 12,
    cells: tuple[int, int] = (1, 1),
) -> float:
    cache = _PointCache(patch, field, mat, surf_order, cells)
    return _integrate(cache, mat, thick_order, False)[1][1]


def convergence_study(
    patch: SurfacePatch,
    field,
    mat: MaterialParams,
    h_list: Iterable[float],
    surf_order: int = 8,
    thick_order: int = 12,
    cells: tuple[int, int] = (1, 1),
) -> list[OracleReport]:
    """Reports for membrane, curvature and total parts at every h, in that order per h."""
    hs = [float(h) for h in h_list]
    if not hs:
        raise ValueError("empty h list")
    if any(h <= 0 for h in hs) or any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("h list must be positive and strictly decreasing")
    cache = _PointCache(patch, field, mat, surf_order, cells)
    reports = []
    for h in hs:
        (am, om), (ac, oc) = _integrate(cache, mat.with_thickness(h), thick_order, False)
        reports += [
            OracleReport(h, am, om, "membrane"),
            OracleReport(h, ac, oc, "curvature"),
            OracleReport(h, am + ac, om + oc, "total"),
        ]
    return reports


def select(reports: list[OracleReport], part: str) -> list[OracleReport]:
    return [r for r in reports if r.part == part]


def halving_ratios(reports: list[OracleReport]) -> list[float]:
    return [a.abs_error / b.abs_error if b.abs_error > 0 else math.inf for a, b in zip(reports, reports[1:])]


def loglog_slope(reports: list[OracleReport]) -> float:
    hs = np.log([r.h for r in reports])
    es = np.log([max(r.abs_error, np.finfo(float).tiny) for r in reports])
    return float(np.polyfit(hs, es, 1)[0])


def write_csv(path, reports: list[OracleReport]) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(CSV_HEADER)
        for r in reports:
            wr.writerow([f"{v:.17g}" for v in r.as_row()])
