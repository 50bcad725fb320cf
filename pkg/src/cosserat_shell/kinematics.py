"""Shell strain measures, thickness stretch coefficients and reconstructed 3D strains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentRotationDerivative, ThicknessExceedsCurvature
from .material import MaterialParams, stress_s2
from .surface_geometry import PointGeometry, ThicknessGeometry
from .tensor_core import IDENTITY, axl, norm, outer, skew, tr

ROTATION_DERIVATIVE_TOL = 1e-8


@dataclass(frozen=True)
class ShellState:
    """Midsurface deformation and total microrotation at one point, with partials."""

    m: np.ndarray
    dm: tuple[np.ndarray, np.ndarray]
    Rbar: np.ndarray
    dRbar: tuple[np.ndarray, np.ndarray]

    @property
    def directors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.Rbar[:, 0], self.Rbar[:, 1], self.Rbar[:, 2]

    def rotated(self, Q: np.ndarray) -> "ShellState":
        """The superposed rigid rotation (Q m, Q Rbar)."""
        return ShellState(
            m=Q @ self.m,
            dm=(Q @ self.dm[0], Q @ self.dm[1]),
            Rbar=Q @ self.Rbar,
            dRbar=(Q @ self.dRbar[0], Q @ self.dRbar[1]),
        )


@dataclass(frozen=True)
class ThicknessCoefficients:
    rhoM: float
    rhoB: float
    A1: float
    A2: float
    exact: bool = False


@dataclass(frozen=True)
class StrainMeasures:
    Ee: np.ndarray
    Ke: np.ndarray
    rhoM: float
    rhoB: float
    A1: float
    A2: float

    @property
    def coefficients(self) -> ThicknessCoefficients:
        return ThicknessCoefficients(self.rhoM, self.rhoB, self.A1, self.A2)


@dataclass(frozen=True)
class ReconstructedStrain:
    EsTilde: np.ndarray
    GammaS: np.ndarray
    EsFull: np.ndarray | None = None


def elastic_rotation(state: ShellState, pg: PointGeometry) -> np.ndarray:
    return state.Rbar @ pg.Q0.T


def shell_strain(state: ShellState, pg: PointGeometry) -> np.ndarray:
    Qe = elastic_rotation(state, pg)
    grad_m = outer(state.dm[0], pg.a_con[0]) + outer(state.dm[1], pg.a_con[1])
    return Qe.T @ grad_m - pg.a


def _check_rotation_derivative(Rbar: np.ndarray, dR: np.ndarray) -> None:
    W = Rbar.T @ dR
    scale = max(1.0, float(norm(dR)))
    if norm(W + W.T) / 2 > ROTATION_DERIVATIVE_TOL * scale:
        raise InconsistentRotationDerivative(
            f"Rbar^T Rbar,alpha has symmetric part {float(norm(W + W.T)) / 2:.3e}"
        )


def elastic_rotation_derivatives(state: ShellState, pg: PointGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Q_e,alpha = Rbar,alpha Q0^T + Rbar Q0,alpha^T."""
    return tuple(state.dRbar[k] @ pg.Q0.T + state.Rbar @ pg.dQ0[k].T for k in range(2))


def bending_curvature(state: ShellState, pg: PointGeometry) -> np.ndarray:
    for dR in state.dRbar:
        _check_rotation_derivative(state.Rbar, dR)
    Qe = elastic_rotation(state, pg)
    dQe = elastic_rotation_derivatives(state, pg)
    Ke = np.zeros((3, 3))
    for k in range(2):
        Ke += outer(axl(skew(Qe.T @ dQe[k]), check=False), pg.a_con[k])
    return Ke


def thickness_coefficients(
    Ee: np.ndarray, Ke: np.ndarray, pg: PointGeometry, mat: MaterialParams, exact: bool = False
) -> ThicknessCoefficients:
    """rho_m, rho_b from the plane-stress conditions and the n0 x n0 weights A1, A2.

    ``exact`` keeps the product rho_m tr(c Ke) and the 2H (1 - rho_m) term in
    rho_b; otherwise the linearized form -q tr(Ee b + c Ke) is used. A1 and
    A2 are always formed from their definitions 2H(1 - rho_m) + rho_b and
    K(rho_m - 1) - 2H rho_b.
    """
    q = mat.q
    cK = pg.c @ Ke
    rhoM = 1.0 - q * float(tr(Ee))
    if exact:
        rhoB = -q * (float(tr(Ee @ pg.b)) + rhoM * float(tr(cK)) + 2.0 * pg.H * (1.0 - rhoM))
    else:
        rhoB = -q * float(tr(Ee @ pg.b + cK))
    A1 = 2.0 * pg.H * (1.0 - rhoM) + rhoB
    A2 = pg.K * (rhoM - 1.0) - 2.0 * pg.H * rhoB
    return ThicknessCoefficients(rhoM, rhoB, A1, A2, exact)


def strain_measures(
    state: ShellState, pg: PointGeometry, mat: MaterialParams, exact: bool = False
) -> StrainMeasures:
    Ee = shell_strain(state, pg)
    Ke = bending_curvature(state, pg)
    co = thickness_coefficients(Ee, Ke, pg, mat, exact)
    return StrainMeasures(Ee, Ke, co.rhoM, co.rhoB, co.A1, co.A2)


def _shifter(pg: PointGeometry, x3: float) -> float:
    bx = float(pg.shifter(x3))
    if bx <= 0.0:
        raise ThicknessExceedsCurvature(f"b(x3) = {bx:.3e} <= 0 at x3 = {x3}")
    return bx


def _gradient_dyad(pg: PointGeometry, drho) -> np.ndarray:
    """n0 (x) rho,alpha a^alpha for a supplied pair of partials (zero if None)."""
    if drho is None:
        return np.zeros((3, 3))
    return outer(pg.n0, drho[0] * pg.a_con[0] + drho[1] * pg.a_con[1])


def tilde_strain_brackets(
    Ee: np.ndarray, Ke: np.ndarray, co: ThicknessCoefficients, pg: PointGeometry
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four tensors multiplying x3^0..x3^3 inside the braces of the simplified strain."""
    a, b, c, H, K = pg.a, pg.b, pg.c, pg.H, pg.K
    nn = pg.nn
    cK = c @ Ke
    B = b - 2.0 * H * a
    return (
        Ee + (co.rhoM - 1.0) * nn,
        Ee @ B + cK + co.A1 * nn,
        cK @ B + co.A2 * nn,
        K * co.rhoB * nn,
    )


def full_strain_verbatim(
    Ee, Ke, co: ThicknessCoefficients, pg: PointGeometry, x3: float, drho_m=None, drho_b=None
) -> np.ndarray:
    """E_s of the quadratic ansatz in the expanded x3-bracket form.

    This form exceeds :func:`full_strain_direct` by -(rho_m - 1) K x3^2 / b(x3) a;
    it is kept for comparison. ``drho_m``/``drho_b`` are the partials (rho,1, rho,2); omitted means
    constant coefficients.
    """
    bx = _shifter(pg, x3)
    a, b, c, H, K = pg.a, pg.b, pg.c, pg.H, pg.K
    B = b - 2.0 * H * a
    cK = c @ Ke
    Gm = _gradient_dyad(pg, drho_m)
    Gb = _gradient_dyad(pg, drho_b)
    rm, rb = co.rhoM, co.rhoB
    brace = (
        Ee
        + x3 * (Ee @ B + b + rm * (cK - b) + Gm)
        + x3**2 * (rm * cK @ B + 0.5 * rb * (cK - b) + Gm @ B + 0.5 * Gb)
        + 0.5 * x3**3 * (rb * cK @ B + rb * K * a + Gb @ B)
    )
    return brace / bx + ((rm - 1.0) + x3 * rb) * pg.nn


def full_strain_direct(
    Ee, Ke, co: ThicknessCoefficients, pg: PointGeometry, x3: float, drho_m=None, drho_b=None
) -> np.ndarray:
    """E_s = Q_e^T F_s - 1 assembled from the factored deformation gradient.

    Uses Q_e^T Grad_s m = Ee + a and Q_e^T Grad_s(rho d3) = rho (c Ke - b) + n0 (x) Grad rho.
    """
    bx = _shifter(pg, x3)
    a, b, c, H = pg.a, pg.b, pg.c, pg.H
    cK = c @ Ke
    left = (
        Ee
        + a
        + x3 * (co.rhoM * (cK - b) + _gradient_dyad(pg, drho_m))
        + 0.5 * x3**2 * (co.rhoB * (cK - b) + _gradient_dyad(pg, drho_b))
    )
    right = a + x3 * (b - 2.0 * H * a)
    return left @ right / bx + (co.rhoM + x3 * co.rhoB) * pg.nn - IDENTITY


def reconstructed_strain(
    Ee: np.ndarray,
    Ke: np.ndarray,
    co: ThicknessCoefficients,
    pg: PointGeometry,
    x3: float,
    full: bool = False,
) -> ReconstructedStrain:
    bx = _shifter(pg, x3)
    P0, P1, P2, P3 = tilde_strain_brackets(Ee, Ke, co, pg)
    Es = (P0 + x3 * P1 + x3**2 * P2 + x3**3 * P3) / bx
    Gs = Ke @ (pg.a + x3 * (pg.b - 2.0 * pg.H * pg.a)) / bx
    EsFull = full_strain_verbatim(Ee, Ke, co, pg, x3) if full else None
    return ReconstructedStrain(Es, Gs, EsFull)


def plane_stress_residual(
    Ee: np.ndarray, Ke: np.ndarray, co: ThicknessCoefficients, pg: PointGeometry, mat: MaterialParams
) -> tuple[float, float]:
    """Normal-normal stress and its x3-derivative at the midsurface.

    The derivative of the stress is linear in the derivative of the strain,
    which at x3 = 0 is (Ee + a) b + rho_m (c Ke - b) + rho_b n0 (x) n0.
    """
    n0 = pg.n0
    E0 = Ee + (co.rhoM - 1.0) * pg.nn
    dE0 = (Ee + pg.a) @ pg.b + co.rhoM * (pg.c @ Ke - pg.b) + co.rhoB * pg.nn
    f0 = float(n0 @ stress_s2(E0, mat) @ n0)
    f1 = float(n0 @ stress_s2(dE0, mat) @ n0)
    return f0, f1


def director_gradient_residual(state: ShellState, pg: PointGeometry) -> float:
    """|| Q_e^T Grad_s d3 - (c Ke - b) ||."""
    Qe = elastic_rotation(state, pg)
    grad_d3 = outer(state.dRbar[0][:, 2], pg.a_con[0]) + outer(state.dRbar[1][:, 2], pg.a_con[1])
    Ke = bending_curvature(state, pg)
    return float(norm(Qe.T @ grad_d3 - (pg.c @ Ke - pg.b)))


def wryness_forms(
    state: ShellState, pg: PointGeometry, tg: ThicknessGeometry
) -> tuple[np.ndarray, np.ndarray]:
    """Wryness from the elastic rotation and from the Rbar/Q0 split.

    Both use the contravariant basis g^i; the x3-partials vanish because the
    rotation fields do not depend on the thickness coordinate.
    """
    Qe = elastic_rotation(state, pg)
    dQe = elastic_rotation_derivatives(state, pg)
    g_up = tg.contravariant
    G1 = np.zeros((3, 3))
    G2 = np.zeros((3, 3))
    for k in range(2):
        G1 += outer(axl(skew(Qe.T @ dQe[k]), check=False), g_up[k])
        w = axl(skew(state.Rbar.T @ state.dRbar[k]), check=False) - axl(
            skew(pg.Q0.T @ pg.dQ0[k]), check=False
        )
        G2 += outer(pg.Q0 @ w, g_up[k])
    return G1, G2


def wryness_equivalence(state: ShellState, pg: PointGeometry, tg: ThicknessGeometry) -> float:
    G1, G2 = wryness_forms(state, pg, tg)
    return float(norm(G1 - G2))
