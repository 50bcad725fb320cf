"""Reference midsurface geometry and the shell parametrization Theta.

Planar surface tensors (a, b, c) are stored as full ambient 3x3 arrays
built from dyads of ambient vectors. The unit normal is
n0 = (y0,1 x y0,2) / |y0,1 x y0,2|; every curvature sign follows from that
orientation. For the built-in patches:

========  ==============================  ===========================
patch     normal                          mean curvature H
========  ==============================  ===========================
plane     +e3                             0
cylinder  outward radial                  -1/(2R)
sphere    outward radial                  -1/R
torus     outward from the tube centre    -(R + 2r cos x2) / (2r(R + r cos x2))
graph     upward (positive e3 component)  sign of the local convexity
========  ==============================  ===========================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateParametrization, ThicknessExceedsCurvature
from .tensor_core import E1, E2, E3, outer, polar, polar_rotation_derivative

Bounds = tuple[tuple[float, float], tuple[float, float]]

REGULARITY_TOL = 1e-10


class SurfacePatch:
    """A C^2 parametrization y0 : [x1 bounds] x [x2 bounds] -> R^3.

    Subclasses override ``position`` and may override the derivative
    methods with closed forms. The defaults are central differences with
    step ``1e-5 * diameter`` (first) and ``1e-4 * diameter`` (second).
    """

    name = "patch"
    analytic = False

    def __init__(self, bounds: Bounds):
        (lo1, hi1), (lo2, hi2) = bounds
        if not (hi1 > lo1 and hi2 > lo2):
            raise ValueError(f"empty parameter rectangle {bounds!r}")
        self.bounds: Bounds = ((float(lo1), float(hi1)), (float(lo2), float(hi2)))

    @property
    def diameter(self) -> float:
        (lo1, hi1), (lo2, hi2) = self.bounds
        return math.hypot(hi1 - lo1, hi2 - lo2)

    def contains(self, x1: float, x2: float, slack: float = 1e-12) -> bool:
        (lo1, hi1), (lo2, hi2) = self.bounds
        return lo1 - slack <= x1 <= hi1 + slack and lo2 - slack <= x2 <= hi2 + slack

    def position(self, x1: float, x2: float) -> np.ndarray:
        raise NotImplementedError

    def first_derivatives(self, x1: float, x2: float) -> tuple[np.ndarray, np.ndarray]:
        d = 1e-5 * self.diameter
        p = self.position
        return (
            (p(x1 + d, x2) - p(x1 - d, x2)) / (2 * d),
            (p(x1, x2 + d) - p(x1, x2 - d)) / (2 * d),
        )

    def second_derivatives(
        self, x1: float, x2: float
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(y0,11, y0,12, y0,22)."""
        d = 1e-4 * self.diameter
        p = self.position
        c = p(x1, x2)
        y11 = (p(x1 + d, x2) - 2 * c + p(x1 - d, x2)) / d**2
        y22 = (p(x1, x2 + d) - 2 * c + p(x1, x2 - d)) / d**2
        y12 = (
            p(x1 + d, x2 + d) - p(x1 + d, x2 - d) - p(x1 - d, x2 + d) + p(x1 - d, x2 - d)
        ) / (4 * d**2)
        return y11, y12, y22

    def params(self) -> dict:
        return {}

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class Plane(SurfacePatch):
    name = "plane"
    analytic = True

    def __init__(self, bounds: Bounds = ((0.0, 1.0), (0.0, 1.0))):
        super().__init__(bounds)

    def position(self, x1, x2):
        return np.array([x1, x2, 0.0])

    def first_derivatives(self, x1, x2):
        return E1.copy(), E2.copy()

    def second_derivatives(self, x1, x2):
        z = np.zeros(3)
        return z, z.copy(), z.copy()


class Cylinder(SurfacePatch):
    """y0 = (R cos x1, R sin x1, x2)."""

    name = "cylinder"
    analytic = True

    def __init__(self, R: float = 1.0, bounds: Bounds = ((0.0, math.pi / 2), (0.0, 1.0))):
        if R <= 0:
            raise ValueError("cylinder radius must be positive")
        self.R = float(R)
        super().__init__(bounds)

    def params(self):
        return {"R": self.R}

    def position(self, x1, x2):
        return np.array([self.R * math.cos(x1), self.R * math.sin(x1), x2])

    def first_derivatives(self, x1, x2):
        return np.array([-self.R * math.sin(x1), self.R * math.cos(x1), 0.0]), E3.copy()

    def second_derivatives(self, x1, x2):
        y11 = np.array([-self.R * math.cos(x1), -self.R * math.sin(x1), 0.0])
        return y11, np.zeros(3), np.zeros(3)


class Sphere(SurfacePatch):
    """y0 = R (cos x1 cos x2, sin x1 cos x2, sin x2); x2 is the latitude."""

    name = "sphere"
    analytic = True

    def __init__(
        self, R: float = 1.0, bounds: Bounds = ((0.0, math.pi / 2), (-math.pi / 4, math.pi / 4))
    ):
        if R <= 0:
            raise ValueError("sphere radius must be positive")
        self.R = float(R)
        super().__init__(bounds)

    def params(self):
        return {"R": self.R}

    def position(self, x1, x2):
        R = self.R
        return R * np.array([math.cos(x1) * math.cos(x2), math.sin(x1) * math.cos(x2), math.sin(x2)])

    def first_derivatives(self, x1, x2):
        R = self.R
        c1, s1, c2, s2 = math.cos(x1), math.sin(x1), math.cos(x2), math.sin(x2)
        return R * np.array([-s1 * c2, c1 * c2, 0.0]), R * np.array([-c1 * s2, -s1 * s2, c2])

    def second_derivatives(self, x1, x2):
        R = self.R
        c1, s1, c2, s2 = math.cos(x1), math.sin(x1), math.cos(x2), math.sin(x2)
        y11 = R * np.array([-c1 * c2, -s1 * c2, 0.0])
        y12 = R * np.array([s1 * s2, -c1 * s2, 0.0])
        y22 = R * np.array([-c1 * c2, -s1 * c2, -s2])
        return y11, y12, y22


class Torus(SurfacePatch):
    """y0 = ((R + r cos x2) cos x1, (R + r cos x2) sin x1, r sin x2), R > r."""

    name = "torus"
    analytic = True

    def __init__(
        self, R: float = 2.0, r: float = 0.5, bounds: Bounds = ((0.0, 2 * math.pi), (0.0, 2 * math.pi))
    ):
        if not (R > r > 0):
            raise ValueError("torus needs R > r > 0")
        self.R, self.r = float(R), float(r)
        super().__init__(bounds)

    def params(self):
        return {"R": self.R, "r": self.r}

    def position(self, x1, x2):
        rho = self.R + self.r * math.cos(x2)
        return np.array([rho * math.cos(x1), rho * math.sin(x1), self.r * math.sin(x2)])

    def first_derivatives(self, x1, x2):
        r = self.r
        c1, s1, c2, s2 = math.cos(x1), math.sin(x1), math.cos(x2), math.sin(x2)
        rho = self.R + r * c2
        return np.array([-rho * s1, rho * c1, 0.0]), np.array([-r * s2 * c1, -r * s2 * s1, r * c2])

    def second_derivatives(self, x1, x2):
        r = self.r
        c1, s1, c2, s2 = math.cos(x1), math.sin(x1), math.cos(x2), math.sin(x2)
        rho = self.R + r * c2
        y11 = np.array([-rho * c1, -rho * s1, 0.0])
        y12 = np.array([r * s2 * s1, -r * s2 * c1, 0.0])
        y22 = np.array([-r * c2 * c1, -r * c2 * s1, -r * s2])
        return y11, y12, y22


class Graph(SurfacePatch):
    """y0 = (x1, x2, f(x1, x2)) with f = 1/2 (k11 x1^2 + 2 k12 x1 x2 + k22 x2^2) + amp sin(w x1) sin(w x2)."""

    name = "graph"
    analytic = True

    def __init__(
        self,
        k11: float = 0.5,
        k12: float = 0.2,
        k22: float = -0.3,
        amp: float = 0.05,
        wave: float = 2.0,
        bounds: Bounds = ((-0.5, 0.5), (-0.5, 0.5)),
    ):
        self.k11, self.k12, self.k22 = float(k11), float(k12), float(k22)
        self.amp, self.wave = float(amp), float(wave)
        super().__init__(bounds)

    def params(self):
        return {"k11": self.k11, "k12": self.k12, "k22": self.k22, "amp": self.amp, "wave": self.wave}

    def _f(self, x1, x2):
        w, A = self.wave, self.amp
        s1, c1, s2, c2 = math.sin(w * x1), math.cos(w * x1), math.sin(w * x2), math.cos(w * x2)
        f = 0.5 * (self.k11 * x1 * x1 + 2 * self.k12 * x1 * x2 + self.k22 * x2 * x2) + A * s1 * s2
        f1 = self.k11 * x1 + self.k12 * x2 + A * w * c1 * s2
        f2 = self.k12 * x1 + self.k22 * x2 + A * w * s1 * c2
        f11 = self.k11 - A * w * w * s1 * s2
        f12 = self.k12 + A * w * w * c1 * c2
        f22 = self.k22 - A * w * w * s1 * s2
        return f, (f1, f2), (f11, f12, f22)

    def position(self, x1, x2):
        return np.array([x1, x2, self._f(x1, x2)[0]])

    def first_derivatives(self, x1, x2):
        _, (f1, f2), _ = self._f(x1, x2)
        return np.array([1.0, 0.0, f1]), np.array([0.0, 1.0, f2])

    def second_derivatives(self, x1, x2):
        _, _, (f11, f12, f22) = self._f(x1, x2)
        return np.array([0.0, 0.0, f11]), np.array([0.0, 0.0, f12]), np.array([0.0, 0.0, f22])


class ParametricPatch(SurfacePatch):
    """Arbitrary evaluator with finite-difference derivatives."""

    name = "parametric"

    def __init__(self, func: Callable[[float, float], np.ndarray], bounds: Bounds):
        self._func = func
        super().__init__(bounds)

    def position(self, x1, x2):
        return np.asarray(self._func(x1, x2), dtype=float)


PATCHES: dict[str, type[SurfacePatch]] = {
    cls.name: cls for cls in (Plane, Cylinder, Sphere, Torus, Graph)
}


def make_patch(name: str, **params) -> SurfacePatch:
    try:
        cls = PATCHES[name]
    except KeyError:
        raise KeyError(f"unknown patch {name!r}; known: {sorted(PATCHES)}") from None
    if "bounds" in params and params["bounds"] is not None:
        (a, b), (c, d) = params["bounds"]
        params["bounds"] = ((float(a), float(b)), (float(c), float(d)))
    else:
        params.pop("bounds", None)
    return cls(**params)


@dataclass(frozen=True)
class PointGeometry:
    """Per-point midsurface quantities, all as ambient arrays."""

    x1: float
    x2: float
    y0: np.ndarray
    a_cov: tuple[np.ndarray, np.ndarray]  # a_1, a_2
    a_con: tuple[np.ndarray, np.ndarray]  # a^1, a^2
    n0: np.ndarray
    dn0: tuple[np.ndarray, np.ndarray]  # n0,1, n0,2
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    b_mixed: np.ndarray  # (b^alpha_beta), 2x2
    H: float
    K: float
    area: float
    Q0: np.ndarray
    dQ0: tuple[np.ndarray, np.ndarray]
    second: tuple[np.ndarray, np.ndarray, np.ndarray] = field(repr=False)

    @property
    def directors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Reference directors d_i^0 = Q0 e_i."""
        return self.Q0[:, 0], self.Q0[:, 1], self.Q0[:, 2]

    @property
    def nn(self) -> np.ndarray:
        return outer(self.n0, self.n0)

    @property
    def principal_curvatures(self) -> tuple[float, float]:
        k = np.sort(np.linalg.eigvals(self.b_mixed).real)
        return float(k[0]), float(k[1])

    @property
    def grad_theta_mid(self) -> np.ndarray:
        return np.column_stack([self.a_cov[0], self.a_cov[1], self.n0])

    def shifter(self, x3) -> np.ndarray | float:
        """b(x3) = 1 - 2H x3 + K x3^2."""
        return 1.0 - 2.0 * self.H * x3 + self.K * x3 * x3


def _normal_and_derivatives(a1, a2, y11, y12, y22):
    N = np.cross(a1, a2)
    nN = float(np.linalg.norm(N))
    n0 = N / nN
    dn = []
    for dN in (np.cross(y11, a2) + np.cross(a1, y12), np.cross(y12, a2) + np.cross(a1, y22)):
        dn.append((dN - n0 * float(n0 @ dN)) / nN)
    return n0, nN, (dn[0], dn[1])


def point_geometry(patch: SurfacePatch, x1: float, x2: float) -> PointGeometry:
    if not patch.contains(x1, x2, slack=1e-9 * patch.diameter):
        raise ValueError(f"({x1}, {x2}) outside the parameter domain {patch.bounds}")
    y0 = patch.position(x1, x2)
    a1, a2 = patch.first_derivatives(x1, x2)
    if np.linalg.norm(np.cross(a1, a2)) <= REGULARITY_TOL:
        raise DegenerateParametrization(f"|y0,1 x y0,2| vanishes at ({x1}, {x2})")
    y11, y12, y22 = patch.second_derivatives(x1, x2)
    n0, _, dn0 = _normal_and_derivatives(a1, a2, y11, y12, y22)

    g = np.array([[a1 @ a1, a1 @ a2], [a2 @ a1, a2 @ a2]])
    ginv = np.linalg.inv(g)
    area = math.sqrt(np.linalg.det(g))
    up1 = ginv[0, 0] * a1 + ginv[0, 1] * a2
    up2 = ginv[1, 0] * a1 + ginv[1, 1] * a2

    # b_{ab} = n0 . y0,ab (symmetric by construction)
    b_low = np.array([[n0 @ y11, n0 @ y12], [n0 @ y12, n0 @ y22]])
    b_mixed = ginv @ b_low
    H = 0.5 * float(np.trace(b_mixed))
    K = float(np.linalg.det(b_mixed))
    ups = (up1, up2)
    b = sum(b_low[i, j] * outer(ups[i], ups[j]) for i in range(2) for j in range(2))
    a = outer(a1, up1) + outer(a2, up2)
    c = area * (outer(up1, up2) - outer(up2, up1))

    F0 = np.column_stack([a1, a2, n0])
    Q0 = polar(F0).rotation
    dF = (np.column_stack([y11, y12, dn0[0]]), np.column_stack([y12, y22, dn0[1]]))
    dQ0 = tuple(polar_rotation_derivative(F0, d) for d in dF)

    return PointGeometry(
        x1=float(x1),
        x2=float(x2),
        y0=y0,
        a_cov=(a1, a2),
        a_con=(up1, up2),
        n0=n0,
        dn0=dn0,
        a=a,
        b=b,
        c=c,
        b_mixed=b_mixed,
        H=H,
        K=K,
        area=area,
        Q0=Q0,
        dQ0=dQ0,
        second=(y11, y12, y22),
    )


@dataclass(frozen=True)
class ThicknessGeometry:
    x3: float
    bX3: float
    gradTheta: np.ndarray
    gradThetaInv: np.ndarray
    detGradTheta: float
    cofGradTheta: np.ndarray

    @property
    def contravariant(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """g^1, g^2, g^3 (rows of the inverse gradient)."""
        G = self.gradThetaInv
        return G[0], G[1], G[2]


def thickness_geometry(pg: PointGeometry, x3: float) -> ThicknessGeometry:
    bx = float(pg.shifter(x3))
    if bx <= 0.0:
        raise ThicknessExceedsCurvature(
            f"b(x3) = {bx:.3e} <= 0 at x3 = {x3} (H = {pg.H}, K = {pg.K})"
        )
    a1, a2 = pg.a_cov
    up1, up2 = pg.a_con
    n0 = pg.n0
    shift = pg.a - x3 * pg.b
    grad = np.column_stack([shift @ a1, shift @ a2, n0])

    inv_shift = (pg.a + x3 * (pg.b - 2.0 * pg.H * pg.a)) / bx
    g_up1, g_up2 = inv_shift @ up1, inv_shift @ up2
    inv = np.vstack([g_up1, g_up2, n0])

    det = pg.area * bx
    tang = pg.a + x3 * (pg.b - 2.0 * pg.H * pg.a)
    cof = pg.area * (
        outer(tang @ up1, E1) + outer(tang @ up2, E2) + (1.0 - 2.0 * pg.H * x3 + pg.K * x3 * x3) * outer(n0, E3)
    )
    return ThicknessGeometry(
        x3=float(x3), bX3=bx, gradTheta=grad, gradThetaInv=inv, detGradTheta=det, cofGradTheta=cof
    )


def initial_rotation(pg: PointGeometry, tg: ThicknessGeometry) -> np.ndarray:
    """Polar factor of grad Theta at the given thickness coordinate."""
    return polar(tg.gradTheta).rotation


def surface_gradient(pg: PointGeometry, f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    """Grad_s f = f,_alpha (x) a^alpha."""
    return outer(np.asarray(f1, float), pg.a_con[0]) + outer(np.asarray(f2, float), pg.a_con[1])
