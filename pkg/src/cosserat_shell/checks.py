"""Randomized invariant suites shared by the CLI ``identities`` mode and the tests.

Every suite returns a :class:`SuiteResult` holding the worst observed
residual and the tolerance it was judged against.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass

import numpy as np

from .energy import (
    normal_dyad_identities,
    bending_split,
    curvature_coefficients,
    inverse_shifter_series,
    membrane_coefficients,
    membrane_split,
    reduced_membrane_coefficients,
)
from .fields import FIELDS, make_field
from .kinematics import (
    director_gradient_residual,
    shell_strain,
    bending_curvature,
    plane_stress_residual,
    thickness_coefficients,
    wryness_equivalence,
)
from .material import MaterialParams, w_curv, w_curv3, w_m, w_mixt, w_mixt_kappa, w_mp, w_mp3, w_mp3_kappa
from .surface_geometry import PATCHES, Plane, SurfacePatch, make_patch, point_geometry, thickness_geometry
from .tensor_core import IDENTITY, norm, so3_exp, tr

DEFAULT_MATERIAL = MaterialParams(mu=1.0, lam=1.3, mu_c=0.7, Lc=0.3, b1=1.1, b2=0.9, b3=1.2, h=0.05)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    worst: float
    tol: float
    samples: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.worst) and self.worst <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name:<38s} worst={self.worst:.3e}  tol={self.tol:.1e}  n={self.samples}{extra}"


def default_patches() -> list[SurfacePatch]:
    return [make_patch(name) for name in sorted(PATCHES)]


def random_point(patch: SurfacePatch, rng, margin: float = 0.02):
    (lo1, hi1), (lo2, hi2) = patch.bounds
    u = rng.uniform(margin, 1.0 - margin, size=2)
    return lo1 + u[0] * (hi1 - lo1), lo2 + u[1] * (hi2 - lo2)


def random_tangential(pg, rng, scale: float = 1.0) -> np.ndarray:
    """A tensor S with S n0 = 0, i.e. S = S_i_gamma d_i^0 (x) a^gamma."""
    return scale * rng.normal(size=(3, 3)) @ pg.a


def rel(a, b, scale=None) -> float:
    s = max(abs(a), abs(b)) if scale is None else scale
    return abs(a - b) / s if s > 0 else abs(a - b)


def _frac(num: float, den: float) -> float:
    return num / den if den > 0 else num


def _points(patches, n, rng):
    out = []
    for k in range(n):
        p = patches[k % len(patches)]
        out.append(point_geometry(p, *random_point(p, rng)))
    return out


def geometry_suite(n_points: int = 200, seed: int = 0, patches=None) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    patches = patches or default_patches()
    worst = dict(ch=0.0, c2=0.0, d3=0.0, det=0.0, inv=0.0)
    for pg in _points(patches, n_points, rng):
        worst["ch"] = max(worst["ch"], float(norm(pg.b @ pg.b - 2 * pg.H * pg.b + pg.K * pg.a)) / max(1.0, float(norm(pg.b)) ** 2))
        worst["c2"] = max(worst["c2"], float(norm(pg.c @ pg.c + pg.a)))
        worst["d3"] = max(worst["d3"], float(np.linalg.norm(pg.Q0[:, 2] - pg.n0)))
        k = max(map(abs, pg.principal_curvatures))
        x3 = rng.uniform(-0.4, 0.4) / max(k, 1.0)
        tg = thickness_geometry(pg, x3)
        worst["det"] = max(worst["det"], rel(float(np.linalg.det(tg.gradTheta)), pg.area * tg.bX3))
        worst["inv"] = max(worst["inv"], float(norm(tg.gradTheta @ tg.gradThetaInv - IDENTITY)))
    return [
        SuiteResult("geometry: Cayley-Hamilton", worst["ch"], 1e-10, n_points),
        SuiteResult("geometry: c^2 = -a", worst["c2"], 1e-10, n_points),
        SuiteResult("geometry: d3^0 = n0", worst["d3"], 1e-10, n_points),
        SuiteResult("geometry: det grad Theta = a b(x3)", worst["det"], 1e-12, n_points),
        SuiteResult("geometry: grad Theta inverse", worst["inv"], 1e-10, n_points),
    ]


def algebra_suite(n: int = 1000, seed: int = 1, mat: MaterialParams = DEFAULT_MATERIAL, patches=None) -> list[SuiteResult]:
    """Dual forms, mixed-form identities, coefficient reductions and bracket identities.

    Residuals are relative to the sum of magnitudes of the terms that
    enter each identity, so cancellation between large terms is not
    counted against the identity.
    """
    rng = np.random.default_rng(seed)
    patches = patches or default_patches()
    pgs = _points(patches, max(10, n // 50), rng)
    lam, mu = mat.lam, mat.mu
    k_ = lam**2 / (2 * (lam + 2 * mu))
    w = {key: 0.0 for key in ("dual", "mixtdual", "mixt_trace", "dyad_expand", "dyad_absorb", "reduced", "memb3", "memb5", "curv3", "curv5")}
    for i in range(n):
        pg = pgs[i % len(pgs)]
        S, T = rng.normal(size=(2, 3, 3))
        a1 = float(w_mp(S, mat))
        a2 = float(w_mp3_kappa(S, S, mat))
        w["dual"] = max(w["dual"], rel(a1, a2, abs(a1) + abs(a2)))
        m1 = float(w_mixt(S, T, mat))
        m2 = float(w_mixt_kappa(S, T, mat))
        w["mixtdual"] = max(w["mixtdual"], rel(m1, m2, abs(mu) * float(norm(S) * norm(T)) * 3))
        rhs = float(w_mp3(S, T, mat)) - k_ * float(tr(S) * tr(T))
        w["mixt_trace"] = max(w["mixt_trace"], rel(m1, rhs, abs(float(w_mp3(S, T, mat))) + abs(k_ * float(tr(S) * tr(T)))))

        St, Tt = random_tangential(pg, rng), random_tangential(pg, rng)
        al, be = rng.normal(size=2)
        r1, r2 = normal_dyad_identities(St, Tt, al, be, pg, mat)
        sc = (mu + abs(lam) + mat.mu_c) * (float(norm(St)) + abs(al) + 1) * (float(norm(Tt)) + abs(be) + 1)
        w["dyad_expand"] = max(w["dyad_expand"], r1 / sc)
        w["dyad_absorb"] = max(w["dyad_absorb"], r2 / sc)

        Ee = random_tangential(pg, rng, 0.1)
        Ke = random_tangential(pg, rng, 0.1)
        co = thickness_coefficients(Ee, Ke, pg, mat, exact=False)
        C = membrane_coefficients(Ee, Ke, co, pg, mat)
        Cr = reduced_membrane_coefficients(Ee, Ke, pg, mat)
        sc = sum(abs(c) for c in C[:5]) + sum(abs(c) for c in Cr)
        w["reduced"] = max(w["reduced"], _frac(max(abs(x - y) for x, y in zip(C[:5], Cr)), sc))

        H, K = pg.H, pg.K
        s = inverse_shifter_series(H, K)
        b, c = pg.b, pg.c
        cK = c @ Ke
        X = Ee @ b + cK
        Y = cK @ b - 2 * H * cK
        lhs3 = s[2] * C[0] + s[1] * C[1] + C[2]
        rhs3 = -K * float(w_m(Ee, mat)) + float(w_m(X, mat)) + 2 * float(w_mixt(Ee, Y, mat))
        terms3 = abs(s[2] * C[0]) + abs(s[1] * C[1]) + abs(C[2]) + abs(rhs3)
        w["memb3"] = max(w["memb3"], _frac(abs(lhs3 - rhs3), terms3))
        lhs5 = s[4] * C[0] + s[3] * C[1] + s[2] * C[2] + s[1] * C[3] + C[4]
        rhs5 = -K * float(w_m(X, mat)) + float(w_mp(X @ b, mat))
        terms5 = sum(abs(x) for x in (s[4] * C[0], s[3] * C[1], s[2] * C[2], s[1] * C[3], C[4])) + abs(rhs5)
        w["memb5"] = max(w["memb5"], _frac(abs(lhs5 - rhs5), terms5))

        D = curvature_coefficients(Ke, pg, mat)
        Kb = Ke @ b
        l3 = s[2] * D[0] + s[1] * D[1] + D[2]
        r3 = -K * float(w_curv(Ke, mat)) + float(w_curv(Kb, mat))
        w["curv3"] = max(w["curv3"], _frac(abs(l3 - r3), abs(s[2] * D[0]) + abs(s[1] * D[1]) + abs(D[2]) + abs(r3)))
        l5 = s[4] * D[0] + s[3] * D[1] + s[2] * D[2]
        r5 = -K * float(w_curv(Kb, mat)) + float(w_curv(Kb @ b, mat))
        w["curv5"] = max(w["curv5"], _frac(abs(l5 - r5), abs(s[4] * D[0]) + abs(s[3] * D[1]) + abs(s[2] * D[2]) + abs(r5)))
    tol = 1e-11
    names = {
        "dual": "algebra: lambda vs kappa form of W_mp",
        "mixtdual": "algebra: W_mixt dual form",
        "mixt_trace": "algebra: W_mixt = W_mp3 - trace term",
        "dyad_expand": "algebra: normal-dyad expansion",
        "dyad_absorb": "algebra: normal-dyad absorption",
        "reduced": "algebra: reduced vs raw C0..C4",
        "memb3": "algebra: membrane h^3 bracket",
        "memb5": "algebra: membrane h^5 bracket",
        "curv3": "algebra: curvature h^3 bracket",
        "curv5": "algebra: curvature h^5 bracket",
    }
    return [SuiteResult(names[k], w[k], tol, n) for k in names]


def flat_limit_suite(n: int = 100, seed: int = 2, mat: MaterialParams = DEFAULT_MATERIAL) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    plane = Plane()
    worst_zero = 0.0
    worst_form = 0.0
    for _ in range(n):
        pg = point_geometry(plane, *random_point(plane, rng))
        Ee = random_tangential(pg, rng, 0.1)
        Ke = random_tangential(pg, rng, 1.0)
        p1, p3, p5 = (float(v) for v in membrane_split(Ee, Ke, pg.b, pg.c, pg.H, pg.K, mat))
        q1, q3, q5 = (float(v) for v in bending_split(Ke, pg.b, pg.K, mat))
        scale = abs(p1) + abs(p3) + abs(q1)
        worst_zero = max(worst_zero, (abs(p5) + abs(q3) + abs(q5)) / scale)
        flat = mat.h * float(w_m(Ee, mat)) + mat.h**3 / 12 * float(w_m(pg.c @ Ke, mat))
        worst_form = max(worst_form, rel(p1 + p3 + p5, flat))
    return [
        SuiteResult("flat: h^5 and curvature-coupled terms", worst_zero, 1e-13, n),
        SuiteResult("flat: membrane = h W_m(Ee) + h^3/12 W_m(cKe)", worst_form, 1e-13, n),
    ]


def plane_stress_suite(
    n: int = 100, seed: int = 3, mat: MaterialParams = DEFAULT_MATERIAL, patches=None, s0: float = 1e-3
) -> list[SuiteResult]:
    """Exact rho_b kills both residuals; the linearized rho_b leaves f1 = O(s^2) only if H = 0."""
    rng = np.random.default_rng(seed)
    patches = patches or default_patches()
    worst_exact = 0.0
    per_patch: dict[str, float] = {}
    for k, pg in enumerate(_points(patches, n, rng)):
        name = patches[k % len(patches)].name
        Ee = random_tangential(pg, rng, 0.1)
        Ke = random_tangential(pg, rng, 0.1)
        co = thickness_coefficients(Ee, Ke, pg, mat, exact=True)
        f0, f1 = plane_stress_residual(Ee, Ke, co, pg, mat)
        scale = (mat.mu + abs(mat.lam)) * (1.0 + float(norm(Ee) + norm(Ke) + norm(pg.b))) ** 2
        worst_exact = max(worst_exact, abs(f0) / scale, abs(f1) / scale)

        def g(s):
            c = thickness_coefficients(s * Ee, s * Ke, pg, mat, exact=False)
            return plane_stress_residual(s * Ee, s * Ke, c, pg, mat)[1] / s**2

        r1, r2 = g(s0), g(s0 / 2)
        dev = abs(r1 - r2) / max(abs(r1), abs(r2), 1e-300)
        per_patch[name] = max(per_patch.get(name, 0.0), dev)
    out = [SuiteResult("plane stress: exact rho_b residuals", worst_exact, 1e-12, n)]
    for name in sorted(per_patch):
        out.append(SuiteResult(f"plane stress: linear rho_b f1/s^2 [{name}]", per_patch[name], 0.05, n // len(patches)))
    return out


def kinematics_suite(seed: int = 4, patches=None) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    patches = patches or default_patches()
    wdir = wframe = wwry = 0.0
    count = 0
    for p in patches:
        for fname in sorted(FIELDS):
            field = make_field(fname, p)
            for _ in range(2):
                pg = point_geometry(p, *random_point(p, rng))
                st = field.evaluate(pg)
                wdir = max(wdir, director_gradient_residual(st, pg))
                Q = so3_exp(rng.normal(size=3))
                rot = st.rotated(Q)
                Ee, Ke = shell_strain(st, pg), bending_curvature(st, pg)
                wframe = max(
                    wframe,
                    float(norm(shell_strain(rot, pg) - Ee)),
                    float(norm(bending_curvature(rot, pg) - Ke)),
                )
                k = max(map(abs, pg.principal_curvatures))
                tg = thickness_geometry(pg, rng.uniform(-0.3, 0.3) / max(k, 1.0))
                wwry = max(wwry, wryness_equivalence(st, pg, tg))
                count += 1
    return [
        SuiteResult("kinematics: Q_e^T Grad_s d3 = cKe - b", wdir, 1e-9, count),
        SuiteResult("kinematics: frame indifference", wframe, 1e-12, count),
        SuiteResult("kinematics: wryness dual formulas", wwry, 1e-8, count),
    ]


SUITES = {
    "geometry": geometry_suite,
    "algebra": algebra_suite,
    "flat": flat_limit_suite,
    "plane_stress": plane_stress_suite,
    "kinematics": kinematics_suite,
}


def run_suites(names=None, seed: int = 0, mat: MaterialParams | None = None) -> list[SuiteResult]:
    """Run the named suites (all by default); ``mat`` replaces the default material where one is used."""
    names = list(names or SUITES)
    out = []
    for i, name in enumerate(names):
        try:
            fn = SUITES[name]
        except KeyError:
            raise KeyError(f"unknown suite {name!r}; known: {sorted(SUITES)}") from None
        kw = {"seed": seed + i}
        if mat is not None and "mat" in inspect.signature(fn).parameters:
            kw["mat"] = mat
        out += fn(**kw)
    return out
