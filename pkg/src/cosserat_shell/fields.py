"""Closed-form midsurface deformation and microrotation fields.

Every field has the form

    m = y0 + u(x1, x2),    Rbar = exp(hat(phi(x1, x2))) Q0 Rc,

with a displacement u, an ambient rotation vector phi and a constant right
factor Rc. Fields supply u, phi and their partials; ``evaluate`` turns them
into a :class:`ShellState` with exact derivatives via the right Jacobian of
the exponential map. Parameter coordinates are normalized to t in [0, 1]^2
over the patch rectangle, so one set of field constants works on any patch.
"""

from __future__ import annotations

import math

import numpy as np

from .kinematics import ShellState
from .surface_geometry import PointGeometry, SurfacePatch
from .tensor_core import IDENTITY, hat, so3_exp, so3_right_jacobian

ZERO3 = np.zeros(3)


class StateField:
    name = "field"

    def __init__(self, patch: SurfacePatch):
        self.patch = patch
        (lo1, hi1), (lo2, hi2) = patch.bounds
        self._lo = np.array([lo1, lo2])
        self._span = np.array([hi1 - lo1, hi2 - lo2])
        self.right = IDENTITY.copy()

    def normalized(self, pg: PointGeometry) -> tuple[np.ndarray, np.ndarray]:
        """t = (x - lo)/span and dt_alpha/dx_alpha."""
        t = (np.array([pg.x1, pg.x2]) - self._lo) / self._span
        return t, 1.0 / self._span

    def displacement(self, pg: PointGeometry):
        return ZERO3, (ZERO3, ZERO3)

    def rotation_vector(self, pg: PointGeometry):
        return ZERO3, (ZERO3, ZERO3)

    def evaluate(self, pg: PointGeometry) -> ShellState:
        u, du = self.displacement(pg)
        phi, dphi = self.rotation_vector(pg)
        R = so3_exp(phi)
        J = so3_right_jacobian(phi)
        Rc = self.right
        Rbar = R @ pg.Q0 @ Rc
        dRbar = tuple(R @ hat(J @ dphi[k]) @ pg.Q0 @ Rc + R @ pg.dQ0[k] @ Rc for k in range(2))
        return ShellState(
            m=pg.y0 + u,
            dm=(pg.a_cov[0] + du[0], pg.a_cov[1] + du[1]),
            Rbar=Rbar,
            dRbar=dRbar,
        )

    def params(self) -> dict:
        return {}


class IdentityField(StateField):
    name = "identity"


class HomogeneousStretch(StateField):
    """m = alpha y0, Rbar = Q0."""

    name = "homogeneous_stretch"

    def __init__(self, patch, alpha: float = 1.01):
        super().__init__(patch)
        self.alpha = float(alpha)

    def params(self):
        return {"alpha": self.alpha}

    def displacement(self, pg):
        s = self.alpha - 1.0
        return s * pg.y0, (s * pg.a_cov[0], s * pg.a_cov[1])


class DrillingField(StateField):
    """Rotation about the normal by theta = amp sin(pi t1) + slope t1."""

    name = "drilling"

    def __init__(self, patch, amp: float = 0.1, slope: float = 0.05):
        super().__init__(patch)
        self.amp, self.slope = float(amp), float(slope)

    def params(self):
        return {"amp": self.amp, "slope": self.slope}

    def theta(self, pg):
        t, s = self.normalized(pg)
        th = self.amp * math.sin(math.pi * t[0]) + self.slope * t[0]
        dth = (self.amp * math.pi * math.cos(math.pi * t[0]) + self.slope) * s[0]
        return th, dth

    def rotation_vector(self, pg):
        th, dth = self.theta(pg)
        return th * pg.n0, (dth * pg.n0 + th * pg.dn0[0], th * pg.dn0[1])


class NormalBending(StateField):
    """m = y0 + w n0 with w = amp sin(pi t1) sin(pi t2), Rbar = Q0."""

    name = "normal_bending"

    def __init__(self, patch, amp: float = 0.01):
        super().__init__(patch)
        self.amp = float(amp)

    def params(self):
        return {"amp": self.amp}

    def displacement(self, pg):
        t, s = self.normalized(pg)
        p1, p2 = math.pi * t[0], math.pi * t[1]
        w = self.amp * math.sin(p1) * math.sin(p2)
        w1 = self.amp * math.pi * math.cos(p1) * math.sin(p2) * s[0]
        w2 = self.amp * math.pi * math.sin(p1) * math.cos(p2) * s[1]
        return w * pg.n0, (w1 * pg.n0 + w * pg.dn0[0], w2 * pg.n0 + w * pg.dn0[1])


class ComposedRotation(StateField):
    """Rbar = Q0 exp(hat(psi)) for a constant psi, m = y0."""

    name = "composed"

    def __init__(self, patch, psi=(0.1, -0.2, 0.15)):
        super().__init__(patch)
        self.psi = np.asarray(psi, dtype=float)
        self.right = so3_exp(self.psi)

    def params(self):
        return {"psi": self.psi.tolist()}


class SmoothField(StateField):
    """Generic smooth state: every component a sum of two product-of-sines modes.

    u_i = U sum_j c_ij sin(w_ij1 t1 + p_ij1) sin(w_ij2 t2 + p_ij2) and the
    same for phi with amplitude P. Mode constants come from ``seed``.
    """

    name = "smooth"

    def __init__(self, patch, u_amp: float = 0.02, phi_amp: float = 0.05, seed: int = 7):
        super().__init__(patch)
        self.u_amp, self.phi_amp, self.seed = float(u_amp), float(phi_amp), int(seed)
        rng = np.random.default_rng(self.seed)
        self._modes = {
            key: (
                rng.uniform(-1.0, 1.0, size=(3, 2)),
                rng.uniform(0.5, 3.0, size=(3, 2, 2)),
                rng.uniform(0.0, 2 * math.pi, size=(3, 2, 2)),
            )
            for key in ("u", "phi")
        }

    def params(self):
        return {"u_amp": self.u_amp, "phi_amp": self.phi_amp, "seed": self.seed}

    def _series(self, key, amp, pg):
        t, s = self.normalized(pg)
        c, w, p = self._modes[key]
        arg1 = w[..., 0] * t[0] + p[..., 0]
        arg2 = w[..., 1] * t[1] + p[..., 1]
        s1, c1, s2, c2 = np.sin(arg1), np.cos(arg1), np.sin(arg2), np.cos(arg2)
        v = amp * np.sum(c * s1 * s2, axis=1)
        v1 = amp * np.sum(c * w[..., 0] * c1 * s2, axis=1) * s[0]
        v2 = amp * np.sum(c * w[..., 1] * s1 * c2, axis=1) * s[1]
        return v, (v1, v2)

    def displacement(self, pg):
        return self._series("u", self.u_amp, pg)

    def rotation_vector(self, pg):
        return self._series("phi", self.phi_amp, pg)


FIELDS: dict[str, type[StateField]] = {
    cls.name: cls
    for cls in (IdentityField, HomogeneousStretch, DrillingField, NormalBending, ComposedRotation, SmoothField)
}


def make_field(name: str, patch: SurfacePatch, **params) -> StateField:
    try:
        cls = FIELDS[name]
    except KeyError:
        raise KeyError(f"unknown state field {name!r}; known: {sorted(FIELDS)}") from None
    return cls(patch, **params)
