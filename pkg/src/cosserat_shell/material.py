"""Isotropic Cosserat material constants and the pointwise constitutive forms.

All forms broadcast over leading axes of ``(..., 3, 3)`` inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .tensor_core import IDENTITY, dev3, inner, skew, sym, tr


@dataclass(frozen=True)
class MaterialParams:
    """Lame constants, couple modulus, internal length, curvature weights, thickness."""

    mu: float
    lam: float
    mu_c: float
    Lc: float
    b1: float = 1.0
    b2: float = 1.0
    b3: float = 1.0
    h: float = 0.1
    kappa: float = field(init=False)

    def __post_init__(self):
        for name in ("mu", "lam", "mu_c", "Lc", "b1", "b2", "b3", "h"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"material parameter {name} must be a finite number, got {v!r}")
        object.__setattr__(self, "kappa", (3.0 * self.lam + 2.0 * self.mu) / 3.0)
        if self.mu <= 0:
            raise ConfigError("mu must be positive")
        if self.kappa <= 0:
            raise ConfigError("bulk modulus (3 lam + 2 mu)/3 must be positive")
        if self.mu_c < 0:
            raise ConfigError("mu_c must be non-negative")
        if self.Lc <= 0:
            raise ConfigError("Lc must be positive")
        if min(self.b1, self.b2, self.b3) <= 0:
            raise ConfigError("b1, b2, b3 must be positive")
        if self.h <= 0:
            raise ConfigError("thickness h must be positive")

    @property
    def q(self) -> float:
        """lam / (lam + 2 mu), the plane-stress contraction ratio."""
        return self.lam / (self.lam + 2.0 * self.mu)

    @property
    def mixt_trace_modulus(self) -> float:
        return self.lam * self.mu / (self.lam + 2.0 * self.mu)

    def with_thickness(self, h: float) -> "MaterialParams":
        return MaterialParams(self.mu, self.lam, self.mu_c, self.Lc, self.b1, self.b2, self.b3, h)


def w_mp3(S, T, mat: MaterialParams):
    return (
        mat.mu * inner(sym(S), sym(T))
        + mat.mu_c * inner(skew(S), skew(T))
        + 0.5 * mat.lam * tr(S) * tr(T)
    )


def w_mp(S, mat: MaterialParams):
    return w_mp3(S, S, mat)


def w_mp3_kappa(S, T, mat: MaterialParams):
    """Same bilinear form written with the deviatoric part and the bulk modulus."""
    return (
        mat.mu * inner(dev3(sym(S)), dev3(sym(T)))
        + mat.mu_c * inner(skew(S), skew(T))
        + 0.5 * mat.kappa * tr(S) * tr(T)
    )


def w_curv3(S, T, mat: MaterialParams):
    return (
        mat.mu
        * mat.Lc**2
        * (
            mat.b1 * inner(dev3(sym(S)), dev3(sym(T)))
            + mat.b2 * inner(skew(S), skew(T))
            + mat.b3 * tr(S) * tr(T)
        )
    )


def w_curv(S, mat: MaterialParams):
    return w_curv3(S, S, mat)


def w_mixt(S, T, mat: MaterialParams):
    return (
        mat.mu * inner(sym(S), sym(T))
        + mat.mu_c * inner(skew(S), skew(T))
        + mat.mixt_trace_modulus * tr(S) * tr(T)
    )


def w_mixt_kappa(S, T, mat: MaterialParams):
    c = 2.0 * mat.mu * (2.0 * mat.lam + mat.mu) / (3.0 * (mat.lam + 2.0 * mat.mu))
    return (
        mat.mu * inner(dev3(sym(S)), dev3(sym(T)))
        + mat.mu_c * inner(skew(S), skew(T))
        + c * tr(S) * tr(T)
    )


def w_m(S, mat: MaterialParams):
    return w_mixt(S, S, mat)


def stress_s2(E, mat: MaterialParams):
    """Biot-type stress 2 mu sym E + 2 mu_c skew E + lam tr(E) 1."""
    E = np.asarray(E, dtype=float)
    return 2.0 * mat.mu * sym(E) + 2.0 * mat.mu_c * skew(E) + mat.lam * tr(E)[..., None, None] * IDENTITY
