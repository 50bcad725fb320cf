"""Small-dimension tensor algebra on 3-vectors and 3x3 tensors.

Every function accepts stacked inputs with arbitrary leading axes
(``(..., 3)`` vectors, ``(..., 3, 3)`` tensors) unless it says otherwise,
so the same kernels serve pointwise evaluation and the vectorized solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSkew, Singular

IDENTITY = np.eye(3)
E1, E2, E3 = IDENTITY

SKEW_TOL = 1e-10
SINGULAR_DET = 1e-14


def transpose(X: np.ndarray) -> np.ndarray:
    return np.asarray(X).swapaxes(-1, -2)


def sym(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X)
    return 0.5 * (X + X.swapaxes(-1, -2))


def skew(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X)
    return 0.5 * (X - X.swapaxes(-1, -2))


def tr(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X)
    return X[..., 0, 0] + X[..., 1, 1] + X[..., 2, 2]


def dev3(X: np.ndarray) -> np.ndarray:
    return X - (tr(X) / 3.0)[..., None, None] * IDENTITY


def inner(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Frobenius product <A, B> = A_ij B_ij."""
    return np.einsum("...ij,...ij->...", A, B)


def norm(A: np.ndarray) -> np.ndarray:
    return np.sqrt(inner(A, A))


def outer(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., :, None] * v[..., None, :]


def matvec(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...j->...i", A, v)


def hat(w: np.ndarray) -> np.ndarray:
    """Skew tensor W with W v = w x v."""
    w = np.asarray(w, dtype=float)
    W = np.zeros(w.shape[:-1] + (3, 3))
    W[..., 0, 1] = -w[..., 2]
    W[..., 0, 2] = w[..., 1]
    W[..., 1, 0] = w[..., 2]
    W[..., 1, 2] = -w[..., 0]
    W[..., 2, 0] = -w[..., 1]
    W[..., 2, 1] = w[..., 0]
    return W


def axl(A: np.ndarray, check: bool = True) -> np.ndarray:
    """Axial vector of a skew tensor, axl(A) = -1/2 eps : A.

    With ``check`` the symmetric part must be below ``SKEW_TOL`` relative
    to ``max(1, |A|)``; ``NotSkew`` otherwise.
    """
    A = np.asarray(A, dtype=float)
    if check:
        bad = norm(sym(A)) > SKEW_TOL * np.maximum(1.0, norm(A))
        if np.any(bad):
            raise NotSkew(f"symmetric part too large: {np.max(norm(sym(A)))!r}")
    return 0.5 * np.stack(
        [A[..., 2, 1] - A[..., 1, 2], A[..., 0, 2] - A[..., 2, 0], A[..., 1, 0] - A[..., 0, 1]],
        axis=-1,
    )


@dataclass(frozen=True)
class PolarFactors:
    rotation: np.ndarray
    stretch: np.ndarray


def polar(F: np.ndarray) -> PolarFactors:
    """Right polar decomposition F = R U of a single 3x3 tensor.

    U = sqrt(F^T F) from a symmetric eigendecomposition, R = F U^{-1}.
    """
    F = np.asarray(F, dtype=float)
    if np.linalg.det(F) <= SINGULAR_DET:
        raise Singular(f"polar decomposition needs det F > 0, got {np.linalg.det(F)!r}")
    w, V = np.linalg.eigh(F.T @ F)
    s = np.sqrt(w)
    U = (V * s) @ V.T
    R = F @ ((V / s) @ V.T)
    return PolarFactors(rotation=R, stretch=sym(U))


def polar_rotation_derivative(F: np.ndarray, dF: np.ndarray) -> np.ndarray:
    """Directional derivative of polar(F).rotation along dF.

    With F = R U, R^T dR = W is skew and satisfies W U + U W = 2 skew(R^T dF),
    i.e. axl(W) = (tr U 1 - U)^{-1} axl(2 skew(R^T dF)).
    """
    pf = polar(F)
    R, U = pf.rotation, pf.stretch
    rhs = axl(2.0 * skew(R.T @ dF), check=False)
    w = np.linalg.solve(np.trace(U) * IDENTITY - U, rhs)
    return R @ hat(w)


def so3_exp(w: np.ndarray) -> np.ndarray:
    """Rodrigues formula, exp(hat(w)), vectorized over leading axes."""
    w = np.asarray(w, dtype=float)
    t2 = np.einsum("...i,...i->...", w, w)
    t = np.sqrt(t2)
    small = t2 < 1e-12
    safe = np.where(small, 1.0, t)
    a = np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(safe) / safe)
    b = np.where(small, 0.5 - t2 / 24.0 + t2 * t2 / 720.0, (1.0 - np.cos(safe)) / safe**2)
    W = hat(w)
    return IDENTITY + a[..., None, None] * W + b[..., None, None] * (W @ W)


def so3_right_jacobian(w: np.ndarray) -> np.ndarray:
    """J_r with d exp(hat(w)) = exp(hat(w)) hat(J_r(w) dw)."""
    w = np.asarray(w, dtype=float)
    t2 = np.einsum("...i,...i->...", w, w)
    t = np.sqrt(t2)
    small = t2 < 1e-8
    safe = np.where(small, 1.0, t)
    a = np.where(small, 0.5 - t2 / 24.0 + t2 * t2 / 720.0, (1.0 - np.cos(safe)) / safe**2)
    b = np.where(small, 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0, (safe - np.sin(safe)) / safe**3)
    W = hat(w)
    return IDENTITY - a[..., None, None] * W + b[..., None, None] * (W @ W)


def so3_log(R: np.ndarray) -> np.ndarray:
    """Rotation vector of a single rotation (angle in [0, pi])."""
    R = np.asarray(R, dtype=float)
    c = np.clip(0.5 * (np.trace(R) - 1.0), -1.0, 1.0)
    angle = np.arccos(c)
    v = axl(skew(R), check=False)
    if angle < 1e-7:
        return v
    if np.pi - angle > 1e-6:
        return v * (angle / np.sin(angle))
    # near pi: axis from the symmetric part
    B = 0.5 * (R + IDENTITY)
    k = int(np.argmax(np.diag(B)))
    axis = B[:, k] / np.sqrt(B[k, k])
    if np.dot(axis, v) < 0.0:
        axis = -axis
    return angle * axis / np.linalg.norm(axis)


def is_rotation(R: np.ndarray, tol: float = 1e-10) -> bool:
    R = np.asarray(R, dtype=float)
    return bool(
        np.all(norm(transpose(R) @ R - IDENTITY) <= tol)
        and np.all(np.abs(np.linalg.det(R) - 1.0) <= tol)
    )
