"""Finite-difference grid minimization of the reduced shell energy.

Unknowns per node are the deformed midsurface point m and the elastic
rotation Q_e = exp(hat(theta)), so that Rbar = Q_e Q0. Surface derivatives
come from ``np.gradient`` (central inside, one-sided on the boundary). The
reference tangent Grad_s y0 is differentiated with the same stencil, so the
reference grid has exactly zero strain.

The objective gradient is a central finite difference on every unknown.
Because a nodal unknown only influences the energy density of its 3x3
neighbourhood, nodes on a 3-periodic colouring are perturbed together and
all 9 colours x 6 components x 2 signs are evaluated in one batched pass.
"""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .energy import bending_split, membrane_split
from .errors import ConfigError, LineSearchFailure
from .material import MaterialParams
from .surface_geometry import Cylinder, Plane, SurfacePatch, point_geometry
from .tensor_core import IDENTITY, axl, hat, outer, skew, so3_exp, so3_log, transpose

log = logging.getLogger(__name__)


@dataclass
class GridDiscretization:
    """Uniform node grid over the patch rectangle with per-node unknowns and a clamp mask."""

    patch: SurfacePatch
    n1: int
    n2: int
    m: np.ndarray  # (n1, n2, 3)
    Qe: np.ndarray  # (n1, n2, 3, 3)
    clamped: np.ndarray  # (n1, n2) bool
    geometry: dict = field(repr=False, default_factory=dict)

    @classmethod
    def reference(cls, patch: SurfacePatch, n1: int, n2: int) -> "GridDiscretization":
        if n1 < 3 or n2 < 3:
            raise ConfigError("grid needs at least 3 nodes per direction")
        (lo1, hi1), (lo2, hi2) = patch.bounds
        x1 = np.linspace(lo1, hi1, n1)
        x2 = np.linspace(lo2, hi2, n2)
        pgs = [[point_geometry(patch, u, v) for v in x2] for u in x1]
        stack = lambda f: np.array([[f(p) for p in row] for row in pgs])  # noqa: E731
        geo = {
            "x1": x1,
            "x2": x2,
            "dx": (x1[1] - x1[0], x2[1] - x2[0]),
            "y0": stack(lambda p: p.y0),
            "a_con1": stack(lambda p: p.a_con[0]),
            "a_con2": stack(lambda p: p.a_con[1]),
            "b": stack(lambda p: p.b),
            "c": stack(lambda p: p.c),
            "H": stack(lambda p: p.H),
            "K": stack(lambda p: p.K),
            "area": stack(lambda p: p.area),
            "Q0": stack(lambda p: p.Q0),
            "n0": stack(lambda p: p.n0),
        }
        w1 = np.full(n1, geo["dx"][0])
        w1[[0, -1]] *= 0.5
        w2 = np.full(n2, geo["dx"][1])
        w2[[0, -1]] *= 0.5
        geo["weight"] = np.outer(w1, w2) * geo["area"]
        y0 = geo["y0"]
        geo["ref_grad"] = _grad_s(y0, geo)
        return cls(
            patch=patch,
            n1=n1,
            n2=n2,
            m=y0.copy(),
            Qe=np.broadcast_to(IDENTITY, (n1, n2, 3, 3)).copy(),
            clamped=np.zeros((n1, n2), dtype=bool),
            geometry=geo,
        )

    def copy(self) -> "GridDiscretization":
        return replace(self, m=self.m.copy(), Qe=self.Qe.copy(), clamped=self.clamped.copy())

    @property
    def free(self) -> np.ndarray:
        return ~self.clamped

    @property
    def theta(self) -> np.ndarray:
        return np.array([[so3_log(Q) for Q in row] for row in self.Qe])

    @property
    def Rbar(self) -> np.ndarray:
        return self.Qe @ self.geometry["Q0"]

    def clamp_edge(self, edge: str) -> None:
        idx = {"x1_min": (0, slice(None)), "x1_max": (-1, slice(None)),
               "x2_min": (slice(None), 0), "x2_max": (slice(None), -1)}
        try:
            self.clamped[idx[edge]] = True
        except KeyError:
            raise ConfigError(f"unknown edge {edge!r}; use one of {sorted(idx)}") from None

    def edge_mask(self, edge: str) -> np.ndarray:
        mask = np.zeros_like(self.clamped)
        tmp, self.clamped = self.clamped, mask
        try:
            self.clamp_edge(edge)
        finally:
            self.clamped = tmp
        return mask


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 5000
    gradient_tolerance: float = 1e-12
    initial_step: float = 1.0
    backtracking: float = 0.5
    fd_step: float = 1e-7
    armijo: float = 1e-4
    min_step: float = 1e-20
    energy_tolerance: float = 0.0

    def __post_init__(self):
        if self.max_iterations <= 0 or self.gradient_tolerance < 0 or self.initial_step <= 0:
            raise ConfigError("solver iterations, tolerance and initial step must be positive")
        if not (0.0 < self.backtracking < 1.0):
            raise ConfigError("backtracking factor must lie in (0, 1)")
        if self.fd_step <= 0 or not (0.0 < self.armijo < 1.0) or self.min_step <= 0:
            raise ConfigError("fd_step, min_step must be positive and armijo in (0, 1)")


def _grad_s(f: np.ndarray, geo: dict) -> np.ndarray:
    """f,_alpha (x) a^alpha for nodal vectors f of shape (..., n1, n2, 3)."""
    d1, d2 = geo["dx"]
    f1 = np.gradient(f, d1, axis=-3, edge_order=1)
    f2 = np.gradient(f, d2, axis=-2, edge_order=1)
    return outer(f1, geo["a_con1"]) + outer(f2, geo["a_con2"])


def nodal_strains(m: np.ndarray, Qe: np.ndarray, geo: dict) -> tuple[np.ndarray, np.ndarray]:
    """Discrete Ee and Ke at every node; broadcasts over leading batch axes."""
    d1, d2 = geo["dx"]
    QeT = transpose(Qe)
    Ee = QeT @ _grad_s(m, geo) - geo["ref_grad"]
    dQ1 = np.gradient(Qe, d1, axis=-4, edge_order=1)
    dQ2 = np.gradient(Qe, d2, axis=-3, edge_order=1)
    Ke = outer(axl(skew(QeT @ dQ1), check=False), geo["a_con1"]) + outer(
        axl(skew(QeT @ dQ2), check=False), geo["a_con2"]
    )
    return Ee, Ke


def nodal_energy(m: np.ndarray, Qe: np.ndarray, geo: dict, mat: MaterialParams) -> np.ndarray:
    """Quadrature-weighted energy contribution of every node."""
    Ee, Ke = nodal_strains(m, Qe, geo)
    p1, p3, p5 = membrane_split(Ee, Ke, geo["b"], geo["c"], geo["H"], geo["K"], mat)
    q1, q3, q5 = bending_split(Ke, geo["b"], geo["K"], mat)
    return geo["weight"] * ((p1 + p3 + p5) + (q1 + q3 + q5))


def assemble_energy(grid: GridDiscretization, patch: SurfacePatch | None, mat: MaterialParams) -> float:
    """Composite trapezoid sum of (W_memb + W_bend) a over the nodes."""
    return float(np.sum(nodal_energy(grid.m, grid.Qe, grid.geometry, mat)))


def _color_masks(n1: int, n2: int) -> np.ndarray:
    i = np.arange(n1)[:, None] % 3
    j = np.arange(n2)[None, :] % 3
    return np.stack([(i == r) & (j == s) for r in range(3) for s in range(3)])


def _neighbourhood_sum(e: np.ndarray) -> np.ndarray:
    """Sum of e over the 3x3 neighbourhood of every node (zero padding)."""
    p = np.pad(e, [(0, 0)] * (e.ndim - 2) + [(1, 1), (1, 1)])
    n1, n2 = e.shape[-2:]
    return sum(p[..., 1 + di : 1 + di + n1, 1 + dj : 1 + dj + n2] for di in (-1, 0, 1) for dj in (-1, 0, 1))


def fd_gradient(grid: GridDiscretization, mat: MaterialParams, eps: float = 1e-7) -> np.ndarray:
    """Central-difference gradient, shape (n1, n2, 6): d/dm then d/dtheta (left rotation increments)."""
    geo = grid.geometry
    masks = _color_masks(grid.n1, grid.n2)  # (9, n1, n2)
    nc = masks.shape[0]
    # batch layout: (color, component, sign)
    m = np.broadcast_to(grid.m, (nc, 6, 2) + grid.m.shape).copy()
    Qe = np.broadcast_to(grid.Qe, (nc, 6, 2) + grid.Qe.shape).copy()
    signs = np.array([1.0, -1.0])
    for k in range(3):
        delta = np.zeros(3)
        delta[k] = eps
        for si, s in enumerate(signs):
            m[:, k, si] += s * masks[..., None] * delta
            R = so3_exp(s * delta)
            rot = np.where(masks[..., None, None], R, IDENTITY)
            Qe[:, 3 + k, si] = rot @ Qe[:, 3 + k, si]
    e = nodal_energy(m, Qe, geo, mat)  # (9, 6, 2, n1, n2)
    diff = (e[:, :, 0] - e[:, :, 1]) / (2.0 * eps)  # (9, 6, n1, n2)
    local = _neighbourhood_sum(diff)
    g = np.einsum("cij,ckij->ijk", masks.astype(float), local)
    g[grid.clamped] = 0.0
    return g


def _apply_step(grid: GridDiscretization, step: np.ndarray) -> GridDiscretization:
    out = grid.copy()
    free = grid.free
    out.m[free] = grid.m[free] + step[free][:, :3]
    out.Qe[free] = so3_exp(step[free][:, 3:]) @ grid.Qe[free]
    return out


@dataclass
class MinimizeResult:
    grid: GridDiscretization
    energy_trace: list[float]
    gradient_norms: list[float]
    converged: bool
    reason: str

    @property
    def iterations(self) -> int:
        return len(self.energy_trace) - 1


def minimize(
    grid: GridDiscretization, patch: SurfacePatch | None, mat: MaterialParams, cfg: SolverConfig = SolverConfig()
) -> MinimizeResult:
    """Gradient descent with Armijo backtracking; trial steps from the Barzilai-Borwein quotient."""
    if not grid.clamped.any():
        raise ConfigError("at least one clamped node is required")
    if mat.mu_c == 0.0:
        warnings.warn("mu_c = 0: minimizers of the shell energy need not exist", RuntimeWarning, stacklevel=2)
    cur = grid.copy()
    E = assemble_energy(cur, patch, mat)
    g = fd_gradient(cur, mat, cfg.fd_step)
    trace, gnorms = [E], [float(np.linalg.norm(g))]
    alpha = cfg.initial_step
    prev = None
    reason = "max_iterations"
    for it in range(cfg.max_iterations):
        gn2 = float(np.sum(g * g))
        if np.sqrt(gn2) <= cfg.gradient_tolerance:
            reason = "gradient_tolerance"
            break
        if E <= cfg.energy_tolerance:
            reason = "energy_tolerance"
            break
        if prev is not None:
            s, y = prev
            sy = float(np.sum(s * y))
            if sy > 0:
                alpha = sy / float(np.sum(y * y)) if it % 2 else float(np.sum(s * s)) / sy
        t = alpha
        while True:
            trial = _apply_step(cur, -t * g)
            Et = assemble_energy(trial, patch, mat)
            if Et <= E - cfg.armijo * t * gn2:
                break
            t *= cfg.backtracking
            if t < cfg.min_step:
                raise LineSearchFailure(f"no sufficient decrease at iteration {it}, energy {E:.6e}")
        gt = fd_gradient(trial, mat, cfg.fd_step)
        prev = (-t * g, gt - g)
        cur, E, g = trial, Et, gt
        trace.append(E)
        gnorms.append(float(np.linalg.norm(g)))
        log.debug("iter %d energy %.6e |g| %.3e step %.3e", it, E, gnorms[-1], t)
    converged = reason != "max_iterations"
    return MinimizeResult(cur, trace, gnorms, converged, reason)


def write_grid_csv(path, grid: GridDiscretization) -> None:
    geo = grid.geometry
    theta = grid.theta
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["node", "i", "j", "x1", "x2", "m1", "m2", "m3", "theta1", "theta2", "theta3", "clamped"])
        for i in range(grid.n1):
            for j in range(grid.n2):
                vals = [geo["x1"][i], geo["x2"][j], *grid.m[i, j], *theta[i, j]]
                wr.writerow([i * grid.n2 + j, i, j, *(f"{v:.17g}" for v in vals), int(grid.clamped[i, j])])


def write_obj(path, grid: GridDiscretization) -> None:
    with open(path, "w") as fh:
        fh.write(f"# {grid.n1}x{grid.n2} deformed midsurface\n")
        for i in range(grid.n1):
            for j in range(grid.n2):
                fh.write("v {:.17g} {:.17g} {:.17g}\n".format(*grid.m[i, j]))
        vid = lambda i, j: i * grid.n2 + j + 1  # noqa: E731
        for i in range(grid.n1 - 1):
            for j in range(grid.n2 - 1):
                fh.write(f"f {vid(i, j)} {vid(i + 1, j)} {vid(i + 1, j + 1)} {vid(i, j + 1)}\n")


def perturbed_plate(
    n: int = 12, h: float = 0.1, amplitude: float | None = None, seed: int = 0, patch: SurfacePatch | None = None
) -> GridDiscretization:
    """Flat unit plate clamped on x1 = 0 with random interior noise of size 1e-3 h."""
    grid = GridDiscretization.reference(patch or Plane(), n, n)
    grid.clamp_edge("x1_min")
    amp = 1e-3 * h if amplitude is None else amplitude
    rng = np.random.default_rng(seed)
    free = grid.free
    grid.m[free] += amp * rng.uniform(-1.0, 1.0, size=(int(free.sum()), 3))
    grid.Qe[free] = so3_exp(amp * rng.uniform(-1.0, 1.0, size=(int(free.sum()), 3)))
    return grid


def displaced_cylinder(n1: int = 12, n2: int = 12, R: float = 1.0, fraction: float = 0.01) -> GridDiscretization:
    """Cylinder clamped on x2 = min, with the x2 = max edge held displaced radially by fraction R."""
    grid = GridDiscretization.reference(Cylinder(R=R), n1, n2)
    grid.clamp_edge("x2_min")
    top = grid.edge_mask("x2_max")
    grid.m[top] += fraction * R * grid.geometry["n0"][top]
    grid.clamped |= top
    return grid
