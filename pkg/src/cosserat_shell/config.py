"""Scenario files: TOML with one section per concern.

Example::

    mode = "validate"

    [patch]
    name = "torus"
    R = 2.0
    r = 0.5

    [field]
    name = "smooth"

    [material]
    mu = 1.0
    lam = 1.3
    mu_c = 0.7
    Lc = 0.3
    h = 0.02

    [validate]
    h_list = [0.04, 0.02, 0.01]
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .checks import SUITES
from .errors import ConfigError
from .fields import FIELDS, StateField, make_field
from .material import MaterialParams
from .solver import SolverConfig
from .surface_geometry import PATCHES, SurfacePatch, make_patch

MODES = ("energy", "validate", "minimize", "identities")
SECTIONS = {"mode", "patch", "field", "material", "quadrature", "energy", "validate", "minimize", "solver", "identities", "output"}
MINIMIZE_SETUPS = ("perturbed_plate", "displaced_cylinder", "reference")


@dataclass
class Scenario:
    mode: str
    patch: SurfacePatch | None = None
    field: StateField | None = None
    material: MaterialParams | None = None
    surface_order: int = 8
    thickness_order: int = 12
    cells: tuple[int, int] = (1, 1)
    samples: tuple[int, int] = (4, 4)
    h_list: list[float] = dc_field(default_factory=list)
    grid: tuple[int, int] = (12, 12)
    setup: str = "perturbed_plate"
    noise: float | None = None
    seed: int = 0
    displacement: float = 0.01
    solver: SolverConfig = dc_field(default_factory=SolverConfig)
    suites: list[str] | None = None
    output_dir: Path = Path(".")
    source: Path | None = None


def _section(raw: dict, name: str) -> dict:
    sec = raw.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return dict(sec)


def _pair(value, what: str) -> tuple[int, int]:
    try:
        a, b = value
        a, b = int(a), int(b)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a pair of integers, got {value!r}") from None
    if a < 1 or b < 1:
        raise ConfigError(f"{what} entries must be positive")
    return a, b


def _build(kind: str, registry: dict, factory, sec: dict, *args) -> Any:
    name = sec.pop("name", None)
    if name is None:
        raise ConfigError(f"[{kind}] needs a name (one of {sorted(registry)})")
    if name not in registry:
        raise ConfigError(f"unknown {kind} {name!r}; known: {sorted(registry)}")
    try:
        return factory(name, *args, **sec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [{kind}] parameters for {name!r}: {exc}") from None


def _material(sec: dict) -> MaterialParams:
    missing = [k for k in ("mu", "lam", "mu_c", "Lc") if k not in sec]
    if missing:
        raise ConfigError(f"[material] is missing {missing}")
    unknown = set(sec) - {"mu", "lam", "mu_c", "Lc", "b1", "b2", "b3", "h"}
    if unknown:
        raise ConfigError(f"[material] has unknown keys {sorted(unknown)}")
    try:
        return MaterialParams(**{k: float(v) for k, v in sec.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [material]: {exc}") from None


def parse_scenario(raw: dict, source: Path | None = None) -> Scenario:
    unknown = set(raw) - SECTIONS
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    mode = raw.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    sc = Scenario(mode=mode, source=source)

    quad = _section(raw, "quadrature")
    sc.surface_order = int(quad.get("surface_order", sc.surface_order))
    sc.thickness_order = int(quad.get("thickness_order", sc.thickness_order))
    sc.cells = _pair(quad.get("cells", sc.cells), "quadrature.cells")
    if sc.surface_order < 2 or sc.thickness_order < 2:
        raise ConfigError("quadrature orders must be >= 2")

    out = _section(raw, "output")
    if "dir" in out:
        sc.output_dir = Path(out["dir"])

    if mode == "identities":
        ident = _section(raw, "identities")
        sc.suites = ident.get("suites")
        if sc.suites is not None:
            unknown = set(sc.suites) - set(SUITES)
            if not isinstance(sc.suites, list) or unknown:
                raise ConfigError(f"identities.suites must list names from {sorted(SUITES)}")
        sc.seed = int(ident.get("seed", 0))
        if "material" in raw:
            sc.material = _material(_section(raw, "material"))
        return sc

    sc.material = _material(_section(raw, "material"))

    if mode in ("energy", "validate"):
        sc.patch = _build("patch", PATCHES, make_patch, _section(raw, "patch"))
        sc.field = _build("field", FIELDS, make_field, _section(raw, "field"), sc.patch)
    if mode == "energy":
        sc.samples = _pair(_section(raw, "energy").get("samples", sc.samples), "energy.samples")
    elif mode == "validate":
        hl = _section(raw, "validate").get("h_list")
        if not hl:
            raise ConfigError("[validate] needs a non-empty h_list")
        try:
            sc.h_list = [float(h) for h in hl]
        except (TypeError, ValueError):
            raise ConfigError("h_list must contain numbers") from None
        if any(h <= 0 for h in sc.h_list):
            raise ConfigError("every h must be positive")
        if any(b >= a for a, b in zip(sc.h_list, sc.h_list[1:])):
            raise ConfigError("h_list must be strictly decreasing")
    elif mode == "minimize":
        mn = _section(raw, "minimize")
        sc.setup = mn.get("setup", sc.setup)
        if sc.setup not in MINIMIZE_SETUPS:
            raise ConfigError(f"minimize.setup must be one of {MINIMIZE_SETUPS}")
        sc.grid = _pair(mn.get("grid", sc.grid), "minimize.grid")
        sc.noise = None if mn.get("noise") is None else float(mn["noise"])
        sc.seed = int(mn.get("seed", 0))
        sc.displacement = float(mn.get("displacement", sc.displacement))
        if "patch" in raw:
            sc.patch = _build("patch", PATCHES, make_patch, _section(raw, "patch"))
        try:
            sc.solver = SolverConfig(**_section(raw, "solver"))
        except TypeError as exc:
            raise ConfigError(f"bad [solver]: {exc}") from None
    if sc.material.h <= 0:
        raise ConfigError("h must be positive")
    return sc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    try:
        return parse_scenario(raw, path)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value in {path}: {exc}") from None
