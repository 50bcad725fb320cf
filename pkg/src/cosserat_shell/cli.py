"""Batch driver: ``shell run <config> [--output-dir DIR] [--verbose]``.

Exit status: 0 success, 1 an identity suite failed, 2 configuration error,
3 geometric domain error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import checks, oracle, solver
from .config import Scenario, load_scenario
from .energy import EnergyBreakdown, energy_density, integrate_energy
from .errors import ConfigError, DomainError, NumericalError
from .kinematics import strain_measures
from .surface_geometry import Plane, point_geometry

log = logging.getLogger("cosserat_shell")

EXIT_OK, EXIT_SUITE, EXIT_CONFIG, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3, 4


def fmt(v: float) -> str:
    return f"{v:.17g}"


def _write(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        wr.writerows(rows)
    log.info("wrote %s", path)


def run_energy(sc: Scenario, out: Path) -> int:
    n1, n2 = sc.samples
    (lo1, hi1), (lo2, hi2) = sc.patch.bounds
    rows = []
    for i, x1 in enumerate(np.linspace(lo1, hi1, n1)):
        for j, x2 in enumerate(np.linspace(lo2, hi2, n2)):
            pg = point_geometry(sc.patch, x1, x2)
            sm = strain_measures(sc.field.evaluate(pg), pg, sc.material)
            eb = energy_density(sm.Ee, sm.Ke, pg, sc.material)
            rows.append([i * n2 + j, fmt(x1), fmt(x2), fmt(pg.area), *map(fmt, eb.as_row())])
    _write(out / "energy_points.csv", ["point", "x1", "x2", "area", *EnergyBreakdown.FIELDS], rows)
    tot = integrate_energy(sc.patch, sc.field, sc.material, sc.surface_order, sc.cells)
    _write(out / "energy_total.csv", list(EnergyBreakdown.FIELDS), [list(map(fmt, tot.as_row()))])
    print(f"patch={sc.patch.name} field={sc.field.name} h={sc.material.h:g}")
    print(f"membrane  h: {tot.membH:.6e}  h^3: {tot.membH3:.6e}  h^5: {tot.membH5:.6e}")
    print(f"bending   h: {tot.bendH:.6e}  h^3: {tot.bendH3:.6e}  h^5: {tot.bendH5:.6e}")
    print(f"total energy: {tot.total:.17g}")
    return EXIT_OK


def run_validate(sc: Scenario, out: Path) -> int:
    reports = oracle.convergence_study(
        sc.patch, sc.field, sc.material, sc.h_list, sc.surface_order, sc.thickness_order, sc.cells
    )
    for part in oracle.PARTS:
        sel = oracle.select(reports, part)
        name = "validate.csv" if part == "total" else f"validate_{part}.csv"
        oracle.write_csv(out / name, sel)
        ratios = ", ".join(f"{r:.2f}" for r in oracle.halving_ratios(sel))
        slope = oracle.loglog_slope(sel) if len(sel) > 1 else float("nan")
        print(f"{part:<10s} ratios: [{ratios}]  log-log slope: {slope:.3f}")
        for r in sel:
            log.info("%s h=%g analytic=%.17g oracle=%.17g err=%.3e", part, r.h, r.analytic, r.oracle, r.abs_error)
    return EXIT_OK


def _minimize_grid(sc: Scenario) -> solver.GridDiscretization:
    n1, n2 = sc.grid
    if sc.setup == "perturbed_plate":
        if n1 != n2:
            raise ConfigError("perturbed_plate uses a square grid")
        return solver.perturbed_plate(n1, sc.material.h, sc.noise, sc.seed, sc.patch)
    if sc.setup == "displaced_cylinder":
        R = getattr(sc.patch, "R", 1.0) if sc.patch is not None else 1.0
        return solver.displaced_cylinder(n1, n2, R=R, fraction=sc.displacement)
    grid = solver.GridDiscretization.reference(sc.patch or Plane(), n1, n2)
    grid.clamp_edge("x1_min")
    return grid


def run_minimize(sc: Scenario, out: Path) -> int:
    grid = _minimize_grid(sc)
    res = solver.minimize(grid, grid.patch, sc.material, sc.solver)
    _write(
        out / "trace.csv",
        ["iteration", "energy", "gradient_norm"],
        [[k, fmt(e), fmt(g)] for k, (e, g) in enumerate(zip(res.energy_trace, res.gradient_norms))],
    )
    solver.write_grid_csv(out / "grid.csv", res.grid)
    solver.write_obj(out / "grid.obj", res.grid)
    e0, e1 = res.energy_trace[0], res.energy_trace[-1]
    g0, g1 = res.gradient_norms[0], res.gradient_norms[-1]
    print(f"setup={sc.setup} iterations={res.iterations} stop={res.reason}")
    print(f"energy {e0:.6e} -> {e1:.6e}; gradient norm {g0:.3e} -> {g1:.3e}")
    return EXIT_OK


def run_identities(sc: Scenario, out: Path) -> int:
    results = checks.run_suites(sc.suites, seed=sc.seed, mat=sc.material)
    _write(
        out / "identities.csv",
        ["check", "status", "worst", "tolerance", "samples"],
        [[r.name, "PASS" if r.passed else "FAIL", fmt(r.worst), fmt(r.tol), r.samples] for r in results],
    )
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_SUITE if failed else EXIT_OK


RUNNERS = {"energy": run_energy, "validate": run_validate, "minimize": run_minimize, "identities": run_identities}


def run(config_path, output_dir=None) -> int:
    try:
        sc = load_scenario(config_path)
        out = Path(output_dir) if output_dir is not None else sc.output_dir
        out.mkdir(parents=True, exist_ok=True)
        return RUNNERS[sc.mode](sc, out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shell", description="Reduced Cosserat shell energy toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a TOML scenario")
    r.add_argument("config", help="scenario file")
    r.add_argument("--output-dir", default=None, help="directory for CSV/OBJ outputs")
    r.add_argument("--verbose", action="store_true", help="log progress to stderr")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s"
    )
    return run(args.config, args.output_dir)


if __name__ == "__main__":
    sys.exit(main())
