"""The eight acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line; the lines are printed as they run
and again in the terminal summary.
"""

import time

import numpy as np
from conftest import ACCEPTANCE_LINES

from cosserat_shell import checks, oracle, solver
from cosserat_shell.fields import make_field
from cosserat_shell.material import MaterialParams
from cosserat_shell.surface_geometry import make_patch


def report(n, ok, text, elapsed, budget):
    ok = ok and elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text} [{elapsed:.2f} s, budget {budget:g} s]"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok


def suite_text(results):
    return "; ".join(f"{r.name} {r.worst:.2e}/{r.tol:.0e}{'' if r.passed else ' FAIL'}" for r in results)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_1_flat_degeneration():
    res, dt = timed(lambda: checks.flat_limit_suite(100))
    assert report(1, all(r.passed for r in res), suite_text(res), dt, 1.0)


def test_criterion_2_order_seven():
    mat = MaterialParams(mu=1.0, lam=1.3, mu_c=0.7, Lc=0.3, b1=1.1, b2=0.9, b3=1.2, h=0.02)
    hs = [0.04, 0.02, 0.01]
    cases = [("sphere", dict(R=1.0)), ("torus", dict(R=2.0, r=0.5))]

    def run():
        out = {}
        for name, params in cases:
            patch = make_patch(name, **params)
            field = make_field("smooth", patch, u_amp=0.05, phi_amp=0.1)
            out[name] = oracle.convergence_study(patch, field, mat, hs, surf_order=6, cells=(2, 2))
        return out

    studies, dt = timed(run)
    ok = True
    parts = []
    for name, reps in studies.items():
        for part in ("membrane", "curvature"):
            sel = oracle.select(reps, part)
            ratios = oracle.halving_ratios(sel)
            slope = oracle.loglog_slope(sel)
            good = all(100 <= r <= 160 for r in ratios) and abs(slope - 7.0) <= 0.4
            ok &= good
            errs = ", ".join(f"{r.abs_error:.1e}" for r in sel)
            parts.append(
                f"{name}/{part} ratios [{', '.join(f'{r:.1f}' for r in ratios)}] slope {slope:.2f}"
                f" errors [{errs}]{'' if good else ' FAIL'}"
            )
    assert report(2, ok, "; ".join(parts), dt, 30.0)


def test_criterion_3_flat_plate_exactness():
    mat = MaterialParams(mu=1.0, lam=1.3, mu_c=0.7, Lc=0.3, b1=1.1, b2=0.9, b3=1.2, h=0.1)
    patch = make_patch("plane")

    def run():
        return oracle.convergence_study(patch, make_field("smooth", patch), mat, [0.1, 0.01], surf_order=6)

    reps, dt = timed(run)
    worst = max(r.rel_error for r in reps)
    assert report(3, worst <= 1e-12, f"worst relative error {worst:.2e} (tol 1e-12)", dt, 5.0)


def test_criterion_4_geometry_suite():
    res, dt = timed(lambda: checks.geometry_suite(200))
    assert report(4, all(r.passed for r in res), suite_text(res), dt, 2.0)


def test_criterion_5_algebra_suite():
    res, dt = timed(lambda: checks.algebra_suite(1000))
    assert report(5, all(r.passed for r in res), suite_text(res), dt, 2.0)


def test_criterion_6_plane_stress():
    res, dt = timed(lambda: checks.plane_stress_suite(100))
    assert report(6, all(r.passed for r in res), suite_text(res), dt, 2.0)


def test_criterion_7_kinematics():
    res, dt = timed(lambda: checks.kinematics_suite())
    assert report(7, all(r.passed for r in res), suite_text(res), dt, 2.0)


def test_criterion_8_solver():
    mat = MaterialParams(mu=1.0, lam=1.0, mu_c=1.0, Lc=0.2, h=0.1)

    def run():
        ref = solver.GridDiscretization.reference(make_patch("plane"), 12, 12)
        ref_energy = solver.assemble_energy(ref, None, mat)
        ref_grad = float(np.max(np.abs(solver.fd_gradient(ref, mat))))
        plate = solver.minimize(
            solver.perturbed_plate(12, h=mat.h), None, mat, solver.SolverConfig(gradient_tolerance=1e-9)
        )
        cyl = solver.minimize(
            solver.displaced_cylinder(10, 10, R=1.0, fraction=0.01),
            None,
            mat,
            solver.SolverConfig(gradient_tolerance=1e-6),
        )
        return ref_energy, ref_grad, plate, cyl

    (ref_energy, ref_grad, plate, cyl), dt = timed(run)
    drop = plate.energy_trace[-1] / plate.energy_trace[0]
    monotone = all(np.all(np.diff(r.energy_trace) <= 0.0) for r in (plate, cyl))
    ok = drop <= 1e-6 and monotone and abs(ref_energy) <= 1e-20 and ref_grad <= 1e-12
    text = (
        f"plate energy ratio {drop:.2e} after {plate.iterations} iterations (tol 1e-6); "
        f"cylinder gradient reduced {cyl.gradient_norms[0] / cyl.gradient_norms[-1]:.1e}x in {cyl.iterations} iterations; "
        f"traces monotone: {monotone}; reference energy {ref_energy:.1e}, max |grad| {ref_grad:.1e}"
    )
    assert report(8, ok, text, dt, 60.0)
