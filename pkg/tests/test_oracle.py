import csv
import math

import pytest

from cosserat_shell import oracle
from cosserat_shell.errors import ThicknessExceedsCurvature
from cosserat_shell.fields import make_field
from cosserat_shell.material import MaterialParams
from cosserat_shell.surface_geometry import make_patch

MAT = MaterialParams(mu=1.0, lam=1.3, mu_c=0.7, Lc=0.3, b1=1.1, b2=0.9, b3=1.2, h=0.02)


def study(patch, fname, hs, surf=6, cells=(1, 1), thick=12, mat=MAT, **fparams):
    return oracle.convergence_study(patch, make_field(fname, patch, **fparams), mat, hs, surf, thick, cells)


def test_flat_exactness():
    patch = make_patch("plane")
    for r in study(patch, "smooth", [0.1, 0.01], surf=4):
        assert r.abs_error <= 1e-12 * abs(r.oracle)


def test_zero_state():
    patch = make_patch("plane")
    for r in study(patch, "identity", [0.04, 0.02], surf=3):
        assert r.analytic == 0.0 and r.oracle == 0.0 and r.abs_error == 0.0
    patch = make_patch("torus")
    for r in study(patch, "identity", [0.04, 0.02], surf=3):
        assert abs(r.analytic) <= 1e-25 and abs(r.oracle) <= 1e-25 and r.abs_error <= 1e-25


def test_report_layout():
    patch = make_patch("plane")
    reps = study(patch, "drilling", [0.1, 0.05], surf=3)
    assert [r.part for r in reps] == list(oracle.PARTS) * 2
    for part in oracle.PARTS:
        assert [r.h for r in oracle.select(reps, part)] == [0.1, 0.05]
    r = reps[0]
    assert r.error_over_h7 == r.abs_error / r.h**7
    assert r.as_row() == [r.h, r.analytic, r.oracle, r.abs_error, r.error_over_h7]


def test_thickness_order_invariance():
    patch = make_patch("torus")
    a = study(patch, "smooth", [0.04], surf=3, thick=10)
    b = study(patch, "smooth", [0.04], surf=3, thick=16)
    for ra, rb in zip(a, b):
        assert ra.oracle == pytest.approx(rb.oracle, rel=1e-14)


@pytest.mark.parametrize("fname", ["drilling", "smooth"])
def test_cylinder_order_seven(fname):
    reps = study(make_patch("cylinder", R=0.5), fname, [0.08, 0.04, 0.02])
    curv = oracle.select(reps, "curvature")
    for ratio in oracle.halving_ratios(curv):
        assert 100 <= ratio <= 160
    assert oracle.loglog_slope(curv) == pytest.approx(7.0, abs=0.4)
    bounded = [r.error_over_h7 for r in curv]
    assert max(bounded) / min(bounded) < 1.1


def test_sphere_series_is_exact():
    """At umbilic points the truncated expansion has no O(h^7) remainder."""
    reps = study(make_patch("sphere", R=1.0), "smooth", [0.04, 0.02, 0.01], cells=(2, 2))
    for r in reps:
        assert r.abs_error <= 1e-14 * abs(r.oracle)


def test_full_strain_mode_differs():
    patch = make_patch("torus")
    field = make_field("smooth", patch)
    simp = oracle.integrate_membrane_3d(patch, field, MAT, 3, 12)
    full = oracle.integrate_membrane_3d(patch, field, MAT, 3, 12, full=True)
    assert math.isfinite(full) and full != simp
    assert abs(full - simp) < abs(simp)


def test_curvature_integral_matches_study():
    patch = make_patch("torus")
    field = make_field("smooth", patch)
    c = oracle.integrate_curvature_3d(patch, field, MAT, 3, 12)
    reps = oracle.convergence_study(patch, field, MAT, [MAT.h], 3, 12)
    assert oracle.select(reps, "curvature")[0].oracle == c


def test_thickness_exceeds_curvature():
    patch = make_patch("sphere", R=1.0)
    with pytest.raises(ThicknessExceedsCurvature):
        study(patch, "smooth", [2.5], surf=2)


@pytest.mark.parametrize("hs", [[], [0.01, 0.02], [0.02, -0.01]])
def test_bad_h_list(hs):
    with pytest.raises(ValueError):
        study(make_patch("plane"), "identity", hs, surf=2)


def test_ratios_and_slope_helpers():
    reps = [oracle.OracleReport(h, 0.0, h**7) for h in (0.4, 0.2, 0.1)]
    assert oracle.halving_ratios(reps) == pytest.approx([128.0, 128.0])
    assert oracle.loglog_slope(reps) == pytest.approx(7.0)
    zero = [oracle.OracleReport(0.2, 1.0, 1.0), oracle.OracleReport(0.1, 1.0, 1.0)]
    assert oracle.halving_ratios(zero) == [math.inf]


def test_write_csv(tmp_path):
    reps = [oracle.OracleReport(0.1, 1.0 / 3.0, 0.3)]
    path = tmp_path / "v.csv"
    oracle.write_csv(path, reps)
    rows = list(csv.reader(open(path)))
    assert rows[0] == oracle.CSV_HEADER
    assert float(rows[1][1]) == 1.0 / 3.0
