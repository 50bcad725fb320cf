import numpy as np
import pytest
from conftest import pg_at
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cosserat_shell.energy import (
    EnergyBreakdown,
    normal_dyad_identities,
    bending_density,
    curvature_coefficients,
    energy_density,
    integrate_energy,
    inverse_shifter_series,
    membrane_coefficients,
    membrane_density,
    reduced_membrane_coefficients,
    stress_s2,
    total_shell_energy,
    w_curv,
    w_curv3,
    w_m,
    w_mixt,
    w_mixt_kappa,
    w_mp,
    w_mp3,
    w_mp3_kappa,
)
from cosserat_shell.errors import ConfigError, StructureViolation
from cosserat_shell.fields import make_field
from cosserat_shell.kinematics import reconstructed_strain, strain_measures, thickness_coefficients
from cosserat_shell.material import MaterialParams
from cosserat_shell.surface_geometry import make_patch
from cosserat_shell.tensor_core import IDENTITY, inner, norm, outer, skew, tr

E1 = np.array([1.0, 0.0, 0.0])
tensors = arrays(np.float64, (3, 3), elements=st.floats(-5, 5, allow_nan=False))


def random_tangential(pg, rng, scale):
    return scale * rng.normal(size=(3, 3)) @ pg.a


def poly_mul(p, q, n):
    out = np.zeros(n)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            if i + j < n:
                out[i + j] += a * b
    return out


def thickness_moments(coef, h):
    """int_{-h/2}^{h/2} sum_k coef_k x^k dx, split as (h, h^3, h^5) contributions."""
    return h * coef[0], h**3 / 12 * coef[2], h**5 / 80 * coef[4]


class TestMaterial:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(mu=0.0, lam=1.0, mu_c=1.0, Lc=1.0),
            dict(mu=1.0, lam=-1.0, mu_c=1.0, Lc=1.0),
            dict(mu=1.0, lam=1.0, mu_c=-0.1, Lc=1.0),
            dict(mu=1.0, lam=1.0, mu_c=1.0, Lc=0.0),
            dict(mu=1.0, lam=1.0, mu_c=1.0, Lc=1.0, b2=0.0),
            dict(mu=1.0, lam=1.0, mu_c=1.0, Lc=1.0, h=-0.1),
            dict(mu=float("nan"), lam=1.0, mu_c=1.0, Lc=1.0),
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ConfigError):
            MaterialParams(**kw)

    def test_negative_lambda_allowed_if_bulk_positive(self):
        m = MaterialParams(mu=1.0, lam=-0.5, mu_c=0.0, Lc=1.0)
        assert m.kappa == pytest.approx(1 / 6)

    def test_with_thickness(self, mat):
        m = mat.with_thickness(0.3)
        assert m.h == 0.3 and m.mu == mat.mu and m.kappa == mat.kappa


class TestForms:
    def test_wmp_uniaxial(self):
        m = MaterialParams(mu=1.0, lam=2.0, mu_c=0.5, Lc=1.0)
        assert w_mp(outer(E1, E1), m) == pytest.approx(2.0, rel=1e-15)
        assert w_mp(np.zeros((3, 3)), m) == 0.0

    def test_mixt_identity_values(self):
        m = MaterialParams(mu=1.0, lam=1.0, mu_c=0.3, Lc=1.0)
        assert w_mixt(IDENTITY, IDENTITY, m) == pytest.approx(6.0, rel=1e-15)
        assert w_mp3(IDENTITY, IDENTITY, m) == pytest.approx(7.5, rel=1e-15)

    def test_curv_examples(self, mat, rng):
        assert w_curv(IDENTITY, mat) == pytest.approx(9 * mat.mu * mat.Lc**2 * mat.b3, rel=1e-14)
        A = skew(rng.normal(size=(3, 3)))
        assert w_curv(A, mat) == pytest.approx(mat.mu * mat.Lc**2 * mat.b2 * norm(A) ** 2, rel=1e-14)

    @given(tensors, tensors)
    def test_dual_forms(self, S, T):
        mat = MaterialParams(mu=1.0, lam=1.3, mu_c=0.7, Lc=0.3)
        scale = max(1.0, norm(S) * norm(T))
        assert abs(w_mp3(S, T, mat) - w_mp3_kappa(S, T, mat)) <= 1e-13 * scale
        assert abs(w_mixt(S, T, mat) - w_mixt_kappa(S, T, mat)) <= 1e-13 * scale
        diff = w_mp3(S, T, mat) - w_mixt(S, T, mat)
        expect = mat.lam**2 / (2 * (mat.lam + 2 * mat.mu)) * tr(S) * tr(T)
        assert abs(diff - expect) <= 1e-13 * scale

    @given(tensors, tensors, tensors, st.floats(-3, 3))
    @settings(max_examples=50)
    def test_bilinear_symmetric(self, S1, S2, T, alpha):
        mat = MaterialParams(mu=1.0, lam=1.3, mu_c=0.7, Lc=0.3, b1=1.1, b2=0.9, b3=1.2)
        for f in (w_mp3, w_curv3, w_mixt):
            lhs = f(alpha * S1 + S2, T, mat)
            rhs = alpha * f(S1, T, mat) + f(S2, T, mat)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, (abs(alpha) * norm(S1) + norm(S2)) * norm(T))
            assert abs(f(S1, T, mat) - f(T, S1, mat)) <= 1e-12 * max(1.0, norm(S1) * norm(T))

    def test_trace_free_mixt(self, mat, rng):
        S = rng.normal(size=(3, 3))
        S -= tr(S) / 3 * IDENTITY
        T = rng.normal(size=(3, 3))
        assert w_mixt(S, T, mat) == pytest.approx(w_mp3(S, T, mat), rel=1e-13)

    def test_positivity(self, mat, rng):
        for _ in range(100):
            S = rng.normal(size=(3, 3))
            assert w_mp(S, mat) > 0 and w_curv(S, mat) > 0 and w_m(S, mat) > 0

    def test_broadcast(self, mat, rng):
        S = rng.normal(size=(4, 2, 3, 3))
        assert w_mp(S, mat).shape == (4, 2)
        assert w_mp(S, mat)[1, 1] == pytest.approx(w_mp(S[1, 1], mat))


class TestStress:
    def test_uniaxial(self):
        m = MaterialParams(mu=1.0, lam=2.0, mu_c=0.4, Lc=1.0)
        assert np.allclose(stress_s2(outer(E1, E1), m), 2 * outer(E1, E1) + 2 * IDENTITY)
        assert np.array_equal(stress_s2(np.zeros((3, 3)), m), np.zeros((3, 3)))

    def test_energy_consistency(self, mat, rng):
        for _ in range(20):
            E = rng.normal(size=(3, 3))
            assert inner(stress_s2(E, mat), E) == pytest.approx(2 * w_mp(E, mat), rel=1e-13)


class TestNormalDyadIdentities:
    def test_pure_normal(self, mat):
        pg = pg_at("sphere")
        Z = np.zeros((3, 3))
        alpha = 0.3
        assert w_mp(alpha * pg.nn, mat) == pytest.approx((mat.lam + 2 * mat.mu) / 2 * alpha**2, rel=1e-14)
        r1, r2 = normal_dyad_identities(Z, Z, alpha, alpha, pg, mat)
        assert r1 <= 1e-15 and r2 <= 1e-15

    def test_random_sphere(self, mat, rng):
        pg = pg_at("sphere")
        for _ in range(50):
            S, T = random_tangential(pg, rng, 1.0), random_tangential(pg, rng, 1.0)
            r1, r2 = normal_dyad_identities(S, T, *rng.normal(size=2), pg, mat)
            scale = (1 + norm(S)) * (1 + norm(T)) * (mat.mu + mat.lam + mat.mu_c)
            assert r1 <= 1e-13 * scale and r2 <= 1e-13 * scale

    def test_rejects_normal_column(self, mat, rng):
        pg = pg_at("sphere")
        S = rng.normal(size=(3, 3))
        with pytest.raises(StructureViolation):
            normal_dyad_identities(S, np.zeros((3, 3)), 0.0, 0.0, pg, mat)


class TestCoefficients:
    def test_zero_state(self, mat):
        pg = pg_at("torus")
        Z = np.zeros((3, 3))
        co = thickness_coefficients(Z, Z, pg, mat)
        assert all(v == 0 for v in membrane_coefficients(Z, Z, co, pg, mat))
        assert all(v == 0 for v in reduced_membrane_coefficients(Z, Z, pg, mat))
        assert curvature_coefficients(Z, pg, mat) == (0.0, 0.0, 0.0)

    def test_flat(self, mat, rng):
        pg = pg_at("plane")
        Ee, Ke = random_tangential(pg, rng, 0.1), random_tangential(pg, rng, 0.1)
        co = thickness_coefficients(Ee, Ke, pg, mat)
        C = membrane_coefficients(Ee, Ke, co, pg, mat)
        assert C[5] == 0.0 and C[6] == 0.0
        assert C[0] == pytest.approx(w_m(Ee, mat), rel=1e-13)
        Cr = reduced_membrane_coefficients(Ee, Ke, pg, mat)
        cK = pg.c @ Ke
        assert Cr[1] == pytest.approx(2 * w_mixt(Ee, cK, mat), rel=1e-13)
        assert Cr[2] == pytest.approx(w_m(cK, mat), rel=1e-13)
        D = curvature_coefficients(Ke, pg, mat)
        assert D[1] == 0.0 and D[2] == 0.0

    @pytest.mark.parametrize("pname", ["torus", "sphere", "graph"])
    def test_polynomial_sampling(self, pname, mat):
        """sum C_k x3^k = W_mp(EsTilde) b(x3)^2 at 7 sampled thickness coordinates."""
        pg = pg_at(pname, 0.33, 0.71)
        sm = strain_measures(make_field("smooth", make_patch(pname)).evaluate(pg), pg, mat)
        co = sm.coefficients
        C = membrane_coefficients(sm.Ee, sm.Ke, co, pg, mat)
        for x3 in np.linspace(-0.05, 0.05, 7):
            rs = reconstructed_strain(sm.Ee, sm.Ke, co, pg, x3)
            oracle = float(w_mp(rs.EsTilde, mat)) * pg.shifter(x3) ** 2
            poly = sum(c * x3**k for k, c in enumerate(C))
            assert poly == pytest.approx(oracle, rel=1e-10)

    @pytest.mark.parametrize("pname", ["torus", "sphere", "graph", "cylinder"])
    def test_reduced_equals_raw(self, pname, mat, rng):
        for _ in range(10):
            pg = pg_at(pname, *rng.uniform(0.05, 0.95, 2))
            Ee, Ke = random_tangential(pg, rng, 0.1), random_tangential(pg, rng, 0.1)
            co = thickness_coefficients(Ee, Ke, pg, mat)
            raw = membrane_coefficients(Ee, Ke, co, pg, mat)[:5]
            red = reduced_membrane_coefficients(Ee, Ke, pg, mat)
            scale = sum(abs(v) for v in raw) + 1e-300
            for a, b in zip(raw, red):
                assert abs(a - b) <= 1e-12 * scale

    def test_curvature_sampling_sphere(self, mat, rng):
        pg = pg_at("sphere")
        Ke = random_tangential(pg, rng, 0.5)
        D = curvature_coefficients(Ke, pg, mat)
        for x3 in (-0.02, 0.005, 0.03):
            G = Ke + x3 * (Ke @ pg.b - 2 * pg.H * Ke)
            assert D[0] + D[1] * x3 + D[2] * x3**2 == pytest.approx(w_curv(G, mat), rel=1e-12)

    @pytest.mark.parametrize("H,K", [(0.3, -0.2), (-1.0, 1.0), (0.25, 0.0)])
    def test_inverse_shifter(self, H, K):
        s = inverse_shifter_series(H, K)
        for x in (1e-2, -2e-2):
            series = sum(c * x**k for k, c in enumerate(s))
            assert series == pytest.approx(1 / (1 - 2 * H * x + K * x * x), abs=40 * abs(x) ** 5)
        prod = poly_mul(s, (1.0, -2 * H, K), 5)
        assert np.allclose(prod, [1, 0, 0, 0, 0], atol=1e-14)


class TestDensities:
    @pytest.mark.parametrize("pname", ["torus", "sphere", "graph", "cylinder", "plane"])
    def test_membrane_from_raw_coefficients(self, pname, mat, rng):
        """Closed-form parts equal the truncated thickness moments of (sum C_k x^k)/b(x)."""
        pg = pg_at(pname, *rng.uniform(0.1, 0.9, 2))
        Ee, Ke = random_tangential(pg, rng, 0.1), random_tangential(pg, rng, 0.1)
        co = thickness_coefficients(Ee, Ke, pg, mat)
        C = membrane_coefficients(Ee, Ke, co, pg, mat)
        integrand = poly_mul(C, inverse_shifter_series(pg.H, pg.K), 5)
        expect = thickness_moments(integrand, mat.h)
        _, parts = membrane_density(Ee, Ke, pg, mat)
        scale = sum(abs(v) for v in expect)
        for a, b in zip(parts, expect):
            assert abs(a - b) <= 1e-12 * scale

    @pytest.mark.parametrize("pname", ["torus", "sphere", "graph", "cylinder", "plane"])
    def test_bending_from_raw_coefficients(self, pname, mat, rng):
        pg = pg_at(pname, *rng.uniform(0.1, 0.9, 2))
        Ke = random_tangential(pg, rng, 0.3)
        D = curvature_coefficients(Ke, pg, mat)
        integrand = poly_mul(D, inverse_shifter_series(pg.H, pg.K), 5)
        expect = thickness_moments(integrand, mat.h)
        _, parts = bending_density(Ke, pg, mat)
        scale = sum(abs(v) for v in expect)
        for a, b in zip(parts, expect):
            assert abs(a - b) <= 1e-12 * scale

    def test_flat_forms(self, mat, rng):
        pg = pg_at("plane")
        Ee, Ke = random_tangential(pg, rng, 0.1), random_tangential(pg, rng, 0.1)
        val, parts = membrane_density(Ee, Ke, pg, mat)
        h = mat.h
        assert parts[2] == 0.0
        assert val == pytest.approx(h * w_m(Ee, mat) + h**3 / 12 * w_m(pg.c @ Ke, mat), rel=1e-14)
        bval, bparts = bending_density(Ke, pg, mat)
        assert bparts[1:] == (0.0, 0.0)
        assert bval == pytest.approx(h * w_curv(Ke, mat), rel=1e-15)

    def test_zero(self, mat):
        pg = pg_at("sphere")
        Z = np.zeros((3, 3))
        assert energy_density(Z, Z, pg, mat).total == 0.0

    def test_breakdown_sum_check(self):
        with pytest.raises(ValueError):
            EnergyBreakdown(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, total=2.0)
        eb = EnergyBreakdown.from_parts((1.0, 2.0, 3.0), (4.0, 5.0, 6.0))
        assert eb.total == 21.0 and eb.membrane == 6.0 and eb.bending == 15.0


class TestIntegration:
    @pytest.mark.parametrize("pname", ["plane", "sphere", "torus"])
    def test_identity_field(self, pname, mat):
        patch = make_patch(pname)
        assert total_shell_energy(patch, make_field("identity", patch), mat, 4) == pytest.approx(0.0, abs=1e-28)

    def test_stretched_plate_hand_value(self):
        m = MaterialParams(mu=1.0, lam=1.0, mu_c=1.0, Lc=0.2, h=0.1)
        alpha = 1.01
        patch = make_patch("plane")
        eb = integrate_energy(patch, make_field("homogeneous_stretch", patch, alpha=alpha), m, 4)
        hand = m.h * (alpha - 1) ** 2 * (2 * m.mu + 4 * m.lam * m.mu / (m.lam + 2 * m.mu))
        assert eb.total == pytest.approx(hand, rel=1e-13)
        assert eb.bending == 0.0

    def test_positive_for_nontrivial_state(self, mat):
        patch = make_patch("torus")
        assert total_shell_energy(patch, make_field("smooth", patch), mat, 4) > 0.0

    def test_bad_order(self, mat):
        patch = make_patch("plane")
        with pytest.raises(ValueError):
            integrate_energy(patch, make_field("identity", patch), mat, 1)
