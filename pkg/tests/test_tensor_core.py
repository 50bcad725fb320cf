import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cosserat_shell.errors import NotSkew, Singular
from cosserat_shell.tensor_core import (
    IDENTITY,
    axl,
    dev3,
    hat,
    inner,
    is_rotation,
    norm,
    polar,
    polar_rotation_derivative,
    skew,
    so3_exp,
    so3_log,
    so3_right_jacobian,
    sym,
    tr,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
mats = arrays(np.float64, (3, 3), elements=finite)
vecs = arrays(np.float64, (3,), elements=st.floats(-3, 3, allow_nan=False))


def rot_e3(t):
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


class TestParts:
    def test_identity(self):
        assert np.allclose(sym(IDENTITY), IDENTITY)
        assert np.allclose(skew(IDENTITY), 0.0)
        assert np.allclose(dev3(IDENTITY), 0.0)
        assert tr(IDENTITY) == 3.0

    def test_single_off_diagonal(self):
        X = np.zeros((3, 3))
        X[0, 1] = 1.0
        assert sym(X)[0, 1] == sym(X)[1, 0] == 0.5
        assert skew(X)[0, 1] == 0.5 and skew(X)[1, 0] == -0.5

    @given(mats)
    def test_sym_plus_skew(self, X):
        assert norm(sym(X) + skew(X) - X) <= 1e-14 * max(1.0, norm(X))

    @given(mats)
    def test_orthogonal_split(self, X):
        assert abs(inner(sym(X), skew(X))) <= 1e-12 * max(1.0, norm(X) ** 2)
        assert abs(tr(dev3(X))) <= 1e-13 * max(1.0, norm(X))

    def test_broadcast(self, rng):
        X = rng.normal(size=(4, 5, 3, 3))
        assert tr(X).shape == (4, 5)
        assert np.allclose(sym(X)[2, 3], sym(X[2, 3]))


class TestAxl:
    def test_generator(self):
        A = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        assert np.array_equal(axl(A), [0.0, 0.0, 1.0])

    def test_zero(self):
        assert np.array_equal(axl(np.zeros((3, 3))), np.zeros(3))

    @given(vecs, vecs)
    def test_cross_product(self, w, v):
        A = hat(w)
        assert np.linalg.norm(A @ v - np.cross(axl(A), v)) <= 1e-12 * max(1.0, np.linalg.norm(w) * np.linalg.norm(v))

    def test_rejects_symmetric(self):
        with pytest.raises(NotSkew):
            axl(np.diag([1.0, 2.0, 3.0]))


class TestPolar:
    def test_dilation(self):
        pf = polar(2.0 * IDENTITY)
        assert np.allclose(pf.rotation, IDENTITY, atol=1e-15)
        assert np.allclose(pf.stretch, 2.0 * IDENTITY, atol=1e-15)

    def test_pure_rotation(self):
        R = rot_e3(0.3)
        pf = polar(R)
        assert np.allclose(pf.rotation, R, atol=1e-14)
        assert np.allclose(pf.stretch, IDENTITY, atol=1e-14)

    def test_against_svd(self, rng):
        for _ in range(200):
            F = rng.normal(size=(3, 3)) + 2.0 * IDENTITY
            if np.linalg.det(F) <= 0.05:
                continue
            pf = polar(F)
            W, s, Vt = np.linalg.svd(F)
            R_svd = W @ Vt
            U_svd = Vt.T @ np.diag(s) @ Vt
            assert norm(pf.rotation @ pf.stretch - F) <= 1e-10 * norm(F)
            assert norm(pf.rotation - R_svd) <= 1e-10
            assert norm(pf.stretch - U_svd) <= 1e-10 * norm(F)
            assert is_rotation(pf.rotation)

    def test_singular(self):
        with pytest.raises(Singular):
            polar(np.diag([1.0, 1.0, 0.0]))
        with pytest.raises(Singular):
            polar(np.diag([1.0, 1.0, -1.0]))

    def test_left_equivariance(self, rng):
        F = rng.normal(size=(3, 3)) + 3.0 * IDENTITY
        Q = so3_exp(rng.normal(size=3))
        assert norm(polar(Q @ F).rotation - Q @ polar(F).rotation) <= 1e-12

    def test_rotation_derivative_fd(self, rng):
        F = rng.normal(size=(3, 3)) + 3.0 * IDENTITY
        dF = rng.normal(size=(3, 3))
        eps = 1e-6
        fd = (polar(F + eps * dF).rotation - polar(F - eps * dF).rotation) / (2 * eps)
        assert norm(polar_rotation_derivative(F, dF) - fd) <= 1e-8


class TestSO3:
    def test_exp_e3(self):
        assert np.allclose(so3_exp([0.0, 0.0, 0.3]), rot_e3(0.3), atol=1e-15)

    @given(vecs)
    @settings(max_examples=200)
    def test_exp_is_rotation(self, w):
        assert is_rotation(so3_exp(w))

    @given(arrays(np.float64, (3,), elements=st.floats(-1.0, 1.0, allow_nan=False)))
    def test_log_inverts_exp(self, w):
        assert np.linalg.norm(so3_log(so3_exp(w)) - w) <= 1e-10

    def test_log_near_pi(self):
        w = np.array([0.0, 0.6, 0.8]) * (np.pi - 1e-9)
        assert np.linalg.norm(so3_exp(so3_log(so3_exp(w))) - so3_exp(w)) <= 1e-8

    def test_small_angle_branch(self):
        w = np.array([1e-8, -2e-8, 3e-9])
        assert np.allclose(so3_exp(w), IDENTITY + hat(w), atol=1e-15)

    def test_right_jacobian_fd(self, rng):
        for w in (rng.normal(size=3), 1e-5 * rng.normal(size=3)):
            dw = rng.normal(size=3)
            eps = 1e-6
            dR = (so3_exp(w + eps * dw) - so3_exp(w - eps * dw)) / (2 * eps)
            pred = so3_exp(w) @ hat(so3_right_jacobian(w) @ dw)
            assert norm(dR - pred) <= 1e-8

    def test_vectorized(self, rng):
        w = rng.normal(size=(5, 3))
        R = so3_exp(w)
        assert R.shape == (5, 3, 3)
        assert np.allclose(R[3], so3_exp(w[3]))
