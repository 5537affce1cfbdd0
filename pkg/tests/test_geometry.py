import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arvaseek.geometry import (
    E1, GimbalLockError, HomTransform, inertial_to_plane, is_rotation, orthonormalize,
    plane_to_inertial, rot_to_rpy, rpy_to_rot, skew,
)

angle = st.floats(-math.pi, math.pi, allow_nan=False)
safe_pitch = st.floats(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3, allow_nan=False)


def test_identity():
    assert np.array_equal(rpy_to_rot(0, 0, 0), np.eye(3))
    assert rot_to_rpy(np.eye(3)) == (0.0, 0.0, 0.0)


def test_quarter_turn_about_z():
    np.testing.assert_allclose(rpy_to_rot(0, 0, math.pi / 2) @ E1, [0, 1, 0], atol=1e-15)


def test_matches_rz_ry_rx_product():
    r, p, y = 0.3, -0.4, 1.1
    c, s = math.cos, math.sin
    Rx = np.array([[1, 0, 0], [0, c(r), -s(r)], [0, s(r), c(r)]])
    Ry = np.array([[c(p), 0, s(p)], [0, 1, 0], [-s(p), 0, c(p)]])
    Rz = np.array([[c(y), -s(y), 0], [s(y), c(y), 0], [0, 0, 1]])
    np.testing.assert_allclose(rpy_to_rot(r, p, y), Rz @ Ry @ Rx, atol=1e-15)


@pytest.mark.parametrize("angles", [(0.0, 0.1745, 2.7052), (0.1, -0.2, 0.3), (0.0, 0.6162, 0.7854)])
def test_round_trip_examples(angles):
    R = rpy_to_rot(*angles)
    assert is_rotation(R)
    np.testing.assert_allclose(rot_to_rpy(R), angles, atol=1e-9)


def test_gimbal_lock():
    with pytest.raises(GimbalLockError):
        rot_to_rpy(rpy_to_rot(0.2, math.pi / 2, 0.1))


@given(angle, safe_pitch, angle)
def test_rpy_round_trip(r, p, y):
    R = rpy_to_rot(r, p, y)
    assert np.max(np.abs(R.T @ R - np.eye(3))) < 1e-9
    assert abs(np.linalg.det(R) - 1.0) < 1e-9
    back = rpy_to_rot(*rot_to_rpy(R))
    np.testing.assert_allclose(back, R, atol=1e-9)
    r2, p2, y2 = rot_to_rpy(R)
    assert abs(p2 - p) < 1e-9
    # roll and yaw are compared modulo 2 pi
    assert abs(math.remainder(r2 - r, 2 * math.pi)) < 1e-9
    assert abs(math.remainder(y2 - y, 2 * math.pi)) < 1e-9


def test_skew_examples():
    assert np.array_equal(skew([0, 0, 0]), np.zeros((3, 3)))
    np.testing.assert_array_equal(skew([1, 0, 0]) @ [0, 1, 0], [0, 0, 1])


@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3),
       st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3))
def test_skew_is_cross(x, y):
    S = skew(x)
    np.testing.assert_allclose(S @ y, np.cross(x, y), atol=1e-9)
    assert np.max(np.abs(S @ x)) <= 1e-12 * max(1.0, np.dot(x, x))
    np.testing.assert_array_equal(S, -S.T)


def test_orthonormalize_recovers_rotation():
    R = rpy_to_rot(0.4, -0.3, 2.0)
    noisy = R + 1e-6 * np.random.default_rng(1).standard_normal((3, 3))
    fixed = orthonormalize(noisy)
    assert np.max(np.abs(fixed.T @ fixed - np.eye(3))) < 1e-10
    assert np.max(np.abs(fixed - R)) < 1e-5


def test_homtransform_examples():
    H = HomTransform(np.eye(3), np.zeros(3))
    np.testing.assert_array_equal(plane_to_inertial(H, [1, 2, 3]), [1, 2, 3])
    H = HomTransform(np.eye(3), np.array([0, 0, -6.1268]))
    np.testing.assert_array_equal(plane_to_inertial(H, [0, 0, 0]), [0, 0, -6.1268])
    M = HomTransform.from_rpy([1, 2, 3], 0.1, 0.2, 0.3).matrix()
    assert M.shape == (4, 4)
    np.testing.assert_array_equal(M[3], [0, 0, 0, 1])


def test_homtransform_rejects_non_rotation():
    with pytest.raises(ValueError):
        HomTransform(2 * np.eye(3), np.zeros(3))


def test_round_trip_1000_random_poses():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        H = HomTransform.from_rpy(rng.uniform(-100, 100, 3), *rng.uniform(-3, 3, 3))
        p = rng.uniform(-100, 100, 3)
        assert np.max(np.abs(inertial_to_plane(H, plane_to_inertial(H, p)) - p)) < 1e-9
        assert np.max(np.abs(plane_to_inertial(H, inertial_to_plane(H, p)) - p)) < 1e-9


@settings(max_examples=200)
@given(st.lists(st.floats(-50, 50), min_size=3, max_size=3), angle, safe_pitch, angle,
       st.lists(st.floats(-50, 50), min_size=3, max_size=3))
def test_plane_round_trip_property(origin, r, p, y, point):
    H = HomTransform.from_rpy(origin, r, p, y)
    back = inertial_to_plane(H, plane_to_inertial(H, point))
    assert np.max(np.abs(back - np.asarray(point))) < 1e-9
