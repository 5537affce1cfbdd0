"""Frames and rotation helpers.

Rotations follow the roll-pitch-yaw convention built from extrinsic
elementary rotations about x, y, z, i.e. ``R = Rz(yaw) @ Ry(pitch) @ Rx(roll)``.
All rotations are plain 3x3 ``numpy`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

E1 = np.array([1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])

GIMBAL_TOL = 1e-9


class GimbalLockError(ValueError):
    """Raised when roll and yaw cannot be separated (pitch at +-pi/2)."""


def skew(x) -> np.ndarray:
    """Skew-symmetric matrix such that ``skew(x) @ y == np.cross(x, y)``."""
    return np.array([[0.0, -x[2], x[1]],
                     [x[2], 0.0, -x[0]],
                     [-x[1], x[0], 0.0]])


def rpy_to_rot(roll: float, pitch: float, yaw: float) -> np.ndarray:
    cr, sr = np.cos(roll), np.sin(roll)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cy, sy = np.cos(yaw), np.sin(yaw)
    return np.array([
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ])


def rot_to_rpy(R) -> tuple[float, float, float]:
    """Inverse of :func:`rpy_to_rot`, returning ``(roll, pitch, yaw)``.

    Raises
    ------
    GimbalLockError
        If ``|R[2, 0]| > 1 - 1e-9``.
    """
    r20 = R[2, 0]
    if abs(r20) > 1.0 - GIMBAL_TOL:
        raise GimbalLockError(f"pitch at gimbal lock (R[2,0]={r20:.12f})")
    pitch = -np.arcsin(r20)
    roll = np.arctan2(R[2, 1], R[2, 2])
    yaw = np.arctan2(R[1, 0], R[0, 0])
    return float(roll), float(pitch), float(yaw)


def orthonormalize(R) -> np.ndarray:
    """One Newton step of the polar projection onto SO(3).

    Cheap enough to call after every integrator step; for an input already
    within ``eps`` of SO(3) the result is within ``O(eps**2)``.
    """
    return R @ (1.5 * np.eye(3) - 0.5 * (R.T @ R))


def is_rotation(R, tol: float = 1e-9) -> bool:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    return (np.max(np.abs(R.T @ R - np.eye(3))) < tol
            and abs(np.linalg.det(R) - 1.0) < tol)


@dataclass(frozen=True)
class HomTransform:
    """Rigid transform mapping coordinates in a child frame to a parent frame."""

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    origin: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        rot = np.asarray(self.rotation, dtype=float)
        org = np.asarray(self.origin, dtype=float).reshape(3)
        if not is_rotation(rot):
            raise ValueError("HomTransform.rotation is not a valid rotation")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "origin", org)

    @classmethod
    def from_rpy(cls, origin, roll: float, pitch: float, yaw: float) -> "HomTransform":
        return cls(rpy_to_rot(roll, pitch, yaw), np.asarray(origin, dtype=float))

    def matrix(self) -> np.ndarray:
        H = np.eye(4)
        H[:3, :3] = self.rotation
        H[:3, 3] = self.origin
        return H


def plane_to_inertial(H: HomTransform, p_plane) -> np.ndarray:
    return H.rotation @ np.asarray(p_plane, dtype=float) + H.origin


def inertial_to_plane(H: HomTransform, p_inertial) -> np.ndarray:
    return H.rotation.T @ (np.asarray(p_inertial, dtype=float) - H.origin)
