"""Rigid-body quadrotor in NED: +z down, thrust along -z_body."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry import E3, orthonormalize, skew


@dataclass(frozen=True)
class VehicleParams:
    mass: float = 1.5
    inertia: tuple[float, float, float] = (0.029, 0.029, 0.055)
    g: float = 9.81
    thrust_min: float = 0.0
    thrust_max: float | None = None
    tau_max: float = 0.5
    tilt_max: float = 0.5  # attitude-target clamp used by the regulators, rad

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if len(self.inertia) != 3 or min(self.inertia) <= 0:
            raise ValueError("inertia needs three positive diagonal entries")
        if self.thrust_max is None:
            object.__setattr__(self, "thrust_max", 2.0 * self.mass * self.g)
        if not (0 <= self.thrust_min < self.thrust_max):
            raise ValueError("need 0 <= thrust_min < thrust_max")
        if not self.tau_max > 0:
            raise ValueError("tau_max must be positive")
        if not 0 < self.tilt_max < np.pi / 2:
            raise ValueError("tilt_max must lie in (0, pi/2)")

    @property
    def hover_thrust(self) -> float:
        return self.mass * self.g

    @property
    def J(self) -> np.ndarray:
        return np.diag(self.inertia)


@dataclass
class QuadState:
    p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))
    R: np.ndarray = field(default_factory=lambda: np.eye(3))
    w_body: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.p, self.v, np.asarray(self.R).reshape(9), self.w_body])

    @classmethod
    def from_vector(cls, x) -> "QuadState":
        x = np.asarray(x, dtype=float)
        return cls(x[0:3].copy(), x[3:6].copy(), x[6:15].reshape(3, 3).copy(), x[15:18].copy())


def _deriv(x: np.ndarray, T: float, tau: np.ndarray, mass: float, g: float,
           J: np.ndarray, J_inv: np.ndarray) -> np.ndarray:
    # scalar arithmetic: small-array numpy calls dominate the runtime otherwise
    (r00, r01, r02, r10, r11, r12, r20, r21, r22) = x[6:15].tolist()
    wx, wy, wz = x[15:18].tolist()
    jx, jy, jz = J.tolist()
    a = -T / mass
    return np.array([
        x[3], x[4], x[5],
        a * r02, a * r12, a * r22 + g,
        r01 * wz - r02 * wy, r02 * wx - r00 * wz, r00 * wy - r01 * wx,
        r11 * wz - r12 * wy, r12 * wx - r10 * wz, r10 * wy - r11 * wx,
        r21 * wz - r22 * wy, r22 * wx - r20 * wz, r20 * wy - r21 * wx,
        J_inv[0] * (tau[0] - (wy * jz * wz - wz * jy * wy)),
        J_inv[1] * (tau[1] - (wz * jx * wx - wx * jz * wz)),
        J_inv[2] * (tau[2] - (wx * jy * wy - wy * jx * wx)),
    ])


def dynamics_deriv(s: QuadState, T: float, tau, params: VehicleParams) -> QuadState:
    """Time derivative of the state, packed as a :class:`QuadState`."""
    J = np.asarray(params.inertia, dtype=float)
    d = _deriv(s.to_vector(), float(T), np.asarray(tau, dtype=float),
               params.mass, params.g, J, 1.0 / J)
    return QuadState.from_vector(d)


def rk4_vector(x: np.ndarray, T: float, tau, dt: float, params: VehicleParams) -> np.ndarray:
    """Classical RK4 step on the packed state followed by re-orthonormalisation."""
    J = np.asarray(params.inertia, dtype=float)
    Ji = 1.0 / J
    tau = np.asarray(tau, dtype=float)
    m, g = params.mass, params.g
    k1 = _deriv(x, T, tau, m, g, J, Ji)
    k2 = _deriv(x + 0.5 * dt * k1, T, tau, m, g, J, Ji)
    k3 = _deriv(x + 0.5 * dt * k2, T, tau, m, g, J, Ji)
    k4 = _deriv(x + dt * k3, T, tau, m, g, J, Ji)
    xn = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    xn[6:15] = orthonormalize(xn[6:15].reshape(3, 3)).reshape(9)
    return xn


def integrate_rk4(s: QuadState, T: float, tau, dt: float, params: VehicleParams) -> QuadState:
    if not dt > 0:
        raise ValueError("dt must be positive")
    return QuadState.from_vector(rk4_vector(s.to_vector(), float(T), tau, dt, params))


def linearized_models(params: VehicleParams) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Continuous ``(A, B)`` pairs of the four decoupled hover subsystems.

    State orderings: yaw ``(psi, psi_dot)``; roll ``(e_y, v_y, phi, phi_dot)``;
    pitch ``(e_x, v_x, theta, theta_dot)``; vertical ``(e_z, v_z)`` with input
    ``T - M g``.
    """
    g = params.g
    Jx, Jy, Jz = params.inertia
    chain2 = np.array([[0.0, 1.0], [0.0, 0.0]])

    def chain4(coupling):
        A = np.zeros((4, 4))
        A[0, 1] = 1.0
        A[1, 2] = coupling
        A[2, 3] = 1.0
        return A

    return {
        "yaw": (chain2.copy(), np.array([[0.0], [1.0 / Jz]])),
        "roll": (chain4(g), np.array([[0.0], [0.0], [0.0], [1.0 / Jx]])),
        "pitch": (chain4(-g), np.array([[0.0], [0.0], [0.0], [1.0 / Jy]])),
        "vertical": (chain2.copy(), np.array([[0.0], [-1.0 / params.mass]])),
    }
