"""Internal-model regulators for the four hover subsystems.

Each of roll, pitch and vertical embeds a copy of the reference generator
``eta' = Phi eta + G e`` with ``Phi`` having eigenvalues ``{0, +-j omega}``,
so biased sinusoids at ``omega`` are tracked with zero steady-state error.
Yaw is a plain state feedback holding zero heading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..geometry import rot_to_rpy
from .lqr import dlqr, zoh
from .plant import QuadState, VehicleParams, linearized_models


def internal_model_matrices(omega: float) -> tuple[np.ndarray, np.ndarray]:
    Phi = np.array([[0.0, 1.0, 0.0],
                    [0.0, 0.0, 1.0],
                    [0.0, -omega * omega, 0.0]])
    G = np.array([[0.0], [0.0], [1.0]])
    return Phi, G


def tustin(A, B, dt: float, prewarp: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Bilinear discretisation, optionally prewarped at ``prewarp`` rad/s.

    Prewarping keeps the discrete poles of the continuous ``+-j prewarp`` pair
    exactly at ``exp(+-j prewarp dt)``.
    """
    A = np.asarray(A, dtype=float)
    half = dt / 2.0
    if prewarp:
        half = math.tan(prewarp * dt / 2.0) / prewarp
    I = np.eye(A.shape[0])
    left = I - half * A
    Ad = np.linalg.solve(left, I + half * A)
    Bd = np.linalg.solve(left, np.asarray(B, dtype=float)) * (2.0 * half)
    return Ad, Bd


def discrete_internal_model(omega: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    if not omega * dt < 2.0:
        raise ValueError("Tustin discretisation needs omega * dt < 2")
    Phi, G = internal_model_matrices(omega)
    return tustin(Phi, G, dt, prewarp=omega)


def internal_model_step(eta, e: float, omega: float, dt: float) -> np.ndarray:
    Ad, Bd = discrete_internal_model(omega, dt)
    return Ad @ np.asarray(eta, dtype=float) + Bd[:, 0] * e


@dataclass(frozen=True)
class LqrWeights:
    """Diagonal LQR weights per loop; the internal-model states come last."""

    yaw: tuple = (10.0, 0.1)
    yaw_r: float = 1.0
    lateral: tuple = (1.0, 0.16, 0.1, 1e-3, 244.140625, 39.0625, 6.25)
    lateral_r: float = 1.0
    vertical: tuple = (1.0, 0.16, 244.140625, 39.0625, 6.25)
    vertical_r: float = 1e-3

    def detuned(self, factor: float) -> "LqrWeights":
        """Same state weights, control effort ``factor`` times more expensive."""
        return replace(self, yaw_r=self.yaw_r * factor,
                       lateral_r=self.lateral_r * factor,
                       vertical_r=self.vertical_r * factor)


@dataclass(frozen=True)
class RegulatorGains:
    K_y: np.ndarray
    K_r: np.ndarray
    K_eta_r: np.ndarray
    K_p: np.ndarray
    K_eta_p: np.ndarray
    K_v: np.ndarray
    K_eta_v: np.ndarray
    Ad_eta: np.ndarray
    Bd_eta: np.ndarray
    dt: float
    closed_loop: dict = field(default_factory=dict, compare=False, repr=False)

    def spectral_radii(self) -> dict[str, float]:
        return {k: float(np.max(np.abs(np.linalg.eigvals(Acl))))
                for k, Acl in self.closed_loop.items()}


def _augment(Ad, Bd, Ae, Be):
    n, m = Ad.shape[0], Ae.shape[0]
    A = np.zeros((n + m, n + m))
    A[:n, :n] = Ad
    A[n:, 0] = Be[:, 0]
    A[n:, n:] = Ae
    B = np.vstack([Bd, np.zeros((m, Bd.shape[1]))])
    return A, B


def synthesize_gains(params: VehicleParams, omega: float, dt_ctrl: float,
                     weights: LqrWeights | None = None) -> RegulatorGains:
    """ZOH plants, Tustin internal models, discrete LQR on each augmented loop."""
    weights = weights or LqrWeights()
    models = linearized_models(params)
    Ae, Be = discrete_internal_model(omega, dt_ctrl)
    gains = {}
    closed = {}

    Ad, Bd = zoh(*models["yaw"], dt_ctrl)
    K, _ = dlqr(Ad, Bd, np.diag(weights.yaw), weights.yaw_r)
    gains["K_y"] = K[0]
    closed["yaw"] = Ad - Bd @ K

    for name, tag, q, r in (("roll", "r", weights.lateral, weights.lateral_r),
                            ("pitch", "p", weights.lateral, weights.lateral_r),
                            ("vertical", "v", weights.vertical, weights.vertical_r)):
        Ad, Bd = zoh(*models[name], dt_ctrl)
        A, B = _augment(Ad, Bd, Ae, Be)
        K, _ = dlqr(A, B, np.diag(q), r)
        n = Ad.shape[0]
        gains[f"K_{tag}"] = K[0, :n]
        gains[f"K_eta_{tag}"] = K[0, n:]
        closed[name] = A - B @ K

    return RegulatorGains(Ad_eta=Ae, Bd_eta=Be[:, 0], dt=dt_ctrl, closed_loop=closed, **gains)


@dataclass
class RegulatorState:
    eta_r: np.ndarray = field(default_factory=lambda: np.zeros(3))
    eta_p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    eta_v: np.ndarray = field(default_factory=lambda: np.zeros(3))


def control_step(s: QuadState, ref, reg: RegulatorState, gains: RegulatorGains,
                 params: VehicleParams) -> tuple[float, np.ndarray, RegulatorState]:
    """One regulator tick toward the inertial position ``ref`` (yaw held at 0).

    Returns the saturated thrust, saturated torques and the advanced
    internal-model states. Angle rates are taken from the body rates, which
    is exact at hover.

    The lateral LQR law ``tau = -K (e, v, angle, rate) - K_eta eta`` is
    evaluated as an attitude target ``-(K_e e + K_v v + K_eta eta) / K_angle``
    tracked by the angle and rate terms. Clamping that target to
    ``params.tilt_max`` leaves the linear law untouched for small errors and
    keeps large steps from driving the four-integrator chain unstable through
    torque saturation. Internal models are frozen while their loop saturates.
    """
    roll, pitch, yaw = rot_to_rpy(s.R)
    e = np.asarray(s.p, dtype=float) - np.asarray(ref, dtype=float)
    v = s.v
    w = s.w_body
    Kr, Kp = gains.K_r, gains.K_p

    tau_z = -(gains.K_y[0] * yaw + gains.K_y[1] * w[2])
    raw_r = -(Kr[0] * e[1] + Kr[1] * v[1] + gains.K_eta_r @ reg.eta_r) / Kr[2]
    raw_p = -(Kp[0] * e[0] + Kp[1] * v[0] + gains.K_eta_p @ reg.eta_p) / Kp[2]
    lim = params.tilt_max
    roll_t = min(max(raw_r, -lim), lim)
    pitch_t = min(max(raw_p, -lim), lim)
    tau_x = -Kr[2] * (roll - roll_t) - Kr[3] * w[0]
    tau_y = -Kp[2] * (pitch - pitch_t) - Kp[3] * w[1]
    T_raw = params.hover_thrust - (gains.K_v @ (e[2], v[2])) - gains.K_eta_v @ reg.eta_v

    T = min(max(T_raw, params.thrust_min), params.thrust_max)
    tau = np.clip([tau_x, tau_y, tau_z], -params.tau_max, params.tau_max)

    Ae, Be = gains.Ad_eta, gains.Bd_eta

    def advance(eta, err, K_eta, excess, sign):
        # conditional integration: hold eta while err drives further into saturation
        push = -sign * (K_eta @ Be) * err
        if excess != 0.0 and push * excess > 0.0:
            return eta
        return Ae @ eta + Be * err

    nxt = RegulatorState(
        eta_r=advance(reg.eta_r, e[1], gains.K_eta_r, raw_r - roll_t, 1.0 / Kr[2]),
        eta_p=advance(reg.eta_p, e[0], gains.K_eta_p, raw_p - pitch_t, 1.0 / Kp[2]),
        eta_v=advance(reg.eta_v, e[2], gains.K_eta_v, T_raw - T, 1.0))
    return float(T), tau, nxt
