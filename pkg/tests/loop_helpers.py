"""Closed-loop harness shared by the vehicle tests and the acceptance suite."""

import numpy as np

from arvaseek.uav import QuadState, RegulatorState, control_step, synthesize_gains
from arvaseek.uav.plant import VehicleParams, rk4_vector

OMEGA = 0.65


def closed_loop(ref_fn, duration, start=None, R0=None, params=None, weights=None,
                ctrl_hz=250, physics_hz=1000):
    """Nonlinear plant + discrete regulators. Returns t, positions, refs, yaw, inputs."""
    params = params or VehicleParams()
    gains = synthesize_gains(params, OMEGA, 1.0 / ctrl_hz, weights)
    s = QuadState()
    if start is not None:
        s.p = np.asarray(start, float)
    if R0 is not None:
        s.R = np.asarray(R0, float)
    x = s.to_vector()
    reg = RegulatorState()
    n = int(round(duration * ctrl_hz))
    n_sub = physics_hz // ctrl_hz
    ts = np.arange(n) / ctrl_hz
    pos = np.empty((n, 3))
    refs = np.empty((n, 3))
    yaw = np.empty(n)
    inputs = np.empty((n, 4))
    for k, t in enumerate(ts):
        ref = np.asarray(ref_fn(t), float)
        q = QuadState.from_vector(x)
        T, tau, reg = control_step(q, ref, reg, gains, params)
        pos[k], refs[k] = x[0:3], ref
        yaw[k] = np.arctan2(x[9], x[6])
        inputs[k] = (T, *tau)
        for _ in range(n_sub):
            x = rk4_vector(x, T, tau, 1.0 / physics_hz, params)
    return ts, pos, refs, yaw, inputs


def biased_sine(freq, amp=(5.5, 5.5, 3.0), bias=(1.0, -2.0, -6.0)):
    amp = np.asarray(amp, float)
    bias = np.asarray(bias, float)
    return lambda t: bias + amp * np.sin(freq * t)


def steady_error(ts, pos, refs, settle):
    """Per-axis max |error| after ``settle`` seconds."""
    m = ts >= settle
    return np.max(np.abs(pos[m] - refs[m]), axis=0)
