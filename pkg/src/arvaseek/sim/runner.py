"""Multirate closed-loop simulation of the ARVA search.

Rates nest as physics >= controller >= ES >= ARVA. At every controller tick:

1. on an ARVA tick, sample and condition the sensed intensity at the true
   drone position and hold it;
2. advance the first-order low-pass on the held value;
3. on an ES tick, push the ES state into the loiter-centre estimator and
   compute the reference velocity for the next ES interval;
4. evaluate the plane reference along that forward-Euler segment, map it to
   the inertial frame and run the regulators;
5. log, then integrate the plant over the physics sub-steps.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..arva import condition, measure, nominal_conditioned_grad
from ..esrg import CentreTracker, EsState, alpha_filter_step, average_step, es_velocity
from ..geometry import inertial_to_plane, plane_to_inertial
from ..uav import QuadState, RegulatorState, control_step, synthesize_gains
from ..uav.plant import rk4_vector
from .metrics import LOG_COLUMNS, Metrics, RunLog, compute_metrics
from .optimum import planar_optimum
from .scenario import Scenario

DIVERGENCE_LIMIT = 1e6


class NumericDivergenceError(RuntimeError):
    pass


def run(scenario: Scenario, p_star=None) -> tuple[RunLog, Metrics]:
    sc = scenario
    rates = sc.rates
    es = sc.es
    veh = sc.vehicle
    H = sc.plane
    tx = sc.transmitter
    R_pt = tx.orientation_plane
    if p_star is None:
        p_star = planar_optimum(tx)

    gains = synthesize_gains(veh, es.omega, 1.0 / rates.ctrl_hz, sc.lqr)

    dt_ctrl = 1.0 / rates.ctrl_hz
    dt_phys = 1.0 / rates.physics_hz
    n_sub = rates.physics_hz // rates.ctrl_hz
    ctrl_per_es = rates.ctrl_hz // rates.es_hz
    ctrl_per_arva = rates.ctrl_hz // rates.arva_hz
    n_ticks = int(round(sc.duration * rates.ctrl_hz))
    lp_gain = 1.0 - math.exp(-dt_ctrl / sc.y_filter_tau) if sc.y_filter_tau > 0 else 1.0

    x = QuadState(p=sc.drone_start.copy()).to_vector()
    reg = RegulatorState()
    start_plane = inertial_to_plane(H, sc.drone_start)
    es_state = EsState(float(start_plane[0]), float(start_plane[1]), alpha=0.0, t=0.0)
    tracker = CentreTracker(es)

    rows = np.empty((n_ticks, len(LOG_COLUMNS)))
    inputs = np.empty((n_ticks, 4))
    es_pos = []
    es_alpha = []
    hm_norm = yt_raw = yt_filt = float("nan")
    vel = (0.0, 0.0)
    centre = None

    for k in range(n_ticks):
        t = k * dt_ctrl
        p = x[0:3]
        if k % ctrl_per_arva == 0:
            rel = inertial_to_plane(H, p) - tx.position_plane
            hm_norm = float(np.linalg.norm(measure(rel, R_pt, sc.emi, t)))
            yt_raw = condition(hm_norm)
            if k == 0:
                yt_filt = yt_raw
        yt_filt += lp_gain * (yt_raw - yt_filt)

        if k % ctrl_per_es == 0:
            if k:
                es_state = EsState(es_state.x_ref + vel[0] * es.dt_es,
                                   es_state.y_ref + vel[1] * es.dt_es,
                                   alpha=alpha_filter_step(es_state.alpha, es),
                                   t=es_state.t + es.dt_es)
            tracker.push(es_state.t, es_state.x_ref, es_state.y_ref)
            es_pos.append((es_state.x_ref, es_state.y_ref))
            es_alpha.append(es_state.alpha)
            centre = tracker.estimate(es_state.t)
            vel = es_velocity(es_state, yt_filt, es)
            seg_t0 = t

        s = t - seg_t0
        ref_plane = np.array([es_state.x_ref + vel[0] * s, es_state.y_ref + vel[1] * s, 0.0])
        ref = plane_to_inertial(H, ref_plane)

        quad = QuadState.from_vector(x)
        T, tau, reg = control_step(quad, ref, reg, gains, veh)
        inputs[k] = (T, *tau)

        if centre is None:
            cx = cy = dist = float("nan")
        else:
            cx, cy = centre.cx, centre.cy
            dist = math.hypot(cx - p_star[0], cy - p_star[1])
        rows[k] = (t, *x[0:3], *x[3:6], *ref, ref_plane[0], ref_plane[1],
                   hm_norm, yt_raw, yt_filt, es_state.alpha, cx, cy, dist)

        for _ in range(n_sub):
            x = rk4_vector(x, T, tau, dt_phys, veh)
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > DIVERGENCE_LIMIT:
            raise NumericDivergenceError(
                f"state diverged at t={t + dt_ctrl:.3f}s (|x|max={np.max(np.abs(x)):.3e})")

    log = RunLog(rows, es_positions=np.array(es_pos), es_alphas=np.array(es_alpha),
                 inputs=inputs)
    return log, compute_metrics(log, p_star, es.omega)


def oracle(scenario: Scenario, p_star=None) -> np.ndarray:
    """Average gradient flow on the noiseless map, sampled at the ES rate.

    Uses the same alpha ramp as the ES. Returns rows ``(t, x, y, alpha, dist)``
    where ``dist`` is the distance to ``p_star``.
    """
    sc = scenario
    es = sc.es
    tx = sc.transmitter
    M = tx.alignment
    if p_star is None:
        p_star = planar_optimum(tx)
    pos = inertial_to_plane(sc.plane, sc.drone_start)[:2]
    alpha = 0.0
    n = int(round(sc.duration / es.dt_es))
    out = np.empty((n, 5))
    for k in range(n):
        out[k] = (k * es.dt_es, pos[0], pos[1], alpha,
                  math.hypot(pos[0] - p_star[0], pos[1] - p_star[1]))
        rel = np.array([pos[0], pos[1], 0.0]) - tx.position_plane
        grad = nominal_conditioned_grad(rel, M)[:2]
        pos = average_step(pos, grad, es.kappa, alpha, es.dt_es)
        alpha = alpha_filter_step(alpha, es)
    return out


def _run_one(scenario: Scenario):
    try:
        return run(scenario)[1]
    except Exception as exc:  # collected per scenario, the sweep keeps going
        return exc


def sweep(base: Scenario, overrides: list[dict], workers: int = 1) -> list:
    """Run ``base`` once per override dict; errors are returned in place of Metrics."""
    scenarios = []
    for ov in overrides:
        try:
            scenarios.append(base.with_overrides(ov))
        except Exception as exc:
            scenarios.append(exc)
    todo = [s for s in scenarios if isinstance(s, Scenario)]
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = iter(list(pool.map(_run_one, todo)))
    else:
        done = iter([_run_one(s) for s in todo])
    return [next(done) if isinstance(s, Scenario) else s for s in scenarios]
