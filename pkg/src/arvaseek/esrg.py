"""Bounded-update-rate extremum seeking reference generator.

The generator moves a planar reference at speed ``sqrt(alpha * omega)`` along
the heading ``omega * t + kappa * y``; the measured map value only enters
through the phase. ``alpha`` ramps from zero to ``alpha_max`` through a
first-order lag so the reference acceleration stays bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class InsufficientHistoryError(ValueError):
    pass


@dataclass(frozen=True)
class EsParams:
    alpha_max: float = 20.0
    kappa: float = 0.07
    omega: float = 0.65
    lam: float = 5.0
    dt_es: float = 0.1
    max_speed: float = 4.0

    def __post_init__(self):
        for name in ("alpha_max", "kappa", "omega", "lam", "dt_es", "max_speed"):
            if not getattr(self, name) > 0:
                raise ValueError(f"EsParams.{name} must be positive")
        if math.sqrt(self.alpha_max * self.omega) > self.max_speed:
            raise ValueError("sqrt(alpha_max * omega) exceeds the vehicle speed limit")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


@dataclass(frozen=True)
class EsState:
    x_ref: float
    y_ref: float
    alpha: float = 0.0
    t: float = 0.0

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x_ref, self.y_ref])


@dataclass(frozen=True)
class CentreEstimate:
    cx: float
    cy: float
    window: float


def steady_speed(params: EsParams) -> float:
    return math.sqrt(params.alpha_max * params.omega)


def es_velocity(state: EsState, y_t: float, params: EsParams) -> tuple[float, float]:
    """Reference velocity held over the next ES step."""
    speed = math.sqrt(state.alpha * params.omega)
    phase = params.omega * state.t + params.kappa * y_t
    return speed * math.cos(phase), speed * math.sin(phase)


def alpha_filter_step(alpha: float, params: EsParams) -> float:
    """Tustin update of ``alpha' = (alpha_max - alpha) / lam`` over one ES step."""
    h = params.dt_es / (2.0 * params.lam)
    return ((1.0 - h) * alpha + 2.0 * h * params.alpha_max) / (1.0 + h)


def es_step(state: EsState, y_t: float, params: EsParams) -> EsState:
    """Forward-Euler step of the reference; alpha is advanced afterwards."""
    vx, vy = es_velocity(state, y_t, params)
    dt = params.dt_es
    return EsState(x_ref=state.x_ref + vx * dt,
                   y_ref=state.y_ref + vy * dt,
                   alpha=alpha_filter_step(state.alpha, params),
                   t=state.t + dt)


def average_step(pos, map_gradient, kappa: float, alpha: float, dt: float) -> np.ndarray:
    """Forward-Euler step of the averaged gradient flow (validation only)."""
    return np.asarray(pos, dtype=float) - 0.5 * kappa * alpha * np.asarray(map_gradient) * dt


def centre_estimate(times, xs, ys, omega: float, t: float) -> CentreEstimate:
    """Mean of the reference samples over the loiter period ending at ``t``.

    Samples with ``t - window < time <= t`` are averaged.
    """
    window = 2.0 * math.pi / omega
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] > t - window + 1e-9:
        raise InsufficientHistoryError(
            f"need history back to t={t - window:.3f}s for a loiter-centre estimate")
    lo = t - window
    mask = (times > lo + 1e-9) & (times <= t + 1e-9)
    return CentreEstimate(float(np.mean(np.asarray(xs)[mask])),
                          float(np.mean(np.asarray(ys)[mask])), window)


class CentreTracker:
    """Running loiter-centre estimate over a fixed number of ES samples.

    Used inside the simulation loop instead of re-averaging the history.
    """

    def __init__(self, params: EsParams):
        self.window = params.period
        self._dt = params.dt_es
        self._xs: list[float] = []
        self._ys: list[float] = []
        self._times: list[float] = []

    def push(self, t: float, x: float, y: float) -> None:
        self._times.append(t)
        self._xs.append(x)
        self._ys.append(y)

    def estimate(self, t: float) -> CentreEstimate | None:
        if not self._times or self._times[0] > t - self.window + 1e-9:
            return None
        n = int(math.ceil(self.window / self._dt - 1e-9))
        return CentreEstimate(float(np.mean(self._xs[-n:])),
                              float(np.mean(self._ys[-n:])), self.window)
