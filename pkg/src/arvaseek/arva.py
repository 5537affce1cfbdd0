"""ARVA transmitter field, noisy receiver measurement and conditioning.

Everything is expressed in the search-plane frame. ``p`` always denotes the
receiver position relative to the transmitter (``p_r - p_t``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import E1, is_rotation

SINGULARITY_RADIUS = 1e-3
FOUR_PI = 4.0 * np.pi
CBRT_FOUR_PI = FOUR_PI ** (1.0 / 3.0)


class FieldSingularityError(ValueError):
    """Receiver too close to the transmitter for the dipole model."""


def _check_range(p: np.ndarray) -> float:
    r = float(np.linalg.norm(p))
    if r < SINGULARITY_RADIUS:
        raise FieldSingularityError(
            f"|p| = {r:.3e} m is inside the {SINGULARITY_RADIUS:g} m singularity guard")
    return r


@dataclass(frozen=True)
class TransmitterConfig:
    """Transmitter pose in the plane frame; ``position_plane = [t_x, t_y, d_t]``."""

    position_plane: np.ndarray
    orientation_plane: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        pos = np.asarray(self.position_plane, dtype=float).reshape(3)
        rot = np.asarray(self.orientation_plane, dtype=float)
        if pos[2] < 0:
            raise ValueError("transmitter must lie at or below the search plane (d_t >= 0)")
        if not is_rotation(rot):
            raise ValueError("orientation_plane is not a valid rotation")
        object.__setattr__(self, "position_plane", pos)
        object.__setattr__(self, "orientation_plane", rot)

    @property
    def depth(self) -> float:
        return float(self.position_plane[2])

    @property
    def projection(self) -> np.ndarray:
        return np.array([self.position_plane[0], self.position_plane[1], 0.0])

    @property
    def alignment(self) -> np.ndarray:
        return m_matrix(self.orientation_plane)


@dataclass(frozen=True)
class EmiModel:
    """Bounded, quasi-constant electromagnetic interference.

    ``w(t) = base_vector + drift_amplitude * sin(2 pi f t) * d`` with a unit
    drift direction ``d`` drawn from ``seed``. ``|w(t)| <= bound`` always.
    """

    bound: float = 0.0
    base_vector: np.ndarray = field(default_factory=lambda: np.zeros(3))
    drift_frequency: float = 0.01
    drift_amplitude: float = 0.0
    seed: int = 0

    def __post_init__(self):
        base = np.asarray(self.base_vector, dtype=float).reshape(3)
        object.__setattr__(self, "base_vector", base)
        if self.bound < 0 or self.drift_amplitude < 0:
            raise ValueError("EMI bound and drift amplitude must be non-negative")
        if np.linalg.norm(base) + self.drift_amplitude > self.bound * (1 + 1e-12):
            raise ValueError("EMI base + drift exceeds the bound")
        d = np.random.default_rng(self.seed).normal(size=3)
        object.__setattr__(self, "_drift_dir", d / np.linalg.norm(d))

    @classmethod
    def from_bound(cls, bound: float, seed: int = 0, drift_frequency: float = 0.01,
                   drift_share: float = 0.3) -> "EmiModel":
        """Split ``bound`` into a random constant part and a sinusoidal drift."""
        rng = np.random.default_rng([seed, 1])
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        return cls(bound=bound,
                   base_vector=(1.0 - drift_share) * bound * u,
                   drift_frequency=drift_frequency,
                   drift_amplitude=drift_share * bound,
                   seed=seed)

    def sample(self, t: float) -> np.ndarray:
        s = np.sin(2.0 * np.pi * self.drift_frequency * t)
        return self.base_vector + self.drift_amplitude * s * self._drift_dir


def a_matrix(p) -> np.ndarray:
    x, y, z = np.asarray(p, dtype=float)
    if x == 0.0 and y == 0.0 and z == 0.0:
        raise FieldSingularityError("A(p) is undefined at p = 0")
    return np.array([
        [2 * x * x - y * y - z * z, 3 * x * y, 3 * x * z],
        [3 * x * y, 2 * y * y - x * x - z * z, 3 * y * z],
        [3 * x * z, 3 * y * z, 2 * z * z - x * x - y * y],
    ])


def dipole_field(p, R_pt) -> np.ndarray:
    """Dipole field at ``p`` for a transmitter aligned with its own x axis."""
    p = np.asarray(p, dtype=float)
    r = _check_range(p)
    return a_matrix(p) @ (np.asarray(R_pt) @ E1) / (FOUR_PI * r ** 5)


def m_matrix(R_pt) -> np.ndarray:
    """Rank-one projector onto the transmitter axis, in plane coordinates."""
    u = np.asarray(R_pt, dtype=float) @ E1
    return np.outer(u, u)


def field_intensity(p, M) -> float:
    p = np.asarray(p, dtype=float)
    r = _check_range(p)
    q = p @ M @ p / (r * r)
    return float(np.sqrt(1.0 + 3.0 * q) / (FOUR_PI * r ** 3))


def measure(p_rel, R_pt, emi: EmiModel, t: float) -> np.ndarray:
    """Field sensed by the receiver: dipole field plus interference."""
    return dipole_field(p_rel, R_pt) + emi.sample(t)


def condition(intensity: float) -> float:
    """Inverse cube root of the sensed intensity."""
    if not intensity > 0:
        raise ValueError(f"intensity must be positive, got {intensity!r}")
    return float(intensity ** (-1.0 / 3.0))


def nominal_conditioned(p, M) -> float:
    p = np.asarray(p, dtype=float)
    r = float(np.linalg.norm(p))
    if r == 0.0:
        return 0.0
    q = p @ M @ p / (r * r)
    return float(CBRT_FOUR_PI * r / (1.0 + 3.0 * q) ** (1.0 / 6.0))


def nominal_conditioned_grad(p, M) -> np.ndarray:
    """Analytic gradient of :func:`nominal_conditioned` with respect to ``p``."""
    p = np.asarray(p, dtype=float)
    r2 = float(p @ p)
    if r2 == 0.0:
        return np.zeros(3)
    r = np.sqrt(r2)
    Mp = M @ p
    q = float(p @ Mp) / r2
    dq = 2.0 * Mp / r2 - 2.0 * q * p / r2
    s = 1.0 + 3.0 * q
    return CBRT_FOUR_PI * s ** (-1.0 / 6.0) * (p / r - 0.5 * r * dq / s)


def nominal_conditioned_grid(px, py, pz, M) -> np.ndarray:
    """Vectorised :func:`nominal_conditioned` over broadcastable coordinate arrays."""
    r2 = px * px + py * py + pz * pz
    quad = (M[0, 0] * px * px + M[1, 1] * py * py + M[2, 2] * pz * pz
            + 2 * (M[0, 1] * px * py + M[0, 2] * px * pz + M[1, 2] * py * pz))
    with np.errstate(invalid="ignore", divide="ignore"):
        q = np.where(r2 > 0, quad / r2, 0.0)
    return CBRT_FOUR_PI * np.sqrt(r2) / (1.0 + 3.0 * q) ** (1.0 / 6.0)


def nsr(p, M, w_bar: float) -> float:
    """Worst-case noise-to-signal ratio of the conditioned measurement.

    The sup over noise realisations of the conditioned output is reached when
    the interference of norm ``w_bar`` points against the field. If the noise
    can cancel the field entirely the ratio saturates at 1.
    """
    p = np.asarray(p, dtype=float)
    if w_bar <= 0:
        return 0.0
    h = field_intensity(p, M)
    weakest = h - w_bar
    if weakest <= 0:
        return 1.0
    y_sup = weakest ** (-1.0 / 3.0)
    return float((y_sup - nominal_conditioned(p, M)) / y_sup)
