"""Ground truth on the search plane: the sensed-intensity maximiser p*."""

from __future__ import annotations

import math

import numpy as np

from ..arva import TransmitterConfig, m_matrix, nominal_conditioned, nominal_conditioned_grid


def _planar_map(transmitter: TransmitterConfig, M: np.ndarray | None = None):
    tx, ty, dt = transmitter.position_plane
    M = transmitter.alignment if M is None else M

    def f(x: float, y: float) -> float:
        return nominal_conditioned(np.array([x - tx, y - ty, -dt]), M)

    return f, M


def pattern_search(f, x0: float, y0: float, step: float = 0.5, tol: float = 1e-4,
                   max_iter: int = 100_000) -> tuple[float, float]:
    """Compass search: try the four axis moves, halve the step when none improves."""
    x, y = x0, y0
    fx = f(x, y)
    for _ in range(max_iter):
        if step < tol:
            break
        moved = False
        for dx, dy in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            fn = f(x + dx, y + dy)
            if fn < fx:
                x, y, fx = x + dx, y + dy, fn
                moved = True
                break
        if not moved:
            step *= 0.5
    return x, y


def planar_optimum(transmitter: TransmitterConfig, half_width: float = 100.0,
                   grid_step: float = 1.0, tol: float = 1e-4) -> np.ndarray:
    """Minimiser of the conditioned map on the plane ``z = 0`` (plane frame).

    A 1 m grid centred on the transmitter projection picks the basin, ties
    going to the smallest ``(x, y)``; compass search refines it to ``tol``.
    """
    tx, ty, dt = transmitter.position_plane
    if dt == 0.0:
        return np.array([tx, ty, 0.0])
    f, M = _planar_map(transmitter)
    offs = np.arange(-half_width, half_width + 0.5 * grid_step, grid_step)
    gx, gy = np.meshgrid(offs, offs, indexing="ij")
    vals = nominal_conditioned_grid(gx, gy, np.full_like(gx, -dt), M)
    # lexicographic tie-break: argmin over the (x, y)-ordered flattened grid
    i = int(np.argmin(vals))
    x0, y0 = tx + gx.flat[i], ty + gy.flat[i]
    x, y = pattern_search(f, x0, y0, step=grid_step / 2, tol=tol)
    return np.array([x, y, 0.0])


def _offset_for_axis(u: np.ndarray, depth: float) -> float:
    f, _ = _planar_map(TransmitterConfig(np.array([0.0, 0.0, depth])), np.outer(u, u))
    x, y = pattern_search(f, 0.0, 0.0, step=0.25 * depth, tol=1e-6 * depth)
    return math.hypot(x, y)


def fibonacci_hemisphere(n: int) -> np.ndarray:
    """``n`` near-uniform unit vectors with ``z >= 0`` (axes are sign-free)."""
    k = np.arange(n) + 0.5
    z = k / n
    r = np.sqrt(1.0 - z * z)
    phi = k * math.pi * (3.0 - math.sqrt(5.0))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def axis_to_rotation(u) -> np.ndarray:
    """A rotation whose first column is the unit vector ``u``."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    helper = np.array([0.0, 0.0, 1.0]) if abs(u[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    v = np.cross(helper, u)
    v /= np.linalg.norm(v)
    w = np.cross(u, v)
    return np.column_stack([u, v, w])


def worst_case_orientation(depth: float, n_points: int = 2000) -> tuple[np.ndarray, float]:
    """Transmitter orientation maximising ``|p* - p_t/proj|`` at burial ``depth``.

    The map depends on the orientation only through the transmitter axis, so
    the search runs over axes: a Fibonacci grid, then a shrinking local
    perturbation search around the best axis. Returns ``(R_pt, offset)``.
    """
    if not depth > 0:
        raise ValueError("depth must be positive")
    axes = fibonacci_hemisphere(n_points)
    offsets = np.array([_offset_for_axis(u, depth) for u in axes])
    best = axes[int(np.argmax(offsets))]
    best_val = float(offsets.max())

    step = math.sqrt(4.0 * math.pi / (2 * n_points))
    while step > 1e-6:
        improved = False
        e1 = axis_to_rotation(best)[:, 1]
        e2 = axis_to_rotation(best)[:, 2]
        for d in (e1, -e1, e2, -e2):
            cand = best + step * d
            cand /= np.linalg.norm(cand)
            val = _offset_for_axis(cand, depth)
            if val > best_val:
                best, best_val, improved = cand, val, True
                break
        if not improved:
            step *= 0.5
    return axis_to_rotation(best), best_val
