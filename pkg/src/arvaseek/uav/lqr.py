"""Discrete LQR via the structure-preserving doubling algorithm."""

from __future__ import annotations

import numpy as np
from scipy.signal import cont2discrete


class RiccatiConvergenceError(RuntimeError):
    pass


def zoh(A, B, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Zero-order-hold discretisation of ``x' = A x + B u``."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    C = np.zeros((1, A.shape[0]))
    D = np.zeros((1, B.shape[1]))
    Ad, Bd, *_ = cont2discrete((A, B, C, D), dt, method="zoh")
    return Ad, Bd


def solve_dare(A, B, Q, R, tol: float = 1e-10, max_iter: int = 200) -> np.ndarray:
    """Stabilising solution of the discrete algebraic Riccati equation.

    Doubling iteration; converges quadratically for stabilisable/detectable
    data, including open-loop poles on the unit circle.

    Raises
    ------
    RiccatiConvergenceError
        If the relative update does not drop below ``tol`` within ``max_iter``.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n = A.shape[0]
    I = np.eye(n)
    Ak = A.copy()
    Gk = B @ np.linalg.solve(np.atleast_2d(R), B.T)
    Hk = np.asarray(Q, dtype=float).copy()
    for _ in range(max_iter):
        with np.errstate(over="ignore", invalid="ignore"):
            W = I + Gk @ Hk
            WA = np.linalg.solve(W, Ak)
            WG = np.linalg.solve(W, Gk)
            H_next = Hk + Ak.T @ Hk @ WA
            Gk = Gk + Ak @ WG @ Ak.T
            Ak = Ak @ WA
            change = np.linalg.norm(H_next - Hk) / max(np.linalg.norm(H_next), 1e-300)
        if not (np.all(np.isfinite(H_next)) and np.isfinite(change)):
            raise RiccatiConvergenceError("doubling iteration diverged (not stabilisable?)")
        Hk = 0.5 * (H_next + H_next.T)
        if change <= tol:
            return Hk
    raise RiccatiConvergenceError(f"doubling iteration did not converge in {max_iter} steps")


def dlqr(A, B, Q, R, **kw) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(K, X)`` with ``u = -K x`` minimising ``sum x'Qx + u'Ru``."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    R = np.atleast_2d(np.asarray(R, dtype=float))
    X = solve_dare(A, B, Q, R, **kw)
    K = np.linalg.solve(R + B.T @ X @ B, B.T @ X @ A)
    return K, X
