"""Run log container, CSV round-trip and convergence metrics."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

LOG_COLUMNS = ("t", "px", "py", "pz", "vx", "vy", "vz", "ref_xi", "ref_yi", "ref_zi",
               "ref_xp", "ref_yp", "hm_norm", "yt_raw", "yt_filt", "alpha", "cx", "cy",
               "dist_centre_opt")


@dataclass
class RunLog:
    """Uniformly sampled simulation record, one row per controller tick."""

    data: np.ndarray
    es_positions: np.ndarray | None = None
    es_alphas: np.ndarray | None = None
    inputs: np.ndarray | None = None  # (T, tau_x, tau_y, tau_z) per row; not in the CSV

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim != 2 or self.data.shape[1] != len(LOG_COLUMNS):
            raise ValueError(f"log needs {len(LOG_COLUMNS)} columns")
        if len(self.data) > 1:
            dt = np.diff(self.data[:, 0])
            if not np.all(dt > 0):
                raise ValueError("log time stamps must be strictly increasing")
            # 9 significant digits in the CSV limit how uniform the clock can look
            if np.max(np.abs(dt - dt[0])) > 1e-3 * dt[0]:
                raise ValueError("log sample period is not constant")

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, LOG_COLUMNS.index(name)]

    def __len__(self) -> int:
        return self.data.shape[0]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(LOG_COLUMNS) + "\n")
            for row in self.data:
                fh.write(",".join(format(v, ".9g") for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "RunLog":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != LOG_COLUMNS:
                raise ValueError(f"unexpected log header in {path}")
            rows = [[float(v) for v in row] for row in reader]
        return cls(np.array(rows, dtype=float).reshape(-1, len(LOG_COLUMNS)))


@dataclass
class Metrics:
    t_enter_5m_box: float | None
    t_enter_1m_box: float | None
    steady_radius: float
    max_ref_speed: float
    max_tracking_error: float
    loiter_tracking_error: float
    final_centre_distance: float
    p_star: tuple[float, float]

    def to_dict(self) -> dict:
        return asdict(self)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "Metrics":
        doc = json.loads(Path(path).read_text())
        doc["p_star"] = tuple(doc["p_star"])
        return cls(**doc)


def box_entry_time(t, cx, cy, p_star, side: float, hold: float) -> float | None:
    """First time the centre enters the ``side`` box and stays for ``hold`` seconds."""
    half = 0.5 * side
    inside = (np.abs(cx - p_star[0]) <= half) & (np.abs(cy - p_star[1]) <= half)
    inside &= np.isfinite(cx)
    n = len(t)
    i = 0
    while i < n:
        if not inside[i]:
            i += 1
            continue
        j = i
        while j < n and inside[j]:
            j += 1
        # [i, j) is a run of inside samples
        if j < n:
            if t[j - 1] - t[i] >= hold:
                return float(t[i])
        elif t[-1] - t[i] >= hold:
            return float(t[i])
        i = j
    return None


def compute_metrics(log: RunLog, p_star, omega: float) -> Metrics:
    period = 2.0 * math.pi / omega
    t = log["t"]
    cx, cy = log["cx"], log["cy"]
    p_star = (float(p_star[0]), float(p_star[1]))

    dt = t[1] - t[0] if len(t) > 1 else 1.0
    rx, ry = log["ref_xp"], log["ref_yp"]
    speeds = np.hypot(np.diff(rx), np.diff(ry)) / dt

    track = np.sqrt((log["px"] - log["ref_xi"]) ** 2 + (log["py"] - log["ref_yi"]) ** 2
                    + (log["pz"] - log["ref_zi"]) ** 2)
    last = t > t[-1] - period
    centre = (float(np.mean(rx[last])), float(np.mean(ry[last])))
    radius = float(np.mean(np.hypot(rx[last] - centre[0], ry[last] - centre[1])))
    final_cd = (float(log["dist_centre_opt"][-1])
                if np.isfinite(log["dist_centre_opt"][-1]) else float("nan"))

    return Metrics(
        t_enter_5m_box=box_entry_time(t, cx, cy, p_star, 5.0, period),
        t_enter_1m_box=box_entry_time(t, cx, cy, p_star, 1.0, period),
        steady_radius=radius,
        max_ref_speed=float(speeds.max()) if speeds.size else 0.0,
        max_tracking_error=float(track.max()),
        loiter_tracking_error=float(track[last].max()),
        final_centre_distance=final_cd,
        p_star=p_star,
    )
