"""Scenario description and its JSON form.

The default scenario reproduces the published simulation set-up: victim
pose in inertial coordinates, inclined search plane, drone starting at
``[0, 0, -6]`` and the ES tuning ``alpha = 20, kappa = 0.07, omega = 0.65``.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..arva import EmiModel, TransmitterConfig
from ..esrg import EsParams
from ..geometry import HomTransform, inertial_to_plane, rpy_to_rot
from ..uav import LqrWeights, VehicleParams


class InvalidScenarioError(ValueError):
    pass


DEFAULT_SCENARIO = {
    "transmitter": {"position_inertial": [24.0866, 34.0866, -16.8773],
                    "rpy": [0.0, 0.1745, 2.7052], "worst_case": False},
    "plane": {"origin": [0.0, 0.0, -6.1268], "rpy": [0.0, 0.6162, 0.7854]},
    "drone_start": [0.0, 0.0, -6.0],
    "emi": {"bound": 1e-7, "drift_frequency": 0.01, "drift_share": 0.3},
    "es": {"alpha_max": 20.0, "kappa": 0.07, "omega": 0.65, "lam": 5.0},
    "vehicle": {"mass": 1.5, "inertia": [0.029, 0.029, 0.055], "g": 9.81,
                "thrust_min": 0.0, "thrust_max": None, "tau_max": 0.5,
                "tilt_max": 0.5},
    "lqr": {"detune": 1.0},
    "rates": {"physics_hz": 1000, "ctrl_hz": 250, "es_hz": 10, "arva_hz": 1},
    "duration": 300.0,
    "seed": 0,
    "y_filter_tau": 0.5,
}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def apply_overrides(doc: dict, overrides: dict) -> dict:
    """Return a copy of ``doc`` with dotted keys (``"es.kappa"``) replaced."""
    out = copy.deepcopy(doc)
    for dotted, value in overrides.items():
        node = out
        *path, leaf = dotted.split(".")
        for key in path:
            node = node.setdefault(key, {})
        node[leaf] = copy.deepcopy(value)
    return out


@dataclass
class Rates:
    physics_hz: int = 1000
    ctrl_hz: int = 250
    es_hz: int = 10
    arva_hz: int = 1

    def validate(self) -> None:
        chain = [self.physics_hz, self.ctrl_hz, self.es_hz, self.arva_hz]
        if any(int(r) != r or r <= 0 for r in chain):
            raise InvalidScenarioError("rates must be positive integers")
        for fast, slow in zip(chain, chain[1:]):
            if fast < slow or fast % slow:
                raise InvalidScenarioError(
                    "rates must satisfy physics >= ctrl >= es >= arva as integer multiples")


@dataclass
class Scenario:
    transmitter: TransmitterConfig
    plane: HomTransform
    drone_start: np.ndarray
    emi: EmiModel
    es: EsParams
    vehicle: VehicleParams
    lqr: LqrWeights
    rates: Rates
    duration: float
    seed: int
    y_filter_tau: float
    victim_inertial: np.ndarray = field(default_factory=lambda: np.zeros(3))
    document: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, doc: dict | None = None) -> "Scenario":
        doc = _merge(DEFAULT_SCENARIO, doc or {})
        try:
            return cls._build(doc)
        except InvalidScenarioError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidScenarioError(str(exc)) from exc

    @classmethod
    def _build(cls, doc: dict) -> "Scenario":
        plane = HomTransform.from_rpy(doc["plane"]["origin"], *doc["plane"]["rpy"])
        victim = np.asarray(doc["transmitter"]["position_inertial"], dtype=float)
        pos_plane = inertial_to_plane(plane, victim)
        if doc["transmitter"].get("worst_case"):
            from .optimum import worst_case_orientation
            R_pt, _ = worst_case_orientation(float(pos_plane[2]))
        else:
            R_pt = plane.rotation.T @ rpy_to_rot(*doc["transmitter"]["rpy"])
        transmitter = TransmitterConfig(pos_plane, R_pt)

        rates = Rates(**doc["rates"])
        rates.validate()

        seed = int(doc["seed"])
        emi_doc = doc["emi"]
        emi = EmiModel.from_bound(float(emi_doc["bound"]),
                                  seed=int(emi_doc.get("seed", seed)),
                                  drift_frequency=float(emi_doc.get("drift_frequency", 0.01)),
                                  drift_share=float(emi_doc.get("drift_share", 0.3)))

        es = EsParams(dt_es=1.0 / rates.es_hz, **doc["es"])

        veh = dict(doc["vehicle"])
        veh["inertia"] = tuple(veh["inertia"])
        vehicle = VehicleParams(**veh)

        lqr_doc = dict(doc.get("lqr") or {})
        detune = float(lqr_doc.pop("detune", 1.0))
        weights = LqrWeights(**{k: tuple(v) if isinstance(v, list) else v
                                for k, v in lqr_doc.items()})
        if detune != 1.0:
            weights = weights.detuned(detune)

        duration = float(doc["duration"])
        if not duration > 0:
            raise InvalidScenarioError("duration must be positive")
        tau = float(doc["y_filter_tau"])
        if tau < 0:
            raise InvalidScenarioError("y_filter_tau must be >= 0")

        start = np.asarray(doc["drone_start"], dtype=float)
        if start.shape != (3,) or not np.all(np.isfinite(start)):
            raise InvalidScenarioError("drone_start must be a finite 3-vector")

        return cls(transmitter=transmitter, plane=plane, drone_start=start, emi=emi,
                   es=es, vehicle=vehicle, lqr=weights, rates=rates, duration=duration,
                   seed=seed, y_filter_tau=tau, victim_inertial=victim, document=doc)

    @classmethod
    def default(cls, **overrides) -> "Scenario":
        return cls.from_dict(apply_overrides(DEFAULT_SCENARIO, overrides))

    @classmethod
    def load(cls, path) -> "Scenario":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidScenarioError(f"cannot read scenario {path}: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return copy.deepcopy(self.document)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.document, indent=2) + "\n")

    def with_overrides(self, overrides: dict) -> "Scenario":
        return Scenario.from_dict(apply_overrides(self.document, overrides))
