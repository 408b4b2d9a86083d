"""Attitude-zone switching between the yaw-position and attitude-altitude laws."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decoupling import Mode
from .model import EPS_PHI, IDX, as_state_array


@dataclass(frozen=True)
class ZoneSpec:
    """Closed box in (theta, phi) where the attitude-altitude law is active.

    ``hysteresis`` widens the box by that margin while the attitude-altitude
    law is already active; 0 gives pure zone membership.
    """

    theta_min: float = -0.5
    theta_max: float = 0.5
    phi_min: float = -np.pi / 2 + EPS_PHI
    phi_max: float = 0.2
    hysteresis: float = 0.0

    def __post_init__(self):
        if not (self.theta_min < self.theta_max and self.phi_min < self.phi_max):
            raise ValueError("zone bounds need min < max on both axes")
        if self.hysteresis < 0:
            raise ValueError("hysteresis must be non-negative")

    def contains(self, theta: float, phi: float, margin: float = 0.0) -> bool:
        return (self.theta_min - margin <= theta <= self.theta_max + margin
                and self.phi_min - margin <= phi <= self.phi_max + margin)

    def to_dict(self) -> dict:
        return {"theta_min": self.theta_min, "theta_max": self.theta_max,
                "phi_min": self.phi_min, "phi_max": self.phi_max,
                "hysteresis": self.hysteresis}


def classify(theta: float, phi: float, spec: ZoneSpec, current=Mode.YAW_POSITION) -> Mode:
    current = Mode.coerce(current)
    margin = spec.hysteresis if current is Mode.ATTITUDE_ALTITUDE else 0.0
    if spec.contains(theta, phi, margin):
        return Mode.ATTITUDE_ALTITUDE
    return Mode.YAW_POSITION


def step_mode(s, spec: ZoneSpec, current) -> tuple[Mode, bool]:
    x = as_state_array(s)
    current = Mode.coerce(current)
    new = classify(float(x[IDX["theta"]]), float(x[IDX["phi"]]), spec, current)
    return new, new is not current
