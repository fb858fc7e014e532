"""Exponential relaxation of calibrated gate metrics.

Each metric decays from its level right after calibration toward a floor:

    m(dt) = floor + (m_cal - floor) * exp(-dt / tau)

The floor sits a fixed drop below the achievable ceiling, so a freshly
calibrated device loses at most that drop no matter how long it idles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DAY_S = 86400.0


@dataclass(frozen=True)
class DriftParams:
    tau_1q_s: float = 14 * DAY_S
    tau_ro_s: float = 7 * DAY_S
    tau_cz_s: float = 7 * DAY_S
    floor_drop: float = 0.02

    def __post_init__(self):
        if min(self.tau_1q_s, self.tau_ro_s, self.tau_cz_s) <= 0:
            raise ValueError("drift time constants must be positive")
        if not (0.0 < self.floor_drop < 1.0):
            raise ValueError("floor_drop must lie in (0, 1)")

    def tau_for(self, family: str) -> float:
        try:
            return {"1q": self.tau_1q_s, "ro": self.tau_ro_s, "cz": self.tau_cz_s}[family]
        except KeyError:
            raise ValueError(f"unknown metric family {family!r}") from None


def drifted_fidelity(level_at_cal: float, floor: float, dt_s: float, tau_s: float) -> float:
    if dt_s < 0:
        raise ValueError("cannot evaluate drift before the calibration instant")
    return floor + (level_at_cal - floor) * math.exp(-dt_s / tau_s)
