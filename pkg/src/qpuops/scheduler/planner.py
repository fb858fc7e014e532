"""Periodic calibration and maintenance planning.

Nothing clever here: calibrations recur on a fixed period, maintenance on a
much longer one, and the runtime decides at dispatch time whether a due
window has to wait for a running job to drain.
"""

from __future__ import annotations

from dataclasses import dataclass

DAY_S = 86400.0


@dataclass(frozen=True)
class CalibrationPolicy:
    period_s: float = DAY_S
    kind: str = "full"
    # benchmark scores below this raise the recalibration-needed alarm; sized
    # against the default 5-qubit check, which lands near 0.86 when fresh
    benchmark_alarm_threshold: float = 0.7
    # alarm-triggered calibrations use the cheaper procedure
    alarm_kind: str = "quick"

    def __post_init__(self):
        if self.period_s <= 0:
            raise ValueError("calibration period must be positive")
        if self.kind not in ("full", "quick") or self.alarm_kind not in ("full", "quick"):
            raise ValueError("calibration kinds must be 'full' or 'quick'")
        if not (0.0 < self.benchmark_alarm_threshold < 1.0):
            raise ValueError("benchmark_alarm_threshold must lie in (0, 1)")


@dataclass(frozen=True)
class MaintenancePolicy:
    interval_s: float = 180 * DAY_S
    duration_s: float = 1 * DAY_S

    def __post_init__(self):
        if self.interval_s <= 0 or self.duration_s <= 0:
            raise ValueError("maintenance interval and duration must be positive")
        if self.duration_s >= self.interval_s:
            raise ValueError("maintenance duration must be shorter than its interval")


def plan_calibration(policy: CalibrationPolicy, horizon_s: float,
                     start_s: float = 0.0) -> list[float]:
    """Due times k * period after start, strictly inside (start, horizon]."""
    out = []
    k = 1
    while start_s + k * policy.period_s <= horizon_s:
        out.append(start_s + k * policy.period_s)
        k += 1
    return out


def plan_maintenance(policy: MaintenancePolicy, horizon_s: float,
                     start_s: float = 0.0) -> list[tuple[float, float]]:
    """(start, end) maintenance windows whose start falls inside the horizon."""
    out = []
    k = 1
    while start_s + k * policy.interval_s < horizon_s:
        begin = start_s + k * policy.interval_s
        out.append((begin, begin + policy.duration_s))
        k += 1
    return out
