"""Campaign-level operational metrics.

Availability counts time the device could have accepted jobs: everything
except calibration, benchmarking, maintenance, and fault recovery.  A full
calibration consuming 6000 s of a ten-day window therefore costs exactly
6000/864000 of availability.  Utilisation is job execution time over that
available time.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class OpsMetrics:
    total_s: float
    downtime_s: float
    job_busy_s: float
    jobs_submitted: int
    jobs_done: int
    jobs_failed: int
    jobs_cancelled: int
    jobs_queued_end: int
    jobs_running_end: int = 0
    jobs_restarted: int = 0
    calibrations_full: int = 0
    calibrations_quick: int = 0
    maintenance_windows: int = 0
    faults_injected: int = 0
    manual_interventions: int = 0
    alarms: int = 0
    ln2_used_l: float = 0.0

    @property
    def available_s(self) -> float:
        return self.total_s - self.downtime_s

    @property
    def availability(self) -> float:
        return self.available_s / self.total_s if self.total_s > 0 else 1.0

    @property
    def utilization(self) -> float:
        return self.job_busy_s / self.available_s if self.available_s > 0 else 0.0

    def conservation_ok(self) -> bool:
        settled = (self.jobs_done + self.jobs_failed + self.jobs_cancelled
                   + self.jobs_queued_end + self.jobs_running_end)
        return settled == self.jobs_submitted

    def to_dict(self) -> dict:
        return {
            "total_s": self.total_s,
            "downtime_s": self.downtime_s,
            "available_s": self.available_s,
            "availability": self.availability,
            "job_busy_s": self.job_busy_s,
            "utilization": self.utilization,
            "jobs": {
                "submitted": self.jobs_submitted,
                "done": self.jobs_done,
                "failed": self.jobs_failed,
                "cancelled": self.jobs_cancelled,
                "queued_at_end": self.jobs_queued_end,
                "running_at_end": self.jobs_running_end,
                "restarted": self.jobs_restarted,
            },
            "calibrations": {
                "full": self.calibrations_full,
                "quick": self.calibrations_quick,
            },
            "maintenance_windows": self.maintenance_windows,
            "faults_injected": self.faults_injected,
            "manual_interventions": self.manual_interventions,
            "alarms": self.alarms,
            "ln2_used_l": self.ln2_used_l,
            "conservation_ok": self.conservation_ok(),
        }
