from .jobs import Job, JobQueue, JobState, Session
from .mapping import MappedCircuit, map_circuit, route_with_layout
from .metrics import OpsMetrics
from .planner import CalibrationPolicy, MaintenancePolicy, plan_calibration, plan_maintenance
from .rates import estimate_output_rate

__all__ = [
    "CalibrationPolicy",
    "Job",
    "JobQueue",
    "JobState",
    "MaintenancePolicy",
    "MappedCircuit",
    "OpsMetrics",
    "Session",
    "estimate_output_rate",
    "map_circuit",
    "plan_calibration",
    "plan_maintenance",
    "route_with_layout",
]
