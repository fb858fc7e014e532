"""Operations stack for a colocated superconducting quantum device.

Site survey evaluation, a calibration-tracking digital twin, telemetry,
facility fault recovery, a calibration-aware scheduler, and the scenario
runtime that drives them all from one deterministic event loop.
"""

__version__ = "0.1.0"

from .engine import Engine, SimEvent, rng_stream
from .scenario import Scenario, ScenarioError, synthetic_scenario
from .runtime import RunResult, ScenarioRuntime, run_scenario

__all__ = [
    "Engine",
    "RunResult",
    "Scenario",
    "ScenarioError",
    "ScenarioRuntime",
    "SimEvent",
    "rng_stream",
    "run_scenario",
    "synthetic_scenario",
    "__version__",
]
