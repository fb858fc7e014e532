"""Scenario documents: everything one reproducible campaign needs.

A scenario is a versioned JSON file naming the device and facility
configuration, the policies, and the full external timeline (job arrivals,
sessions, faults, environment readings).  Loading is strict; anything
malformed raises ScenarioError rather than limping along.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engine import rng_stream
from .facility import FAULT_KINDS, FacilityConfig
from .scheduler.planner import CalibrationPolicy, MaintenancePolicy
from .twin.circuits import Circuit, CircuitError
from .twin.twin import TwinConfig

SCHEMA = "qpuops-scenario/1"
DAY_S = 86400.0


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class JobSpec:
    id: str
    time_s: float
    circuit: Circuit

    def to_dict(self) -> dict:
        return {"id": self.id, "time_s": self.time_s, "circuit": self.circuit.to_dict()}


@dataclass(frozen=True)
class SessionSpec:
    id: str
    start_s: float
    duration_s: float
    period_s: float
    iterations: int
    circuit: Circuit

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "start_s": self.start_s,
            "duration_s": self.duration_s,
            "period_s": self.period_s,
            "iterations": self.iterations,
            "circuit": self.circuit.to_dict(),
        }


@dataclass(frozen=True)
class FaultSpec:
    kind: str
    start_s: float
    duration_s: float

    def to_dict(self) -> dict:
        return {"kind": self.kind, "start_s": self.start_s, "duration_s": self.duration_s}


@dataclass(frozen=True)
class OperatorCalSpec:
    time_s: float
    kind: str = "full"

    def to_dict(self) -> dict:
        return {"time_s": self.time_s, "kind": self.kind}


@dataclass
class Scenario:
    name: str = "scenario"
    seed: int = 0
    duration_s: float = 10 * DAY_S
    twin: TwinConfig = field(default_factory=TwinConfig)
    facility: FacilityConfig = field(default_factory=FacilityConfig)
    calibration: CalibrationPolicy = field(default_factory=CalibrationPolicy)
    maintenance: MaintenancePolicy = field(default_factory=MaintenancePolicy)
    # default chosen so routine samples never land inside a calibration window
    telemetry_interval_s: float = 21600.0
    # short chain by default: cheap, and its fresh score sits well clear of
    # the alarm threshold; None benchmarks the full snake path instead
    benchmark_qubits: int | None = 5
    benchmark_shots: int = 500
    jobs: list[JobSpec] = field(default_factory=list)
    sessions: list[SessionSpec] = field(default_factory=list)
    faults: list[FaultSpec] = field(default_factory=list)
    operator_calibrations: list[OperatorCalSpec] = field(default_factory=list)
    water_temp_c: list[tuple[float, float]] = field(default_factory=list)
    ambient_temp_c: list[tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.duration_s <= 0:
            raise ScenarioError("duration_s must be positive")
        if self.telemetry_interval_s <= 0:
            raise ScenarioError("telemetry_interval_s must be positive")
        if self.benchmark_shots < 1:
            raise ScenarioError("benchmark_shots must be positive")
        seen = set()
        for spec in self.jobs:
            if spec.id in seen:
                raise ScenarioError(f"duplicate job id {spec.id!r}")
            seen.add(spec.id)
            if not (0.0 <= spec.time_s <= self.duration_s):
                raise ScenarioError(f"job {spec.id!r} arrives outside the horizon")
        for s in self.sessions:
            if s.id in seen:
                raise ScenarioError(f"session id {s.id!r} collides with a job id")
            seen.add(s.id)
            if s.duration_s <= 0 or s.period_s <= 0 or s.iterations < 1:
                raise ScenarioError(f"session {s.id!r} has a non-positive shape")
            if not (0.0 <= s.start_s < self.duration_s):
                raise ScenarioError(f"session {s.id!r} starts outside the horizon")
        for f in self.faults:
            if f.kind not in FAULT_KINDS:
                raise ScenarioError(f"unknown fault kind {f.kind!r}")
            if f.duration_s <= 0 or not (0.0 <= f.start_s < self.duration_s):
                raise ScenarioError(f"fault {f.kind!r} misplaced in the horizon")
        for c in self.operator_calibrations:
            if c.kind not in ("full", "quick"):
                raise ScenarioError(f"operator calibration kind {c.kind!r} unknown")
        for series_name, series in (("water_temp_c", self.water_temp_c),
                                    ("ambient_temp_c", self.ambient_temp_c)):
            times = [t for t, _ in series]
            if times != sorted(times):
                raise ScenarioError(f"{series_name} samples must be time-ordered")

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "name": self.name,
            "seed": self.seed,
            "duration_s": self.duration_s,
            "twin": _dataclass_dict(self.twin),
            "facility": _dataclass_dict(self.facility),
            "calibration": _dataclass_dict(self.calibration),
            "maintenance": _dataclass_dict(self.maintenance),
            "telemetry_interval_s": self.telemetry_interval_s,
            "benchmark_qubits": self.benchmark_qubits,
            "benchmark_shots": self.benchmark_shots,
            "jobs": [j.to_dict() for j in self.jobs],
            "sessions": [s.to_dict() for s in self.sessions],
            "faults": [f.to_dict() for f in self.faults],
            "operator_calibrations": [c.to_dict() for c in self.operator_calibrations],
            "water_temp_c": [[t, v] for t, v in self.water_temp_c],
            "ambient_temp_c": [[t, v] for t, v in self.ambient_temp_c],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        if not isinstance(d, dict):
            raise ScenarioError("scenario document must be a JSON object")
        schema = d.get("schema")
        if schema != SCHEMA:
            raise ScenarioError(f"unsupported scenario schema {schema!r} (want {SCHEMA!r})")
        try:
            twin = TwinConfig.from_dict(d.get("twin", {}))
            facility = FacilityConfig.from_dict(d.get("facility", {}))
            calibration = CalibrationPolicy(**d.get("calibration", {}))
            maintenance = MaintenancePolicy(**d.get("maintenance", {}))
            jobs = [JobSpec(j["id"], float(j["time_s"]), Circuit.from_dict(j["circuit"]))
                    for j in d.get("jobs", [])]
            sessions = [SessionSpec(s["id"], float(s["start_s"]), float(s["duration_s"]),
                                    float(s["period_s"]), int(s["iterations"]),
                                    Circuit.from_dict(s["circuit"]))
                        for s in d.get("sessions", [])]
            faults = [FaultSpec(f["kind"], float(f["start_s"]), float(f["duration_s"]))
                      for f in d.get("faults", [])]
            op_cals = [OperatorCalSpec(float(c["time_s"]), c.get("kind", "full"))
                       for c in d.get("operator_calibrations", [])]
            return cls(
                name=str(d.get("name", "scenario")),
                seed=int(d.get("seed", 0)),
                duration_s=float(d["duration_s"]),
                twin=twin,
                facility=facility,
                calibration=calibration,
                maintenance=maintenance,
                telemetry_interval_s=float(d.get("telemetry_interval_s", 21600.0)),
                benchmark_qubits=d.get("benchmark_qubits"),
                benchmark_shots=int(d.get("benchmark_shots", 500)),
                jobs=jobs,
                sessions=sessions,
                faults=faults,
                operator_calibrations=op_cals,
                water_temp_c=[(float(t), float(v)) for t, v in d.get("water_temp_c", [])],
                ambient_temp_c=[(float(t), float(v)) for t, v in d.get("ambient_temp_c", [])],
            )
        except ScenarioError:
            raise
        except (KeyError, TypeError, ValueError, CircuitError) as exc:
            raise ScenarioError(f"malformed scenario: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc

    @classmethod
    def load(cls, path) -> "Scenario":
        return cls.from_json(Path(path).read_text())


def _dataclass_dict(obj) -> dict:
    out = {}
    for name in obj.__dataclass_fields__:
        value = getattr(obj, name)
        if hasattr(value, "__dataclass_fields__"):
            out[name] = _dataclass_dict(value)
        else:
            out[name] = value
    return out


# -- synthetic campaign builder -------------------------------------------------


def random_circuit(rng: np.random.Generator, width: int, depth: int,
                   shots: int = 100, name: str = "random") -> Circuit:
    """Random native circuit on `width` logical qubits, all qubits measured."""
    circ = Circuit(width=width, shots=shots, name=name)
    for _ in range(depth):
        if width >= 2 and rng.random() < 0.4:
            a, b = rng.choice(width, size=2, replace=False)
            circ.cz(int(a), int(b))
        else:
            q = int(rng.integers(0, width))
            theta = float(rng.uniform(0, 2 * math.pi))
            phi = float(rng.uniform(0, 2 * math.pi))
            circ.prx(q, theta, phi)
    circ.measure_all(range(width))
    return circ


def synthetic_scenario(seed: int,
                       duration_s: float = 3 * DAY_S,
                       n_jobs: int = 30,
                       include_sessions: bool = True,
                       include_faults: bool = True,
                       name: str | None = None) -> Scenario:
    """Random but reproducible campaign used by stress tests and scripts."""
    rng = rng_stream(seed, "synthetic-scenario")
    jobs = []
    arrivals = np.sort(rng.uniform(0.0, duration_s * 0.95, size=n_jobs))
    for i, t in enumerate(arrivals):
        width = int(rng.integers(1, 5))
        depth = int(rng.integers(1, 9))
        shots = int(rng.integers(20, 200))
        jobs.append(JobSpec(f"job-{i:04d}", float(t),
                            random_circuit(rng, width, depth, shots, name=f"rnd{i}")))

    sessions = []
    if include_sessions and duration_s > DAY_S / 2:
        n_sessions = int(rng.integers(1, 3))
        for k in range(n_sessions):
            start = float(rng.uniform(0.0, duration_s * 0.7))
            sessions.append(SessionSpec(
                id=f"sess-{k}",
                start_s=start,
                duration_s=float(rng.uniform(1800.0, 7200.0)),
                period_s=float(rng.uniform(120.0, 600.0)),
                iterations=int(rng.integers(2, 8)),
                circuit=random_circuit(rng, 2, 4, shots=50, name=f"sess{k}"),
            ))

    faults = []
    if include_faults:
        n_faults = int(rng.integers(1, 3))
        kinds = rng.choice(len(FAULT_KINDS), size=n_faults)
        starts = np.sort(rng.uniform(duration_s * 0.1, duration_s * 0.8, size=n_faults))
        for kind_idx, start in zip(kinds, starts):
            kind = FAULT_KINDS[int(kind_idx)]
            if kind == "grid_loss":
                dur = float(rng.uniform(60.0, 1800.0))
            elif kind == "cooling_loss":
                dur = float(rng.uniform(60.0, 4 * 3600.0))
            else:
                dur = float(rng.uniform(0.5 * DAY_S, 1.5 * DAY_S))
            faults.append(FaultSpec(kind, float(start), dur))

    return Scenario(
        name=name or f"synthetic-{seed}",
        seed=seed,
        duration_s=duration_s,
        benchmark_qubits=6,
        benchmark_shots=300,
        jobs=jobs,
        sessions=sessions,
        faults=faults,
    )
