"""Scenario execution: one event loop driving the whole operation.

Dispatch discipline, in priority order whenever the device goes idle:
open sessions reserve the device outright, then operator-requested
calibration, then alarm-triggered calibration, then periodic calibration
that has come due, then the remote FIFO.  Nothing preempts: a running job
finishes (or dies with the cryostat) before any window begins.

A fault that warms the payload past the threshold kills the running
activity; jobs go back to the front of the queue marked `restarted`,
calibrations are simply dropped because recovery ends in a fresh full
calibration anyway.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import engine as ev
from .engine import Engine
from .facility import CryostatMode, Facility, FacilityError
from .scenario import Scenario
from .scheduler.jobs import Job, JobQueue, JobState, Session
from .scheduler.mapping import map_circuit
from .scheduler.metrics import OpsMetrics
from .scheduler.planner import plan_calibration, plan_maintenance
from .telemetry import DeviceSnapshot, TelemetryStore, below, record_snapshot, span_exceeds
from .twin.circuits import Circuit, CircuitError
from .twin.twin import QpuTwin

BENCH_KEY = "qpu.ghz_population"
AMBIENT_KEY = "facility.ambient_temp_c"
WATER_KEY = "facility.water_temp_c"

# modes in which jobs may run; calibration additionally needs OPERATING
_JOB_MODES = (CryostatMode.OPERATING, CryostatMode.DEGRADED)


@dataclass
class RunResult:
    scenario: Scenario
    metrics: OpsMetrics
    engine: Engine
    twin: QpuTwin
    facility: Facility
    telemetry: TelemetryStore
    queue: JobQueue

    def summary_lines(self) -> list[str]:
        m = self.metrics
        return [
            f"scenario {self.scenario.name!r} seed={self.scenario.seed} "
            f"horizon={self.scenario.duration_s / 86400:.1f} d",
            f"availability {m.availability:.4f}  utilization {m.utilization:.4f}",
            f"jobs: {m.jobs_submitted} submitted, {m.jobs_done} done, "
            f"{m.jobs_failed} failed, {m.jobs_cancelled} cancelled, "
            f"{m.jobs_queued_end} queued, {m.jobs_running_end} running, "
            f"{m.jobs_restarted} restarted",
            f"calibrations: {m.calibrations_full} full, {m.calibrations_quick} quick; "
            f"maintenance windows {m.maintenance_windows}",
            f"faults {m.faults_injected}, manual interventions {m.manual_interventions}, "
            f"alarms {m.alarms}, LN2 {m.ln2_used_l:.0f} L",
        ]


class ScenarioRuntime:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.engine = Engine(seed=scenario.seed)
        self.twin = QpuTwin(scenario.twin, seed=scenario.seed)
        self.facility = Facility(scenario.facility)
        self.telemetry = TelemetryStore()
        self.queue = JobQueue()
        self.sessions: dict[str, Session] = {}

        self._activity: str | None = None
        self._busy_until: float = 0.0
        self._running_job: Job | None = None
        self._job_end_id: int | None = None
        self._cal_end_id: int | None = None
        self._pending_exec: dict[str, tuple] = {}
        self._periodic_due: list[float] = []
        self._cal_requests: dict[str, list[str]] = {"operator": [], "alarm": []}
        self._job_specs: dict[str, dict] = {}
        self._fault_plans: dict[float, object] = {}

        self._job_busy_s = 0.0
        self._cal_full = 0
        self._cal_quick = 0
        self._alarms = 0
        self._faults_ok = 0
        self._maintenance_count = 0

        self._subscribe()
        self._install()

    # -- wiring ---------------------------------------------------------------

    def _subscribe(self) -> None:
        e = self.engine
        e.subscribe(ev.JOB_ARRIVAL, self._on_job_arrival)
        e.subscribe(ev.JOB_END, self._on_job_end)
        e.subscribe(ev.SESSION_OPEN, self._on_session_open)
        e.subscribe(ev.SESSION_CLOSE, self._on_session_close)
        e.subscribe(ev.CALIBRATION_DUE, self._on_calibration_due)
        e.subscribe(ev.CALIBRATION_END, self._on_calibration_end)
        e.subscribe(ev.BENCHMARK_END, self._on_benchmark_end)
        e.subscribe(ev.MAINTENANCE_START, self._on_maintenance_start)
        e.subscribe(ev.MAINTENANCE_END, self._on_maintenance_end)
        e.subscribe(ev.FAULT_START, self._on_fault_start)
        e.subscribe(ev.FAULT_END, self._on_fault_end)
        e.subscribe(ev.WARMUP_CROSSING, self._on_warmup_crossing)
        e.subscribe(ev.COOLDOWN_COMPLETE, self._on_cooldown_complete)
        e.subscribe(ev.TELEMETRY_SAMPLE, self._on_telemetry_sample)
        e.subscribe(ev.LN2_TOPUP, self._on_ln2_topup)

    def _install(self) -> None:
        sc = self.scenario
        record_snapshot(self.telemetry, DeviceSnapshot.from_twin(self.twin, 0.0))

        self.telemetry.watch(BENCH_KEY, "recalibration-needed",
                             below(sc.calibration.benchmark_alarm_threshold),
                             self._on_benchmark_alarm)
        self.telemetry.watch(AMBIENT_KEY, "ambient-temperature-drift",
                             span_exceeds(1.0, 86400.0), self._on_env_alarm)
        water_lo, water_hi = sc.facility.water_temp_min_c, sc.facility.water_temp_max_c
        self.telemetry.watch(
            WATER_KEY, "water-temperature-out-of-range",
            lambda store, key, t, v: v < water_lo or v > water_hi,
            self._on_env_alarm)

        t = 0.0
        while t <= sc.duration_s:
            self.engine.schedule(t, ev.TELEMETRY_SAMPLE, {"series": "tick"})
            t += sc.telemetry_interval_s
        k = 1
        while k * sc.facility.ln2_topup_interval_s <= sc.duration_s:
            self.engine.schedule(k * sc.facility.ln2_topup_interval_s, ev.LN2_TOPUP,
                                 {"liters": sc.facility.ln2_topup_liters})
            k += 1
        for due in plan_calibration(sc.calibration, sc.duration_s):
            self.engine.schedule(due, ev.CALIBRATION_DUE,
                                 {"source": "periodic", "kind": sc.calibration.kind,
                                  "nominal_s": due})
        for c in sc.operator_calibrations:
            self.engine.schedule(c.time_s, ev.CALIBRATION_DUE,
                                 {"source": "operator", "kind": c.kind,
                                  "nominal_s": c.time_s})
        for begin, end in plan_maintenance(sc.maintenance, sc.duration_s):
            self.engine.schedule(begin, ev.MAINTENANCE_START,
                                 {"duration_s": end - begin, "nominal_s": begin})
        for s in sc.sessions:
            self.sessions[s.id] = Session(id=s.id, start_s=s.start_s,
                                          duration_s=s.duration_s)
            self.engine.schedule(s.start_s, ev.SESSION_OPEN, {"id": s.id})
            self.engine.schedule(s.start_s + s.duration_s, ev.SESSION_CLOSE, {"id": s.id})
            for i in range(s.iterations):
                jid = f"{s.id}#it{i}"
                self._job_specs[jid] = {"circuit": s.circuit, "source": "session",
                                        "session_id": s.id}
                arrival = s.start_s + i * s.period_s
                if arrival <= sc.duration_s:
                    self.engine.schedule(arrival, ev.JOB_ARRIVAL, {"id": jid})
        for spec in sc.jobs:
            self._job_specs[spec.id] = {"circuit": spec.circuit, "source": "remote",
                                        "session_id": None}
            self.engine.schedule(spec.time_s, ev.JOB_ARRIVAL, {"id": spec.id})
        for f in sc.faults:
            self.engine.schedule(f.start_s, ev.FAULT_START,
                                 {"kind": f.kind, "duration_s": f.duration_s})
        for t_pt, v in sc.water_temp_c:
            self.engine.schedule(t_pt, ev.TELEMETRY_SAMPLE,
                                 {"series": WATER_KEY, "value": v})
        for t_pt, v in sc.ambient_temp_c:
            self.engine.schedule(t_pt, ev.TELEMETRY_SAMPLE,
                                 {"series": AMBIENT_KEY, "value": v})

    # -- helpers ----------------------------------------------------------------

    def _emit(self, kind: str, payload: dict) -> None:
        self.engine.schedule(self.engine.now(), kind, payload)

    def _session_reserved(self) -> bool:
        return any(s.open for s in self.sessions.values())

    def _facility_settled(self, t: float) -> bool:
        return self.facility.mode_history[-1][0] <= t

    def submit_job(self, job_id: str, circuit: Circuit) -> None:
        """External (API) submission; lands at the loop's next idle point."""
        if job_id in self._job_specs:
            raise ValueError(f"duplicate job id {job_id!r}")
        self._job_specs[job_id] = {"circuit": circuit, "source": "remote",
                                   "session_id": None}
        self.engine.submit_external(ev.JOB_ARRIVAL, {"id": job_id})

    def run_in_session(self, session_id: str, circuit: Circuit,
                       job_id: str | None = None) -> Job:
        """Interactive iteration: starts on the spot instead of queueing.

        The session must be open and the device idle; a still-running
        previous iteration raises rather than silently piling up.
        """
        t = self.engine.now()
        session = self.sessions.get(session_id)
        if session is None or not session.open:
            raise ValueError(f"session {session_id!r} is not open")
        if self._activity is not None or session.busy_until_s > t:
            raise ValueError(
                f"session {session_id!r} busy until t={max(self._busy_until, session.busy_until_s)}")
        if job_id is None:
            job_id = f"{session_id}#it{len(session.jobs)}"
        if job_id in self.queue.ledger:
            raise ValueError(f"duplicate job id {job_id!r}")
        job = Job(id=job_id, circuit=circuit, submitted_s=t, source="session",
                  session_id=session_id)
        self.queue.submit(job)
        self._start_job(job)
        return job

    # -- dispatch ---------------------------------------------------------------

    def _try_dispatch(self) -> None:
        if self._activity is not None:
            return
        t = self.engine.now()
        mode = self.facility.mode_at(t)
        if mode is CryostatMode.OPERATING and self._facility_settled(t) \
                and not self._session_reserved():
            for source in ("operator", "alarm"):
                if self._cal_requests[source]:
                    kind = self._cal_requests[source].pop(0)
                    self._start_calibration(kind, source)
                    return
            if self._periodic_due and self._periodic_due[0] <= t:
                # one window clears every slot that backed up behind it
                while self._periodic_due and self._periodic_due[0] <= t:
                    self._periodic_due.pop(0)
                self._start_calibration(self.scenario.calibration.kind, "periodic")
                return
        if mode in _JOB_MODES and not self._session_reserved():
            job = self.queue.pop_next()
            if job is not None:
                self._start_job(job)

    def _start_job(self, job: Job) -> None:
        t = self.engine.now()
        if job.source == "session":
            session = self.sessions[job.session_id]
            if not session.open:
                job.state = JobState.FAILED
                job.finished_s = t
                job.error = "session expired"
                self._emit(ev.JOB_REJECTED, {"id": job.id, "reason": job.error})
                self._try_dispatch()
                return
        self.twin.advance_to(t)
        job.state = JobState.RUNNING
        job.started_s = t
        snap = DeviceSnapshot.from_twin(self.twin)
        try:
            mapped = map_circuit(job.circuit, self.twin.topology, snap)
        except CircuitError as exc:
            job.state = JobState.FAILED
            job.finished_s = t
            job.error = f"mapping failed: {exc}"
            self._emit(ev.JOB_REJECTED, {"id": job.id, "reason": job.error})
            self._try_dispatch()
            return
        result = self.twin.execute(mapped.circuit, self.engine.rng(f"job:{job.id}"))
        self._pending_exec[job.id] = (result, mapped)
        self._activity = "job"
        self._running_job = job
        self._busy_until = t + result.duration_s
        self._job_end_id = self.engine.schedule(self._busy_until, ev.JOB_END,
                                                {"id": job.id})
        self._emit(ev.JOB_START, {"id": job.id, "source": job.source,
                                  "duration_s": result.duration_s,
                                  "restarted": job.restarted})
        if job.source == "session":
            self.sessions[job.session_id].busy_until_s = self._busy_until
            self.sessions[job.session_id].jobs.append(job.id)

    def _start_calibration(self, kind: str, source: str) -> None:
        t = self.engine.now()
        self.twin.advance_to(t)
        self.facility.enter_mode(t, CryostatMode.RECALIBRATING)
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.RECALIBRATING.value,
                                         "reason": source})
        duration = self.twin.cal_duration(kind)
        self._activity = "calibration"
        self._busy_until = t + duration
        self._emit(ev.CALIBRATION_START, {"kind": kind, "source": source,
                                          "duration_s": duration})
        self._cal_end_id = self.engine.schedule(self._busy_until, ev.CALIBRATION_END,
                                                {"kind": kind, "source": source})

    # -- event handlers -----------------------------------------------------------

    def _on_job_arrival(self, event) -> None:
        jid = event.payload["id"]
        spec = self._job_specs.get(jid)
        if spec is None:
            self._emit(ev.JOB_REJECTED, {"id": jid, "reason": "unknown job id"})
            return
        t = event.time
        if spec["source"] == "session":
            session = self.sessions[spec["session_id"]]
            if jid in self.queue.ledger:
                job = self.queue.ledger[jid]  # deferred re-arrival
            else:
                job = Job(id=jid, circuit=spec["circuit"], submitted_s=t,
                          source="session", session_id=spec["session_id"])
                self.queue.submit(job)
            if job.state is not JobState.QUEUED:
                return
            if not session.open:
                job.state = JobState.FAILED
                job.finished_s = t
                job.error = "session expired"
                self._emit(ev.JOB_REJECTED, {"id": jid, "reason": job.error})
                return
            if self._activity is not None:
                # device draining; try again the moment it frees up
                self.engine.schedule(self._busy_until, ev.JOB_ARRIVAL, {"id": jid})
                return
            mode = self.facility.mode_at(t)
            if mode not in _JOB_MODES:
                job.state = JobState.FAILED
                job.finished_s = t
                job.error = f"device unavailable ({mode.value})"
                self._emit(ev.JOB_REJECTED, {"id": jid, "reason": job.error})
                return
            self._start_job(job)
        else:
            if jid not in self.queue.ledger:
                job = Job(id=jid, circuit=spec["circuit"], submitted_s=t,
                          source="remote")
                self.queue.submit(job)
            self._try_dispatch()

    def _on_job_end(self, event) -> None:
        job = self.queue.ledger[event.payload["id"]]
        result, mapped = self._pending_exec.pop(job.id)
        t = event.time
        job.state = JobState.DONE
        job.finished_s = t
        job.histogram = result.histogram
        job.initial_layout = {str(k): v for k, v in mapped.initial_layout.items()}
        job.final_layout = {str(k): v for k, v in mapped.final_layout.items()}
        job.mapping_score = mapped.score
        self._job_busy_s += t - job.started_s
        self._activity = None
        self._running_job = None
        self._job_end_id = None
        self._try_dispatch()

    def _on_session_open(self, event) -> None:
        self.sessions[event.payload["id"]].open = True

    def _on_session_close(self, event) -> None:
        self.sessions[event.payload["id"]].open = False
        self._try_dispatch()

    def _on_calibration_due(self, event) -> None:
        p = event.payload
        if p["source"] == "operator":
            self._cal_requests["operator"].append(p["kind"])
        else:
            self._periodic_due.append(event.time)
        self._try_dispatch()

    def _on_calibration_end(self, event) -> None:
        t = event.time
        kind = event.payload["kind"]
        self.twin.advance_to(t)
        self.twin.recalibrate(kind, t)
        if kind == "full":
            self._cal_full += 1
        else:
            self._cal_quick += 1
        record_snapshot(self.telemetry, DeviceSnapshot.from_twin(self.twin, t))
        self._cal_end_id = None
        # benchmark while still holding the device
        self.facility.enter_mode(t, CryostatMode.BENCHMARKING)
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.BENCHMARKING.value,
                                         "reason": "post-calibration"})
        pop, result = self.twin.ghz_benchmark(
            self.engine.rng("benchmark"),
            n=self.scenario.benchmark_qubits,
            shots=self.scenario.benchmark_shots)
        self._activity = "benchmark"
        self._busy_until = t + result.duration_s
        self.engine.schedule(self._busy_until, ev.BENCHMARK_END,
                             {"ghz_population": pop,
                              "n_qubits": len(result.measured_qubits)})

    def _on_benchmark_end(self, event) -> None:
        t = event.time
        self.telemetry.append(BENCH_KEY, t, event.payload["ghz_population"])
        self.facility.enter_mode(t, CryostatMode.OPERATING)
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.OPERATING.value,
                                         "reason": "benchmark-complete"})
        self._activity = None
        self._try_dispatch()

    def _on_maintenance_start(self, event) -> None:
        t = event.time
        payload = dict(event.payload)
        if self._activity is not None:
            self.engine.schedule(max(self._busy_until, t), ev.MAINTENANCE_START, payload)
            return
        if self.facility.mode_at(t) is not CryostatMode.OPERATING \
                or not self._facility_settled(t):
            self.engine.schedule(t + 3600.0, ev.MAINTENANCE_START, payload)
            return
        self.facility.enter_mode(t, CryostatMode.MAINTENANCE)
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.MAINTENANCE.value,
                                         "reason": "scheduled"})
        self._activity = "maintenance"
        self._busy_until = t + payload["duration_s"]
        self._maintenance_count += 1
        self.engine.schedule(self._busy_until, ev.MAINTENANCE_END, {})

    def _on_maintenance_end(self, event) -> None:
        t = event.time
        self.facility.enter_mode(t, CryostatMode.OPERATING)
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.OPERATING.value,
                                         "reason": "maintenance-complete"})
        self._activity = None
        self._try_dispatch()

    def _on_fault_start(self, event) -> None:
        t = event.time
        kind = event.payload["kind"]
        duration = event.payload["duration_s"]
        try:
            plan = self.facility.inject_fault(kind, t, duration)
        except FacilityError as exc:
            self._emit(ev.WARNING, {"fault": kind, "skipped": str(exc)})
            return
        self._faults_ok += 1
        self._fault_plans[plan.end_s] = plan
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.DEGRADED.value,
                                         "reason": kind})
        self.engine.schedule(plan.end_s, ev.FAULT_END, {"kind": kind})
        if plan.ups_exhausted_s is not None:
            self.engine.schedule(plan.ups_exhausted_s, ev.UPS_EXHAUSTED, {"kind": kind})
        if plan.failover_restored_s is not None:
            self.engine.schedule(plan.failover_restored_s, ev.RECOVERY_STEP,
                                 {"step": "cooling-failover"})
        if plan.crossing_s is not None:
            self.engine.schedule(plan.crossing_s, ev.WARMUP_CROSSING,
                                 {"peak_k": plan.peak_k})
        if not plan.auto_restore:
            self.engine.schedule(plan.cooldown_end_s, ev.COOLDOWN_COMPLETE,
                                 {"peak_k": plan.peak_k})

    def _on_warmup_crossing(self, event) -> None:
        t = event.time
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.WARMED_UP.value,
                                         "reason": "threshold-crossed"})
        if self._activity == "job" and self._running_job is not None:
            job = self._running_job
            self.engine.cancel(self._job_end_id)
            self._pending_exec.pop(job.id, None)
            self._job_busy_s += t - job.started_s
            self.queue.requeue_front(job)
            self._emit(ev.JOB_REQUEUED, {"id": job.id, "reason": "fault interrupted"})
            self._running_job = None
            self._job_end_id = None
            self._activity = None
        elif self._activity == "calibration":
            # recovery ends in a full calibration, so the ruined one is dropped
            self.engine.cancel(self._cal_end_id)
            self._cal_end_id = None
            self._emit(ev.WARNING, {"dropped": "calibration", "reason": "fault"})
            self._activity = None
        elif self._activity == "benchmark":
            self._emit(ev.WARNING, {"dropped": "benchmark", "reason": "fault"})
            self._activity = None

    def _on_fault_end(self, event) -> None:
        t = event.time
        plan = self._fault_plans.get(t)
        if plan is None or plan.auto_restore:
            self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.OPERATING.value,
                                             "reason": "fault-cleared"})
            self._try_dispatch()
            return
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.REPAIR.value,
                                         "reason": "manual-intervention"})
        self._emit(ev.STATE_TRANSITION, {"mode": CryostatMode.COOLDOWN.value,
                                         "reason": f"peak {plan.peak_k:.1f} K"})

    def _on_cooldown_complete(self, event) -> None:
        self._start_calibration("full", "recovery")

    def _on_telemetry_sample(self, event) -> None:
        t = event.time
        series = event.payload["series"]
        if series == "tick":
            self.telemetry.upsert("facility.temperature_k", t,
                                  self.facility.temperature_k(t))
            self.telemetry.upsert("facility.power_kw", t,
                                  self.facility.power_draw_kw(t))
            self.telemetry.upsert("facility.ln2_used_l", t, self.facility.ln2_used_l)
            # drifted device metrics belong in the record too, not just the
            # post-calibration values
            record_snapshot(self.telemetry, DeviceSnapshot.from_twin(self.twin, t))
        else:
            self.telemetry.upsert(series, t, event.payload["value"])

    def _on_ln2_topup(self, event) -> None:
        if self.facility.mode_at(event.time) is CryostatMode.OPERATING:
            self.facility.note_ln2_topup(event.payload["liters"])

    # -- alarms --------------------------------------------------------------

    def _on_benchmark_alarm(self, name: str, key: str, t: float, value: float) -> None:
        self._alarms += 1
        self._cal_requests["alarm"].append(self.scenario.calibration.alarm_kind)
        self.engine.schedule(t, ev.ALARM, {"name": name, "key": key, "value": value})

    def _on_env_alarm(self, name: str, key: str, t: float, value: float) -> None:
        self._alarms += 1
        self.engine.schedule(t, ev.ALARM, {"name": name, "key": key, "value": value})

    # -- main entry ---------------------------------------------------------------

    def run(self) -> RunResult:
        sc = self.scenario
        self.engine.run_until(sc.duration_s)
        counts = self.queue.counts()
        metrics = OpsMetrics(
            total_s=sc.duration_s,
            downtime_s=self.facility.downtime_s(0.0, sc.duration_s),
            job_busy_s=self._job_busy_s,
            jobs_submitted=len(self.queue.ledger),
            jobs_done=counts["done"],
            jobs_failed=counts["failed"],
            jobs_cancelled=counts["cancelled"],
            jobs_queued_end=counts["queued"],
            jobs_running_end=counts["running"],
            jobs_restarted=sum(1 for j in self.queue.ledger.values() if j.restarted),
            calibrations_full=self._cal_full,
            calibrations_quick=self._cal_quick,
            maintenance_windows=self._maintenance_count,
            faults_injected=self._faults_ok,
            manual_interventions=self.facility.manual_interventions(sc.duration_s),
            alarms=self._alarms,
            ln2_used_l=self.facility.ln2_used_l,
        )
        return RunResult(scenario=sc, metrics=metrics, engine=self.engine,
                         twin=self.twin, facility=self.facility,
                         telemetry=self.telemetry, queue=self.queue)


def write_artifacts(result: RunResult, out_dir) -> dict[str, Path]:
    """events.jsonl, metrics.json, fidelity.csv, telemetry.csv, outbox/."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}

    events = out / "events.jsonl"
    result.engine.export_log_jsonl(events)
    paths["events"] = events

    metrics = out / "metrics.json"
    doc = {
        "schema": "qpuops-metrics/1",
        "scenario": result.scenario.name,
        "seed": result.scenario.seed,
        "metrics": result.metrics.to_dict(),
    }
    metrics.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    paths["metrics"] = metrics

    fidelity = out / "fidelity.csv"
    rows = []
    for key in result.telemetry.keys():
        if not key.startswith("fidelity."):
            continue
        _, metric, element = key.split(".", 2)
        for t, v in result.telemetry.query_range(key, 0.0, float("inf")):
            rows.append((t, metric, element, v))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    with open(fidelity, "w") as fh:
        fh.write("time_s,metric,element,value\n")
        for t, metric, element, v in rows:
            fh.write(f"{t!r},{metric},{element},{v!r}\n")
    paths["fidelity"] = fidelity

    telemetry = out / "telemetry.csv"
    result.telemetry.dump_csv(telemetry)
    paths["telemetry"] = telemetry

    outbox = out / "outbox"
    outbox.mkdir(exist_ok=True)
    for job in result.queue.ledger.values():
        (outbox / f"{job.id}.json").write_text(
            json.dumps(job.to_dict(), indent=2, sort_keys=True) + "\n")
    paths["outbox"] = outbox

    scenario_echo = out / "scenario.json"
    scenario_echo.write_text(result.scenario.to_json() + "\n")
    paths["scenario"] = scenario_echo
    return paths


def run_scenario(scenario: Scenario, out_dir=None) -> RunResult:
    result = ScenarioRuntime(scenario).run()
    if out_dir is not None:
        write_artifacts(result, out_dir)
    return result
