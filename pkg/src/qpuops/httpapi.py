"""Small HTTP facade over a live runtime.

The service wraps one ScenarioRuntime; submissions go through the engine's
thread-safe inbox and the simulation clock only moves when a client asks
it to (POST /advance), which keeps the whole thing deterministic and easy
to drive from tests.
"""

from __future__ import annotations

import itertools

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .runtime import ScenarioRuntime
from .scheduler.rates import estimate_output_rate
from .twin.circuits import Circuit, CircuitError


class JobSubmission(BaseModel):
    circuit: dict
    id: str | None = None


class AdvanceRequest(BaseModel):
    dt: float


def create_app(runtime: ScenarioRuntime) -> FastAPI:
    app = FastAPI(title="qpuops", docs_url=None, redoc_url=None)
    ids = itertools.count()

    @app.get("/properties")
    def properties():
        twin = runtime.twin
        cfg = twin.config
        return {
            "topology": {
                "rows": twin.topology.rows,
                "cols": twin.topology.cols,
                "n_qubits": twin.topology.n_qubits,
                "couplers": [list(e) for e in twin.topology.couplers()],
            },
            "native_operations": ["prx", "cz", "measure"],
            "reset_duration_s": cfg.reset_duration_s,
            "output_rate_bit_s": estimate_output_rate(
                twin.topology.n_qubits, cfg.reset_duration_s),
            "mode": runtime.facility.mode_at(runtime.engine.now()).value,
            "time_s": runtime.engine.now(),
            "calibration": twin.snapshot(),
        }

    @app.get("/metrics")
    def metrics(key: str, t0: float | None = None, t1: float | None = None,
                agg: str | None = None):
        lo = 0.0 if t0 is None else t0
        hi = float("inf") if t1 is None else t1
        if agg is not None:
            try:
                value = runtime.telemetry.aggregate(key, lo, hi, agg)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            if value is None and key not in runtime.telemetry:
                raise HTTPException(status_code=404, detail=f"unknown series {key!r}")
            return {"key": key, "agg": agg, "value": value}
        points = runtime.telemetry.query_range(key, lo, hi)
        if points is None:
            raise HTTPException(status_code=404, detail=f"unknown series {key!r}")
        return {"key": key, "points": [[t, v] for t, v in points]}

    @app.post("/jobs")
    def submit(body: JobSubmission):
        try:
            circuit = Circuit.from_dict(body.circuit)
        except CircuitError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        job_id = body.id if body.id is not None else f"api-{next(ids):04d}"
        try:
            runtime.submit_job(job_id, circuit)
        except ValueError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        # ingest the submission at the current instant so state is queryable
        runtime.engine.run_until(runtime.engine.now())
        job = runtime.queue.ledger.get(job_id)
        state = job.state.value if job is not None else "queued"
        return {"id": job_id, "state": state}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        job = runtime.queue.ledger.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job.to_dict()

    @app.post("/advance")
    def advance(body: AdvanceRequest):
        if body.dt < 0:
            raise HTTPException(status_code=400, detail="dt must be non-negative")
        runtime.engine.run_until(runtime.engine.now() + body.dt)
        return {"time_s": runtime.engine.now()}

    return app
