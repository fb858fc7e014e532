"""Job and session bookkeeping for the dispatch loop.

Remote jobs queue FIFO.  Sessions reserve the device for interactive use;
their iterations run immediately rather than queueing.  A job interrupted
by a fault goes back to the head of the queue with its `restarted` flag
set, so clients can tell a clean result from a rerun one.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from ..twin.circuits import Circuit


class JobState(str, enum.Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"
    CANCELLED = "cancelled"

TERMINAL_STATES = frozenset({JobState.DONE, JobState.FAILED, JobState.CANCELLED})


@dataclass
class Job:
    id: str
    circuit: Circuit
    submitted_s: float
    source: str = "remote"  # remote | session | operator
    session_id: str | None = None
    state: JobState = JobState.QUEUED
    started_s: float | None = None
    finished_s: float | None = None
    restarted: bool = False
    histogram: dict | None = None
    error: str | None = None
    initial_layout: dict | None = None
    final_layout: dict | None = None
    mapping_score: float | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "session_id": self.session_id,
            "state": self.state.value,
            "submitted_s": self.submitted_s,
            "started_s": self.started_s,
            "finished_s": self.finished_s,
            "restarted": self.restarted,
            "histogram": self.histogram,
            "error": self.error,
            "initial_layout": self.initial_layout,
            "final_layout": self.final_layout,
            "mapping_score": self.mapping_score,
        }


@dataclass
class Session:
    id: str
    start_s: float
    duration_s: float
    open: bool = False
    jobs: list[str] = field(default_factory=list)
    busy_until_s: float = 0.0

    @property
    def end_s(self) -> float:
        return self.start_s + self.duration_s


class JobQueue:
    """FIFO of queued remote jobs plus a ledger of every job ever submitted."""

    def __init__(self):
        self._fifo: deque[str] = deque()
        self.ledger: dict[str, Job] = {}

    def submit(self, job: Job) -> None:
        if job.id in self.ledger:
            raise ValueError(f"duplicate job id {job.id!r}")
        self.ledger[job.id] = job
        if job.source == "remote":
            self._fifo.append(job.id)

    def requeue_front(self, job: Job) -> None:
        """Interrupted job goes back first in line, marked as a rerun."""
        job.state = JobState.QUEUED
        job.restarted = True
        job.started_s = None
        self._fifo.appendleft(job.id)

    def cancel(self, job_id: str, t: float) -> bool:
        job = self.ledger.get(job_id)
        if job is None or job.state is not JobState.QUEUED:
            return False
        try:
            self._fifo.remove(job_id)
        except ValueError:
            return False
        job.state = JobState.CANCELLED
        job.finished_s = t
        return True

    def pop_next(self) -> Job | None:
        while self._fifo:
            job = self.ledger[self._fifo.popleft()]
            if job.state is JobState.QUEUED:
                return job
        return None

    def peek_next(self) -> Job | None:
        for job_id in self._fifo:
            job = self.ledger[job_id]
            if job.state is JobState.QUEUED:
                return job
        return None

    def queued_count(self) -> int:
        return sum(1 for j in self.ledger.values() if j.state is JobState.QUEUED)

    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in JobState}
        for job in self.ledger.values():
            out[job.state.value] += 1
        return out

    def conservation_ok(self) -> bool:
        """Every submitted job is accounted for in exactly one state bucket."""
        c = self.counts()
        terminal = c["done"] + c["failed"] + c["cancelled"]
        return terminal + c["queued"] + c["running"] == len(self.ledger)
