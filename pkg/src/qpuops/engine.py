"""Deterministic discrete-event engine.

Single-threaded event loop with a stable priority queue, per-purpose
seeded random streams, and a thread-safe inbox for external submitters.
All other modules hang their behaviour off events dispatched here, which
is what makes whole-scenario runs reproducible bit-for-bit.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import queue
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

SimTime = float

# Core event kinds. Modules may introduce additional kinds; these are the
# ones the built-in components emit.
JOB_ARRIVAL = "job-arrival"
JOB_START = "job-start"
JOB_END = "job-end"
JOB_REQUEUED = "job-requeued"
JOB_REJECTED = "job-rejected"
SESSION_OPEN = "session-open"
SESSION_CLOSE = "session-close"
CALIBRATION_DUE = "calibration-due"
CALIBRATION_START = "calibration-start"
CALIBRATION_END = "calibration-end"
BENCHMARK_END = "benchmark-end"
MAINTENANCE_START = "maintenance-start"
MAINTENANCE_END = "maintenance-end"
FAULT_START = "fault-start"
FAULT_END = "fault-end"
UPS_EXHAUSTED = "ups-exhausted"
WARMUP_CROSSING = "warmup-crossing"
COOLDOWN_COMPLETE = "cooldown-complete"
RECOVERY_STEP = "recovery-step"
STATE_TRANSITION = "state-transition"
TELEMETRY_SAMPLE = "telemetry-sample"
ALARM = "alarm"
LN2_TOPUP = "ln2-topup"
WARNING = "warning"


class SimulationError(RuntimeError):
    """Unrecoverable fault raised out of the event loop."""


class SchedulingError(ValueError):
    """Attempt to schedule an event in the past."""


@dataclass(frozen=True)
class SimEvent:
    id: int
    time: SimTime
    kind: str
    payload: dict[str, Any] | None = None

    def summary(self) -> str:
        if self.payload is None:
            return ""
        return json.dumps(self.payload, sort_keys=True, separators=(",", ":"))

    def to_json_line(self) -> str:
        return json.dumps(
            {"id": self.id, "time": self.time, "kind": self.kind, "summary": self.summary()},
            sort_keys=True,
            separators=(",", ":"),
        )


@dataclass(order=True)
class _QueueEntry:
    time: SimTime
    seq: int
    event: SimEvent = field(compare=False)
    cancelled: bool = field(default=False, compare=False)


def rng_stream(seed: int, label: str) -> np.random.Generator:
    """Generator keyed by (seed, label); identical pairs give identical streams.

    The label is hashed so that adding a new stream never perturbs the
    sample sequences of existing ones.
    """
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, *words]))


class Engine:
    """Event queue plus clock. Ties at equal time break by insertion order."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._now: SimTime = 0.0
        self._heap: list[_QueueEntry] = []
        self._entries: dict[int, _QueueEntry] = {}
        self._next_id = 1
        self._seq = 0
        self._handlers: dict[str, list[Callable[[SimEvent], None]]] = {}
        self._all_handlers: list[Callable[[SimEvent], None]] = []
        self._rngs: dict[str, np.random.Generator] = {}
        self._inbox: queue.Queue = queue.Queue()
        self._inbox_lock = threading.Lock()
        self.log: list[SimEvent] = []

    def now(self) -> SimTime:
        return self._now

    def rng(self, label: str) -> np.random.Generator:
        if label not in self._rngs:
            self._rngs[label] = rng_stream(self.seed, label)
        return self._rngs[label]

    def subscribe(self, kind: str, handler: Callable[[SimEvent], None]) -> None:
        self._handlers.setdefault(kind, []).append(handler)

    def subscribe_all(self, handler: Callable[[SimEvent], None]) -> None:
        self._all_handlers.append(handler)

    def schedule(self, time: SimTime, kind: str, payload: dict[str, Any] | None = None) -> int:
        if time < self._now:
            raise SchedulingError(f"cannot schedule {kind!r} at t={time} (now={self._now})")
        event = SimEvent(id=self._next_id, time=time, kind=kind, payload=payload)
        self._next_id += 1
        entry = _QueueEntry(time=time, seq=self._seq, event=event)
        self._seq += 1
        heapq.heappush(self._heap, entry)
        self._entries[event.id] = entry
        return event.id

    def schedule_in(self, delay: SimTime, kind: str, payload: dict[str, Any] | None = None) -> int:
        return self.schedule(self._now + delay, kind, payload)

    def cancel(self, event_id: int) -> bool:
        entry = self._entries.get(event_id)
        if entry is None or entry.cancelled:
            return False
        entry.cancelled = True
        del self._entries[event_id]
        return True

    def submit_external(self, kind: str, payload: dict[str, Any] | None = None) -> None:
        """Thread-safe submission; becomes an event at the loop's next idle point."""
        with self._inbox_lock:
            self._inbox.put((kind, payload))

    def pending_count(self) -> int:
        return len(self._entries)

    def _drain_inbox(self) -> None:
        while True:
            try:
                kind, payload = self._inbox.get_nowait()
            except queue.Empty:
                return
            self.schedule(self._now, kind, payload)

    def _dispatch(self, event: SimEvent) -> None:
        self.log.append(event)
        for handler in self._handlers.get(event.kind, ()):
            try:
                handler(event)
            except Exception as exc:
                raise SimulationError(
                    f"handler for event id={event.id} kind={event.kind!r} failed: {exc}"
                ) from exc
        for handler in self._all_handlers:
            try:
                handler(event)
            except Exception as exc:
                raise SimulationError(
                    f"handler for event id={event.id} kind={event.kind!r} failed: {exc}"
                ) from exc

    def run_until(self, t_end: SimTime) -> list[SimEvent]:
        """Dispatch every event with time <= t_end; the clock lands on t_end.

        Returns the slice of the log produced by this call.
        """
        if t_end < self._now:
            raise SchedulingError(f"cannot run backwards to t={t_end} (now={self._now})")
        log_start = len(self.log)
        self._drain_inbox()
        while self._heap and self._heap[0].time <= t_end:
            entry = heapq.heappop(self._heap)
            if entry.cancelled:
                continue
            del self._entries[entry.event.id]
            self._now = entry.time
            self._dispatch(entry.event)
            self._drain_inbox()
        self._now = t_end
        self._drain_inbox()
        return self.log[log_start:]

    def export_log_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            for event in self.log:
                fh.write(event.to_json_line())
                fh.write("\n")

    def export_log_lines(self) -> Iterable[str]:
        return [event.to_json_line() for event in self.log]
