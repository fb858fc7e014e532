"""Append-only telemetry with range queries and edge-triggered watches.

One store holds many named series.  Appends must move strictly forward in
time per key; upsert additionally allows replacing the value at the exact
latest timestamp (sensor re-reads).  Watches are edge triggered: the
callback fires when a predicate flips from False to True, then stays quiet
until the predicate has released.
"""

from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .twin.twin import QpuTwin

Predicate = Callable[["TelemetryStore", str, float, float], bool]
FireCallback = Callable[[str, str, float, float], None]  # (watch name, key, t, value)


class TelemetryError(ValueError):
    pass


def below(threshold: float) -> Predicate:
    return lambda store, key, t, v: v < threshold


def above(threshold: float) -> Predicate:
    return lambda store, key, t, v: v > threshold


def span_exceeds(span: float, window_s: float) -> Predicate:
    """True when max - min over the trailing window exceeds span."""

    def pred(store: "TelemetryStore", key: str, t: float, v: float) -> bool:
        points = store.query_range(key, t - window_s, t) or []
        values = [p[1] for p in points]
        return bool(values) and (max(values) - min(values)) > span

    return pred


@dataclass
class _Watch:
    key: str
    name: str
    predicate: Predicate
    on_fire: FireCallback
    active: bool = False


class TelemetryStore:
    def __init__(self):
        self._times: dict[str, list[float]] = {}
        self._values: dict[str, list[float]] = {}
        self._watches: list[_Watch] = []

    def keys(self) -> list[str]:
        return sorted(self._times)

    def __contains__(self, key: str) -> bool:
        return key in self._times

    def append(self, key: str, t: float, value: float) -> None:
        times = self._times.setdefault(key, [])
        values = self._values.setdefault(key, [])
        if times and t <= times[-1]:
            raise TelemetryError(
                f"append to {key!r} at t={t} not after last point t={times[-1]}")
        times.append(float(t))
        values.append(float(value))
        self._fire_watches(key, t, value)

    def upsert(self, key: str, t: float, value: float) -> None:
        """Like append, but a point at exactly the latest timestamp is replaced."""
        times = self._times.get(key)
        if times and t == times[-1]:
            self._values[key][-1] = float(value)
            self._fire_watches(key, t, value)
            return
        self.append(key, t, value)

    def latest(self, key: str):
        times = self._times.get(key)
        if not times:
            return None
        return times[-1], self._values[key][-1]

    def query_range(self, key: str, t0: float, t1: float):
        """Points with t0 <= t <= t1, or None when the key has never been seen."""
        if key not in self._times:
            return None
        times = self._times[key]
        values = self._values[key]
        lo = bisect.bisect_left(times, t0)
        hi = bisect.bisect_right(times, t1)
        return list(zip(times[lo:hi], values[lo:hi]))

    def aggregate(self, key: str, t0: float, t1: float, agg: str):
        points = self.query_range(key, t0, t1)
        if points is None:
            return None
        vals = [v for _, v in points]
        if not vals:
            return None
        if agg == "min":
            return min(vals)
        if agg == "max":
            return max(vals)
        if agg == "mean":
            return sum(vals) / len(vals)
        if agg == "last":
            return vals[-1]
        if agg == "count":
            return float(len(vals))
        raise TelemetryError(f"unknown aggregation {agg!r}")

    # -- watches ----------------------------------------------------------

    def watch(self, key: str, name: str, predicate: Predicate,
              on_fire: FireCallback) -> None:
        self._watches.append(_Watch(key, name, predicate, on_fire))

    def _fire_watches(self, key: str, t: float, value: float) -> None:
        for w in self._watches:
            if w.key != key:
                continue
            state = bool(w.predicate(self, key, t, value))
            if state and not w.active:
                w.on_fire(w.name, key, t, value)
            w.active = state

    # -- persistence --------------------------------------------------------

    def dump_csv(self, target) -> None:
        """Write `key,timestamp_s,value` rows, keys sorted, times ascending."""
        own = isinstance(target, (str, Path))
        fh = open(target, "w", newline="") if own else target
        try:
            writer = csv.writer(fh)
            writer.writerow(["key", "timestamp_s", "value"])
            for key in self.keys():
                for t, v in zip(self._times[key], self._values[key]):
                    writer.writerow([key, repr(t), repr(v)])
        finally:
            if own:
                fh.close()

    @classmethod
    def load_csv(cls, source) -> "TelemetryStore":
        own = isinstance(source, (str, Path))
        fh = open(source, newline="") if own else source
        try:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["key", "timestamp_s", "value"]:
                raise TelemetryError(f"unexpected CSV header {header!r}")
            rows: dict[str, list[tuple[float, float]]] = {}
            for row in reader:
                if not row:
                    continue
                if len(row) != 3:
                    raise TelemetryError(f"malformed row {row!r}")
                rows.setdefault(row[0], []).append((float(row[1]), float(row[2])))
        finally:
            if own:
                fh.close()
        store = cls()
        for key in sorted(rows):
            for t, v in sorted(rows[key]):
                store.append(key, t, v)
        return store

    def dumps_csv(self) -> str:
        buf = io.StringIO()
        self.dump_csv(buf)
        return buf.getvalue()


# -- device snapshots ---------------------------------------------------------


@dataclass(frozen=True)
class DeviceSnapshot:
    """Frozen copy of every drifted device metric at one instant."""

    time_s: float
    f_1q: dict
    f_ro: dict
    f_cz: dict
    last_full_cal_s: float
    last_quick_cal_s: float | None

    @classmethod
    def from_twin(cls, twin: QpuTwin, t: float | None = None) -> "DeviceSnapshot":
        s = twin.snapshot(t)
        return cls(
            time_s=s["time_s"],
            f_1q={int(k): v for k, v in s["f_1q"].items()},
            f_ro={int(k): v for k, v in s["f_ro"].items()},
            f_cz={tuple(int(x) for x in k.split("-")): v for k, v in s["f_cz"].items()},
            last_full_cal_s=s["last_full_cal_s"],
            last_quick_cal_s=s["last_quick_cal_s"],
        )

    def to_dict(self) -> dict:
        return {
            "time_s": self.time_s,
            "f_1q": {str(k): v for k, v in self.f_1q.items()},
            "f_ro": {str(k): v for k, v in self.f_ro.items()},
            "f_cz": {f"{a}-{b}": v for (a, b), v in self.f_cz.items()},
            "last_full_cal_s": self.last_full_cal_s,
            "last_quick_cal_s": self.last_quick_cal_s,
        }


def record_snapshot(store: TelemetryStore, snap: DeviceSnapshot) -> None:
    """Spread a snapshot across per-element series (fidelity.f_1q.3 and so on)."""
    t = snap.time_s
    for q, v in snap.f_1q.items():
        store.upsert(f"fidelity.f_1q.{q}", t, v)
    for q, v in snap.f_ro.items():
        store.upsert(f"fidelity.f_ro.{q}", t, v)
    for (a, b), v in snap.f_cz.items():
        store.upsert(f"fidelity.f_cz.{a}-{b}", t, v)
