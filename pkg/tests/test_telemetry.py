"""Time-series store: ordering, queries, watches, persistence."""

import pytest

from qpuops.telemetry import (
    DeviceSnapshot,
    TelemetryError,
    TelemetryStore,
    above,
    below,
    record_snapshot,
    span_exceeds,
)
from qpuops.twin.twin import QpuTwin


@pytest.fixture
def store():
    s = TelemetryStore()
    for t, v in [(0.0, 10.0), (60.0, 11.0), (120.0, 9.5), (180.0, 12.0)]:
        s.append("water.temp_c", t, v)
    return s


def test_append_enforces_strict_time_order(store):
    with pytest.raises(TelemetryError, match="not after last"):
        store.append("water.temp_c", 180.0, 1.0)
    with pytest.raises(TelemetryError, match="not after last"):
        store.append("water.temp_c", 10.0, 1.0)


def test_upsert_replaces_latest_point(store):
    store.upsert("water.temp_c", 180.0, 99.0)
    assert store.latest("water.temp_c") == (180.0, 99.0)
    # count unchanged
    assert store.aggregate("water.temp_c", 0.0, 1e9, "count") == 4.0


def test_upsert_appends_new_time(store):
    store.upsert("water.temp_c", 240.0, 13.0)
    assert store.latest("water.temp_c") == (240.0, 13.0)


def test_upsert_cannot_rewrite_interior(store):
    with pytest.raises(TelemetryError):
        store.upsert("water.temp_c", 60.0, 1.0)


def test_latest_on_unknown_key(store):
    assert store.latest("nope") is None


def test_query_range_distinguishes_unknown_from_empty(store):
    assert store.query_range("nope", 0.0, 1.0) is None
    assert store.query_range("water.temp_c", 500.0, 600.0) == []


def test_query_range_is_inclusive(store):
    pts = store.query_range("water.temp_c", 60.0, 120.0)
    assert pts == [(60.0, 11.0), (120.0, 9.5)]


def test_aggregates(store):
    assert store.aggregate("water.temp_c", 0.0, 180.0, "min") == 9.5
    assert store.aggregate("water.temp_c", 0.0, 180.0, "max") == 12.0
    assert store.aggregate("water.temp_c", 0.0, 180.0, "mean") == pytest.approx(10.625)
    assert store.aggregate("water.temp_c", 0.0, 180.0, "last") == 12.0
    assert store.aggregate("water.temp_c", 0.0, 180.0, "count") == 4.0


def test_aggregate_none_cases(store):
    assert store.aggregate("nope", 0.0, 1.0, "mean") is None
    assert store.aggregate("water.temp_c", 900.0, 999.0, "mean") is None


def test_aggregate_unknown_kind(store):
    with pytest.raises(TelemetryError, match="unknown aggregation"):
        store.aggregate("water.temp_c", 0.0, 180.0, "median")
    # callers branching on ValueError keep working
    assert issubclass(TelemetryError, ValueError)


def test_keys_and_contains(store):
    store.append("power.kw", 0.0, 20.0)
    assert store.keys() == ["power.kw", "water.temp_c"]
    assert "power.kw" in store
    assert "nope" not in store


def test_watch_fires_on_rising_edge_only():
    s = TelemetryStore()
    fired = []
    s.watch("x", "x-high", above(5.0), lambda *a: fired.append(a))
    s.append("x", 0.0, 1.0)
    s.append("x", 1.0, 6.0)   # edge: fires
    s.append("x", 2.0, 7.0)   # still high: no refire
    s.append("x", 3.0, 2.0)   # reset
    s.append("x", 4.0, 8.0)   # second edge
    assert len(fired) == 2
    assert fired[0] == ("x-high", "x", 1.0, 6.0)
    assert fired[1] == ("x-high", "x", 4.0, 8.0)


def test_watch_below_predicate():
    s = TelemetryStore()
    fired = []
    s.watch("f", "f-low", below(0.8), lambda *a: fired.append(a))
    s.append("f", 0.0, 0.9)
    s.append("f", 1.0, 0.79)
    assert len(fired) == 1


def test_watch_ignores_other_keys():
    s = TelemetryStore()
    fired = []
    s.watch("a", "w", above(0.0), lambda *a: fired.append(a))
    s.append("b", 0.0, 99.0)
    assert fired == []


def test_span_exceeds_window():
    s = TelemetryStore()
    fired = []
    s.watch("t", "t-swing", span_exceeds(1.0, 100.0), lambda *a: fired.append(a))
    s.append("t", 0.0, 10.0)
    s.append("t", 50.0, 10.5)    # span 0.5: quiet
    s.append("t", 90.0, 11.5)    # span 1.5 in window: fires
    s.append("t", 95.0, 11.4)    # still wide: no refire
    s.append("t", 300.0, 11.4)   # old points out of window: reset
    s.append("t", 310.0, 13.0)   # new swing
    assert len(fired) == 2


def test_csv_round_trip(store, tmp_path):
    store.append("power.kw", 5.0, 20.0)
    path = tmp_path / "telemetry.csv"
    store.dump_csv(path)
    back = TelemetryStore.load_csv(path)
    assert back.keys() == store.keys()
    for key in store.keys():
        assert back.query_range(key, -1e18, 1e18) == store.query_range(key, -1e18, 1e18)


def test_csv_header_is_stable(store):
    text = store.dumps_csv()
    assert text.splitlines()[0] == "key,timestamp_s,value"


def test_load_csv_rejects_foreign_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("time,series,val\n1,x,2\n")
    with pytest.raises(TelemetryError, match="unexpected CSV header"):
        TelemetryStore.load_csv(p)


def test_device_snapshot_from_twin_parses_keys():
    twin = QpuTwin(seed=0)
    snap = DeviceSnapshot.from_twin(twin, 100.0)
    assert snap.time_s == 100.0
    assert set(snap.f_1q) == set(range(20))
    assert set(snap.f_ro) == set(range(20))
    assert (0, 1) in snap.f_cz and len(snap.f_cz) == 31
    assert snap.to_dict()["f_cz"]["0-1"] == snap.f_cz[(0, 1)]


def test_record_snapshot_series_names():
    twin = QpuTwin(seed=0)
    s = TelemetryStore()
    record_snapshot(s, DeviceSnapshot.from_twin(twin, 0.0))
    assert "fidelity.f_1q.0" in s
    assert "fidelity.f_ro.19" in s
    assert "fidelity.f_cz.0-1" in s
    assert s.latest("fidelity.f_1q.0") == (0.0, twin.config.f_1q_ceiling)
    # recording again at a later instant appends rather than clobbering
    record_snapshot(s, DeviceSnapshot.from_twin(twin, 60.0))
    assert s.aggregate("fidelity.f_1q.0", 0.0, 60.0, "count") == 2.0
