"""HTTP facade: endpoints, status codes, clock control."""

import pytest
from fastapi.testclient import TestClient

from qpuops.httpapi import create_app
from qpuops.runtime import ScenarioRuntime
from qpuops.scenario import Scenario
from qpuops.twin.circuits import Circuit

DAY_S = 86400.0


@pytest.fixture
def client():
    sc = Scenario(name="api", seed=0, duration_s=3 * DAY_S)
    runtime = ScenarioRuntime(sc)
    return TestClient(create_app(runtime))


def _bell_doc(shots=100):
    return Circuit(width=2, shots=shots).h(0).h(1).cz(0, 1).h(1).measure_all().to_dict()


def test_properties_shape(client):
    doc = client.get("/properties").json()
    topo = doc["topology"]
    assert (topo["rows"], topo["cols"], topo["n_qubits"]) == (4, 5, 20)
    assert len(topo["couplers"]) == 31
    assert all(len(e) == 2 for e in topo["couplers"])
    assert doc["native_operations"] == ["prx", "cz", "measure"]
    assert doc["reset_duration_s"] == 300e-6
    assert doc["output_rate_bit_s"] == pytest.approx(533333.3333, rel=1e-6)
    assert doc["mode"] == "operating"
    assert doc["time_s"] == 0.0
    assert set(doc["calibration"]["f_1q"]) == {str(q) for q in range(20)}


def test_job_lifecycle(client):
    r = client.post("/jobs", json={"circuit": _bell_doc(), "id": "mine"})
    assert r.status_code == 200
    body = r.json()
    assert body["id"] == "mine"
    # ingested at the current instant and started on the idle device
    assert body["state"] in ("queued", "running")

    r2 = client.post("/advance", json={"dt": 60.0})
    assert r2.status_code == 200
    assert r2.json()["time_s"] == 60.0

    doc = client.get("/jobs/mine").json()
    assert doc["state"] == "done"
    assert doc["histogram"] is not None
    assert sum(doc["histogram"].values()) == 100
    assert doc["initial_layout"] is not None


def test_job_auto_id(client):
    r = client.post("/jobs", json={"circuit": _bell_doc()})
    assert r.json()["id"].startswith("api-")


def test_duplicate_job_conflict(client):
    client.post("/jobs", json={"circuit": _bell_doc(), "id": "dup"})
    r = client.post("/jobs", json={"circuit": _bell_doc(), "id": "dup"})
    assert r.status_code == 409


def test_malformed_circuit_rejected(client):
    bad = {"width": 2, "gates": [{"op": "cz", "qubits": [0, 0]}]}
    r = client.post("/jobs", json={"circuit": bad})
    assert r.status_code == 400
    r2 = client.post("/jobs", json={"circuit": {"gates": []}})
    assert r2.status_code == 400


def test_unknown_job_404(client):
    assert client.get("/jobs/nothing").status_code == 404


def test_metrics_range_and_aggregate(client):
    client.post("/advance", json={"dt": DAY_S + 7000.0})  # one cal + benchmark
    r = client.get("/metrics", params={"key": "qpu.ghz_population"})
    assert r.status_code == 200
    pts = r.json()["points"]
    assert len(pts) == 1
    assert 0.0 < pts[0][1] <= 1.0

    r2 = client.get("/metrics", params={"key": "facility.power_kw", "agg": "mean"})
    assert r2.status_code == 200
    assert r2.json() == {"key": "facility.power_kw", "agg": "mean", "value": 20.0}


def test_metrics_known_key_empty_range_yields_null_value(client):
    client.post("/advance", json={"dt": 100.0})
    r = client.get("/metrics", params={"key": "facility.power_kw", "agg": "mean",
                                       "t0": 50.0, "t1": 60.0})
    assert r.status_code == 200
    assert r.json()["value"] is None


def test_metrics_unknown_key_404(client):
    assert client.get("/metrics", params={"key": "nope"}).status_code == 404
    assert client.get("/metrics",
                      params={"key": "nope", "agg": "mean"}).status_code == 404


def test_metrics_unknown_agg_400(client):
    client.post("/advance", json={"dt": 100.0})
    r = client.get("/metrics", params={"key": "facility.power_kw", "agg": "median"})
    assert r.status_code == 400


def test_advance_rejects_negative(client):
    r = client.post("/advance", json={"dt": -1.0})
    assert r.status_code == 400


def test_mode_reflects_calibration_window(client):
    client.post("/advance", json={"dt": DAY_S + 100.0})  # inside the daily cal
    assert client.get("/properties").json()["mode"] == "recalibrating"
