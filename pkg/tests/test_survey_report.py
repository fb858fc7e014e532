import json

import pytest

from qpuops.survey.report import SitingRules, evaluate_site, load_channel_dir

from conftest import flat_env, passing_channels, write_channel_dir

GOOD_SITING = SitingRules(path_width_cm=120.0, floor_capacity_kg_per_m2=1500.0,
                          distance_to_transmitter_m=400.0,
                          distance_to_fluorescent_m=5.0)


def test_complete_site_passes():
    report = evaluate_site(passing_channels(), GOOD_SITING)
    assert report.overall_pass
    assert report.missing == []
    names = {r.name for r in report.criteria}
    assert names == {"dc_magnetic", "ac_magnetic", "vibration",
                     "sound_pressure", "temperature", "humidity"}
    assert {r.name for r in report.siting} == {
        "access_path_width", "floor_capacity",
        "transmitter_distance", "fluorescent_distance"}


def test_missing_magnetic_axis_is_reported():
    chans = [c for c in passing_channels()
             if not (c.kind == "ac_magnetic_axis" and c.axis == "Y")]
    report = evaluate_site(chans, GOOD_SITING)
    assert not report.overall_pass
    assert any("ac_magnetic_axis" in m and "Y" in m for m in report.missing)


def test_missing_whole_kind_is_reported():
    chans = [c for c in passing_channels() if c.kind != "humidity"]
    report = evaluate_site(chans, GOOD_SITING)
    assert not report.overall_pass
    assert "humidity absent" in report.missing


def test_one_failing_criterion_fails_the_site():
    chans = [c for c in passing_channels() if c.kind != "humidity"]
    chans.append(flat_env("humidity", 80.0))
    report = evaluate_site(chans, GOOD_SITING)
    assert not report.overall_pass
    failed = [r.name for r in report.criteria if not r.passed]
    assert failed == ["humidity"]


def test_three_axis_vibration_accepted():
    chans = [c for c in passing_channels() if c.kind != "vibration"]
    from conftest import tone_channel
    for ax in "XYZ":
        chans.append(tone_channel("vibration", ax, "um/s", 1024.0, 12.0,
                                  [(25.0, 50.0)]))
    report = evaluate_site(chans, GOOD_SITING)
    assert report.overall_pass
    assert sum(1 for r in report.criteria if r.name == "vibration") == 3


def test_siting_minimums_are_inclusive():
    exact = SitingRules(path_width_cm=90.0, floor_capacity_kg_per_m2=1000.0,
                        distance_to_transmitter_m=100.0,
                        distance_to_fluorescent_m=2.0)
    report = evaluate_site(passing_channels(), exact)
    assert report.overall_pass


@pytest.mark.parametrize("field,value,name", [
    ("path_width_cm", 89.0, "access_path_width"),
    ("floor_capacity_kg_per_m2", 999.0, "floor_capacity"),
    ("distance_to_transmitter_m", 99.0, "transmitter_distance"),
    ("distance_to_fluorescent_m", 1.9, "fluorescent_distance"),
])
def test_each_siting_shortfall_fails(field, value, name):
    rules = SitingRules(**{**GOOD_SITING.__dict__, field: value})
    report = evaluate_site(passing_channels(), rules)
    assert not report.overall_pass
    failed = {r.name for r in report.siting if not r.passed}
    assert failed == {name}


def test_condensation_attestation_flows_through():
    rules = SitingRules(**{**GOOD_SITING.__dict__,
                           "non_condensing_attested": False})
    report = evaluate_site(passing_channels(), rules)
    assert not report.overall_pass
    hum = [r for r in report.criteria if r.name == "humidity"][0]
    assert not hum.passed


def test_report_to_json_is_loadable():
    report = evaluate_site(passing_channels(), GOOD_SITING)
    doc = json.loads(report.to_json())
    assert doc["overall_pass"] is True
    assert len(doc["criteria"]) == 6
    assert all("limit" in c and "worst" in c for c in doc["criteria"])


def test_evaluate_from_directory(tmp_path):
    write_channel_dir(tmp_path, passing_channels())
    chans = load_channel_dir(tmp_path)
    assert len(chans) == len(passing_channels())
    report = evaluate_site(chans, GOOD_SITING)
    assert report.overall_pass


def test_siting_rules_from_dict_roundtrip():
    d = {"path_width_cm": 95.0, "floor_capacity_kg_per_m2": 1200.0,
         "distance_to_transmitter_m": 150.0, "distance_to_fluorescent_m": 3.0,
         "non_condensing_attested": True}
    rules = SitingRules.from_dict(d)
    assert rules.path_width_cm == 95.0
    assert rules.non_condensing_attested is True
