"""Whole-site evaluation: all six criteria plus the physical siting rules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .channels import ChannelError, SurveyChannel, load_channel_file
from .criteria import (
    CriterionResult,
    check_ac_magnetic,
    check_dc_magnetic,
    check_humidity,
    check_sound,
    check_temperature,
    check_vibration,
)

PATH_WIDTH_MIN_CM = 90.0
FLOOR_CAPACITY_MIN_KG_M2 = 1000.0
TRANSMITTER_DISTANCE_MIN_M = 100.0
FLUORESCENT_DISTANCE_MIN_M = 2.0


@dataclass
class SitingRules:
    path_width_cm: float
    floor_capacity_kg_per_m2: float
    distance_to_transmitter_m: float
    distance_to_fluorescent_m: float
    non_condensing_attested: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "SitingRules":
        return cls(
            path_width_cm=float(d["path_width_cm"]),
            floor_capacity_kg_per_m2=float(d["floor_capacity_kg_per_m2"]),
            distance_to_transmitter_m=float(d["distance_to_transmitter_m"]),
            distance_to_fluorescent_m=float(d["distance_to_fluorescent_m"]),
            non_condensing_attested=bool(d.get("non_condensing_attested", True)),
        )


@dataclass
class SiteReport:
    criteria: list[CriterionResult]
    siting: list[CriterionResult]
    missing: list[str]
    overall_pass: bool
    non_condensing_attested: bool = True

    def to_dict(self) -> dict:
        return {
            "criteria": [c.to_dict() for c in self.criteria],
            "siting": [s.to_dict() for s in self.siting],
            "missing": self.missing,
            "non_condensing_attested": self.non_condensing_attested,
            "overall_pass": self.overall_pass,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _siting_results(rules: SitingRules) -> list[CriterionResult]:
    checks = [
        ("access_path_width", rules.path_width_cm, PATH_WIDTH_MIN_CM, "cm"),
        ("floor_capacity", rules.floor_capacity_kg_per_m2, FLOOR_CAPACITY_MIN_KG_M2, "kg/m^2"),
        ("transmitter_distance", rules.distance_to_transmitter_m, TRANSMITTER_DISTANCE_MIN_M, "m"),
        ("fluorescent_distance", rules.distance_to_fluorescent_m, FLUORESCENT_DISTANCE_MIN_M, "m"),
    ]
    out = []
    for name, value, minimum, unit in checks:
        out.append(
            CriterionResult(
                name=name,
                limit_value=minimum,
                limit_unit=f"{unit} minimum",
                worst=value,
                passed=value >= minimum,
                detail=f"{value:.4g} {unit} (minimum {minimum:.4g})",
            )
        )
    return out


def _group(channels: list[SurveyChannel]) -> dict[str, dict[str, SurveyChannel]]:
    grouped: dict[str, dict[str, SurveyChannel]] = {}
    for ch in channels:
        grouped.setdefault(ch.kind, {})[ch.axis] = ch
    return grouped


def evaluate_site(channels: list[SurveyChannel], siting: SitingRules) -> SiteReport:
    """Run every criterion; a missing required channel fails the site outright."""
    grouped = _group(channels)
    results: list[CriterionResult] = []
    missing: list[str] = []

    mag_axes = ("X", "Y", "Z")
    for kind, checker in (("dc_magnetic_axis", check_dc_magnetic),
                          ("ac_magnetic_axis", check_ac_magnetic)):
        axes = grouped.get(kind, {})
        absent = [a for a in mag_axes if a not in axes]
        if absent:
            missing.append(f"{kind} absent (axes {'/'.join(absent)})")
        else:
            results.append(checker(axes["X"], axes["Y"], axes["Z"]))

    vib = grouped.get("vibration", {})
    if not vib:
        missing.append("vibration absent")
    else:
        # one or three vibration channels accepted; limit applies per channel
        for axis in sorted(vib):
            results.append(check_vibration(vib[axis]))

    sound = grouped.get("sound_pressure", {})
    if not sound:
        missing.append("sound_pressure absent")
    else:
        results.append(check_sound(next(iter(sound.values()))))

    temp = grouped.get("temperature", {})
    if not temp:
        missing.append("temperature absent")
    else:
        results.append(check_temperature(next(iter(temp.values()))))

    hum = grouped.get("humidity", {})
    if not hum:
        missing.append("humidity absent")
    else:
        results.append(
            check_humidity(next(iter(hum.values())), siting.non_condensing_attested)
        )

    siting_results = _siting_results(siting)
    overall = (
        not missing
        and all(r.passed for r in results)
        and all(s.passed for s in siting_results)
    )
    return SiteReport(
        criteria=results,
        siting=siting_results,
        missing=missing,
        overall_pass=overall,
        non_condensing_attested=siting.non_condensing_attested,
    )


def load_channel_dir(directory) -> list[SurveyChannel]:
    """Load every *.csv in a directory as a survey channel."""
    directory = Path(directory)
    channels = []
    for path in sorted(directory.glob("*.csv")):
        channels.append(load_channel_file(path))
    return channels
