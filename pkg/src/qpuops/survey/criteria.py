"""Acceptance checks for the six survey measurements.

Limits and conventions:
  - DC magnetic: |B| < 100 uT on every axis (strict).
  - AC magnetic: < 1 uT peak-to-peak per spectral bin, 5-1000 Hz, per axis.
  - Vibration: < 400 um/s RMS per spectral bin, 1-200 Hz.
  - Sound: < 80 dBA integrated over 20 Hz - 20 kHz (A-weighted).
  - Temperature: every sample within +/-1 degC of its 12 h window mean,
    window means ("set points") inside [20, 25] degC; record >= 25 h.
  - Humidity: every sample inside [25, 60] %RH; record >= 25 h.

Upper limits are strict; range bounds are inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelError, SurveyChannel
from .spectrum import SpectrumError, a_weighting_gain, amplitude_spectrum

DC_LIMIT_UT = 100.0
AC_PP_LIMIT_UT = 1.0
AC_BAND_HZ = (5.0, 1000.0)
VIB_RMS_LIMIT_UMS = 400.0
VIB_BAND_HZ = (1.0, 200.0)
SOUND_LIMIT_DBA = 80.0
SOUND_BAND_HZ = (20.0, 20000.0)
SOUND_FLOOR_DBA = -120.0  # reporting floor for silent records
P_REF_PA = 20e-6
TEMP_WINDOW_S = 12 * 3600.0
TEMP_DEVIATION_LIMIT_C = 1.0
TEMP_SETPOINT_RANGE_C = (20.0, 25.0)
HUMIDITY_RANGE_PCT = (25.0, 60.0)
MIN_RECORD_HOURS = 25.0


@dataclass
class CriterionResult:
    name: str
    limit_value: float
    limit_unit: str
    worst: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "limit": {"value": self.limit_value, "unit": self.limit_unit},
            "worst": self.worst,
            "pass": self.passed,
            "detail": self.detail,
        }


def _require(channels: dict[str, SurveyChannel], axes: tuple[str, ...], kind: str) -> None:
    missing = [a for a in axes if a not in channels]
    if missing:
        raise ChannelError(f"missing {kind} axis {'/'.join(missing)}")


def check_dc_magnetic(x: SurveyChannel, y: SurveyChannel, z: SurveyChannel) -> CriterionResult:
    worst = 0.0
    worst_axis = "-"
    for ch in (x, y, z):
        m = float(np.max(np.abs(ch.values)))
        if m > worst:
            worst, worst_axis = m, ch.axis
    passed = worst < DC_LIMIT_UT
    return CriterionResult(
        name="dc_magnetic",
        limit_value=DC_LIMIT_UT,
        limit_unit="uT",
        worst=worst,
        passed=passed,
        detail=f"max |B| {worst:.4g} uT on axis {worst_axis}",
    )


def check_ac_magnetic(x: SurveyChannel, y: SurveyChannel, z: SurveyChannel) -> CriterionResult:
    """Peak-to-peak limit applied per spectral bin (per-bin interpretation)."""
    worst = 0.0
    worst_axis, worst_freq = "-", 0.0
    for ch in (x, y, z):
        spec = amplitude_spectrum(ch, *AC_BAND_HZ)
        pp = 2.0 * spec.amplitudes
        if pp.size:
            i = int(np.argmax(pp))
            if pp[i] > worst:
                worst, worst_axis, worst_freq = float(pp[i]), ch.axis, float(spec.frequencies_hz[i])
    passed = worst < AC_PP_LIMIT_UT
    return CriterionResult(
        name="ac_magnetic",
        limit_value=AC_PP_LIMIT_UT,
        limit_unit="uT p-p per bin",
        worst=worst,
        passed=passed,
        detail=f"worst bin {worst:.4g} uT p-p at {worst_freq:.4g} Hz on axis {worst_axis} "
        "(limit applied per bin)",
    )


def check_vibration(v: SurveyChannel) -> CriterionResult:
    spec = amplitude_spectrum(v, *VIB_BAND_HZ)
    rms = spec.amplitudes / np.sqrt(2.0)
    if rms.size:
        i = int(np.argmax(rms))
        worst, worst_freq = float(rms[i]), float(spec.frequencies_hz[i])
    else:
        worst, worst_freq = 0.0, 0.0
    passed = worst < VIB_RMS_LIMIT_UMS
    return CriterionResult(
        name="vibration",
        limit_value=VIB_RMS_LIMIT_UMS,
        limit_unit="um/s RMS per bin",
        worst=worst,
        passed=passed,
        detail=f"worst bin {worst:.4g} um/s RMS at {worst_freq:.4g} Hz (axis {v.axis})",
    )


def check_sound(p: SurveyChannel) -> CriterionResult:
    if p.unit == "dB-SPL":
        # pre-integrated level meter readings: compare directly
        worst = float(np.max(p.values))
        return CriterionResult(
            name="sound_pressure",
            limit_value=SOUND_LIMIT_DBA,
            limit_unit="dBA",
            worst=worst,
            passed=worst < SOUND_LIMIT_DBA,
            detail="pre-integrated dB-SPL readings compared against the dBA limit",
        )
    spec = amplitude_spectrum(p, *SOUND_BAND_HZ)
    gains = a_weighting_gain(spec.frequencies_hz)
    # mean-square pressure of a sinusoid of amplitude A is A^2/2
    ms = float(np.sum((gains * spec.amplitudes) ** 2) / 2.0)
    if ms > 0.0:
        dba = float(10.0 * np.log10(ms / P_REF_PA ** 2))
        dba = max(dba, SOUND_FLOOR_DBA)
    else:
        dba = SOUND_FLOOR_DBA
    passed = dba < SOUND_LIMIT_DBA
    return CriterionResult(
        name="sound_pressure",
        limit_value=SOUND_LIMIT_DBA,
        limit_unit="dBA",
        worst=float(dba),
        passed=passed,
        detail=f"A-weighted level {dba:.2f} dBA over 20 Hz - 20 kHz",
    )


def _insufficient(name: str, limit: float, unit: str, hours: float) -> CriterionResult:
    return CriterionResult(
        name=name,
        limit_value=limit,
        limit_unit=unit,
        worst=float("nan"),
        passed=False,
        detail=f"insufficient duration: {hours:.2f} h < {MIN_RECORD_HOURS:.0f} h",
    )


def check_temperature(t: SurveyChannel) -> CriterionResult:
    hours = t.duration_s / 3600.0
    if hours < MIN_RECORD_HOURS:
        return _insufficient("temperature", TEMP_DEVIATION_LIMIT_C, "degC about set point", hours)
    times, values = t.times, t.values
    worst_dev = 0.0
    worst_at = times[0]
    setpoints: list[float] = []
    end_limit = times[-1] - TEMP_WINDOW_S
    for i in range(times.size):
        if times[i] > end_limit:
            break
        j = int(np.searchsorted(times, times[i] + TEMP_WINDOW_S, side="right"))
        window = values[i:j]
        setpoint = float(np.mean(window))
        setpoints.append(setpoint)
        dev = float(np.max(np.abs(window - setpoint)))
        if dev > worst_dev:
            worst_dev, worst_at = dev, times[i]
    if not setpoints:
        return _insufficient("temperature", TEMP_DEVIATION_LIMIT_C, "degC about set point", hours)
    lo, hi = TEMP_SETPOINT_RANGE_C
    sp_min, sp_max = min(setpoints), max(setpoints)
    dev_ok = worst_dev < TEMP_DEVIATION_LIMIT_C
    sp_ok = lo <= sp_min and sp_max <= hi
    detail = f"worst window deviation {worst_dev:.3g} degC at t={worst_at:.0f} s; " \
             f"set points in [{sp_min:.2f}, {sp_max:.2f}] degC"
    if not sp_ok:
        detail += f" (required [{lo:.0f}, {hi:.0f}])"
    return CriterionResult(
        name="temperature",
        limit_value=TEMP_DEVIATION_LIMIT_C,
        limit_unit="degC about set point",
        worst=worst_dev,
        passed=dev_ok and sp_ok,
        detail=detail,
    )


def check_humidity(h: SurveyChannel, non_condensing_attested: bool = True) -> CriterionResult:
    hours = h.duration_s / 3600.0
    if hours < MIN_RECORD_HOURS:
        return _insufficient("humidity", HUMIDITY_RANGE_PCT[1], "%RH", hours)
    lo, hi = HUMIDITY_RANGE_PCT
    vmin, vmax = float(np.min(h.values)), float(np.max(h.values))
    in_range = lo <= vmin and vmax <= hi
    # condensation cannot be detected from %RH alone; it enters as an
    # operator attestation
    passed = in_range and non_condensing_attested
    worst = vmax if (hi - vmax) <= (vmin - lo) else vmin
    detail = f"range [{vmin:.3g}, {vmax:.3g}] %RH (required [{lo:.0f}, {hi:.0f}])"
    if not non_condensing_attested:
        detail += "; condensation not attested absent by operator"
    return CriterionResult(
        name="humidity",
        limit_value=hi,
        limit_unit="%RH",
        worst=worst,
        passed=passed,
        detail=detail,
    )
