import numpy as np
import pytest

from qpuops.survey.channels import SurveyChannel


def tone_channel(kind, axis, unit, fs, duration_s, components=(), offset=0.0):
    """Channel holding a sum of integer-period sinusoids plus a DC offset.

    Frequencies are snapped onto exact DFT bins of the record so spectral
    checks see the configured amplitudes without leakage.
    """
    n = int(round(fs * duration_s))
    t = np.arange(n) / fs
    v = np.full(n, float(offset))
    for f, a in components:
        cycles = round(f * n / fs)
        f_exact = cycles * fs / n
        v = v + a * np.sin(2.0 * np.pi * f_exact * t)
    return SurveyChannel(kind=kind, axis=axis, unit=unit, sample_rate_hz=fs,
                         times=t, values=v)


def env_channel(kind, values, dt_s=60.0):
    values = np.asarray(values, dtype=float)
    unit = "degC" if kind == "temperature" else "%RH"
    return SurveyChannel(kind=kind, axis="-", unit=unit,
                         sample_rate_hz=1.0 / dt_s,
                         times=np.arange(values.size) * dt_s, values=values)


def flat_env(kind, level, hours=26.0, dt_s=60.0):
    n = int(hours * 3600.0 / dt_s) + 1
    return env_channel(kind, np.full(n, float(level)), dt_s)


def passing_channels():
    """One channel per requirement, all comfortably inside the limits."""
    chans = []
    for ax in "XYZ":
        chans.append(tone_channel("dc_magnetic_axis", ax, "uT", 10.0, 30.0,
                                  offset=30.0))
        chans.append(tone_channel("ac_magnetic_axis", ax, "uT", 4000.0, 4.0,
                                  [(50.0, 0.05)]))
    chans.append(tone_channel("vibration", "-", "um/s", 1024.0, 12.0,
                              [(25.0, 100.0)]))
    # 0.02 Pa amplitude at 1 kHz is about 57 dBA
    chans.append(tone_channel("sound_pressure", "-", "Pa", 44100.0, 1.0,
                              [(1000.0, 0.02)]))
    chans.append(flat_env("temperature", 22.0))
    chans.append(flat_env("humidity", 45.0))
    return chans


def write_channel_dir(path, channels):
    path.mkdir(parents=True, exist_ok=True)
    for i, ch in enumerate(channels):
        (path / f"{i:02d}_{ch.kind}_{ch.axis.lower()}.csv").write_text(ch.to_csv())
    return path


@pytest.fixture
def site_channels():
    return passing_channels()
