"""Survey sensor channels and their CSV interchange format.

A channel file is a header line followed by `timestamp_s,value` rows:

    # kind=humidity axis=- unit=%RH sample_rate_hz=0.0166667
    0.0,44.2
    60.0,44.3
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass

import numpy as np

CHANNEL_KINDS = (
    "dc_magnetic_axis",
    "ac_magnetic_axis",
    "vibration",
    "sound_pressure",
    "temperature",
    "humidity",
)

# Unit expected for each channel kind. Sound accepts either a pressure
# waveform (Pa) or pre-integrated level readings (dB-SPL).
UNIT_FOR_KIND = {
    "dc_magnetic_axis": ("uT",),
    "ac_magnetic_axis": ("uT",),
    "vibration": ("um/s",),
    "sound_pressure": ("Pa", "dB-SPL"),
    "temperature": ("degC",),
    "humidity": ("%RH",),
}

_HEADER_RE = re.compile(
    r"^#\s*kind=(?P<kind>\S+)\s+axis=(?P<axis>\S+)\s+unit=(?P<unit>\S+)\s+sample_rate_hz=(?P<rate>\S+)\s*$"
)

# µ shows up in the wild in several spellings; normalize before matching.
_UNIT_ALIASES = {"µT": "uT", "uT": "uT", "µm/s": "um/s", "um/s": "um/s",
                 "Pa": "Pa", "dB-SPL": "dB-SPL", "degC": "degC", "°C": "degC", "%RH": "%RH"}


class ChannelError(ValueError):
    """Malformed or inconsistent channel data."""


@dataclass
class SurveyChannel:
    kind: str
    axis: str  # "X"|"Y"|"Z" for magnetic/vibration, "-" otherwise
    unit: str
    sample_rate_hz: float
    times: np.ndarray  # seconds, strictly increasing
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in CHANNEL_KINDS:
            raise ChannelError(f"unknown channel kind {self.kind!r}")
        unit = _UNIT_ALIASES.get(self.unit)
        if unit is None or unit not in UNIT_FOR_KIND[self.kind]:
            raise ChannelError(f"unit {self.unit!r} does not match kind {self.kind!r}")
        self.unit = unit
        if self.sample_rate_hz <= 0:
            raise ChannelError("sample_rate_hz must be positive")
        if self.times.size == 0:
            raise ChannelError("empty sample series")
        if self.times.size != self.values.size:
            raise ChannelError("timestamp/value length mismatch")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ChannelError("timestamps must be strictly increasing")

    @property
    def duration_s(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def nyquist_hz(self) -> float:
        return self.sample_rate_hz / 2.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(
            f"# kind={self.kind} axis={self.axis} unit={self.unit} "
            f"sample_rate_hz={float(self.sample_rate_hz)!r}\n"
        )
        # cast defensively: numpy scalars repr as np.float64(...) under numpy 2
        for t, v in zip(self.times, self.values):
            buf.write(f"{float(t)!r},{float(v)!r}\n")
        return buf.getvalue()


def load_channel(document: str) -> SurveyChannel:
    """Parse one channel CSV document (header line + data rows)."""
    lines = document.strip().splitlines()
    if not lines:
        raise ChannelError("empty document")
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise ChannelError(f"bad header line: {lines[0]!r}")
    try:
        rate = float(m.group("rate"))
    except ValueError as exc:
        raise ChannelError(f"bad sample rate: {m.group('rate')!r}") from exc
    rows = [ln for ln in lines[1:] if ln.strip()]
    if not rows:
        raise ChannelError("empty sample series")
    try:
        data = np.loadtxt(io.StringIO("\n".join(rows)), delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ChannelError(f"bad data row: {exc}") from exc
    if data.shape[1] != 2:
        raise ChannelError("expected exactly two columns (timestamp_s,value)")
    times, values = data[:, 0], data[:, 1]
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ChannelError("timestamps must be strictly increasing (duplicates present?)")
    return SurveyChannel(
        kind=m.group("kind"),
        axis=m.group("axis"),
        unit=m.group("unit"),
        sample_rate_hz=rate,
        times=times,
        values=values,
    )


def load_channel_file(path) -> SurveyChannel:
    with open(path, "r", encoding="utf-8") as fh:
        return load_channel(fh.read())
