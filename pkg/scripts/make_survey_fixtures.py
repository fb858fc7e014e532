#!/usr/bin/env python3
"""Generate a synthetic site-survey channel directory plus siting JSON.

Writes one CSV per measured channel (field maps, vibration, sound,
temperature, humidity) with integer-period test tones, either comfortably
inside every acceptance limit or with one chosen criterion pushed over.
Useful for exercising the survey CLI end to end:

    python3 scripts/make_survey_fixtures.py --out /tmp/site
    python3 -m qpuops.cli survey validate --dir /tmp/site/channels \
        --siting /tmp/site/siting.json
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qpuops.survey.channels import SurveyChannel

SITING = {
    "path_width_cm": 120.0,
    "floor_capacity_kg_per_m2": 1500.0,
    "distance_to_transmitter_m": 500.0,
    "distance_to_fluorescent_m": 5.0,
}


def tone(kind, axis, unit, fs, duration_s, components=(), offset=0.0, noise=0.0,
         rng=None):
    n = int(round(fs * duration_s))
    t = np.arange(n) / fs
    v = np.full(n, float(offset))
    for f, a in components:
        cycles = round(f * n / fs)   # snap onto an exact DFT bin
        v = v + a * np.sin(2.0 * np.pi * (cycles * fs / n) * t)
    if noise and rng is not None:
        v = v + rng.normal(0.0, noise, size=n)
    return SurveyChannel(kind=kind, axis=axis, unit=unit, sample_rate_hz=fs,
                         times=t, values=v)


def env(kind, level, hours=26.0, dt_s=60.0, wobble=0.0, rng=None):
    n = int(hours * 3600.0 / dt_s) + 1
    v = np.full(n, float(level))
    if wobble and rng is not None:
        v = v + rng.normal(0.0, wobble, size=n)
    unit = "degC" if kind == "temperature" else "%RH"
    return SurveyChannel(kind=kind, axis="-", unit=unit, sample_rate_hz=1.0 / dt_s,
                         times=np.arange(n) * dt_s, values=v)


def build_channels(rng, spoil: str | None):
    hot = spoil  # name of the criterion to push over its limit, if any
    chans = []
    dc = 130.0 if hot == "dc_magnetic" else 35.0
    for ax in "XYZ":
        chans.append(tone("dc_magnetic_axis", ax, "uT", 10.0, 30.0, offset=dc,
                          noise=0.3, rng=rng))
    ac_amp = 0.7 if hot == "ac_magnetic" else 0.04   # amplitude, so p-p is 2x
    for ax in "XYZ":
        comp = [(50.0, ac_amp)] if ax == "X" else [(150.0, ac_amp / 3.0)]
        chans.append(tone("ac_magnetic_axis", ax, "uT", 4000.0, 4.0, comp))
    vib = 450.0 if hot == "vibration" else 120.0
    chans.append(tone("vibration", "-", "um/s", 1024.0, 12.0,
                      [(25.0, vib * np.sqrt(2.0))]))
    pa = 0.6 if hot == "sound" else 0.02   # ~89 dBA vs ~57 dBA at 1 kHz
    chans.append(tone("sound_pressure", "-", "Pa", 44100.0, 1.0, [(1000.0, pa)]))
    temp = 27.0 if hot == "temperature" else 22.0
    chans.append(env("temperature", temp, wobble=0.05, rng=rng))
    rh = 70.0 if hot == "humidity" else 45.0
    chans.append(env("humidity", rh, wobble=0.5, rng=rng))
    return chans


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("site-fixture"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--spoil", default=None,
                    choices=["dc_magnetic", "ac_magnetic", "vibration", "sound",
                             "temperature", "humidity"],
                    help="push this one criterion over its limit")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    chan_dir = args.out / "channels"
    chan_dir.mkdir(parents=True, exist_ok=True)
    channels = build_channels(rng, args.spoil)
    for i, ch in enumerate(channels):
        path = chan_dir / f"{i:02d}_{ch.kind}_{ch.axis.lower()}.csv"
        path.write_text(ch.to_csv())
    (args.out / "siting.json").write_text(json.dumps(SITING, indent=2) + "\n")
    verdict = f"spoiled criterion: {args.spoil}" if args.spoil else "all passing"
    print(f"wrote {args.out}/channels ({len(channels)} files) and siting.json; "
          f"{verdict}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
