"""Single-sided amplitude spectra and sound-level weighting.

The spectrum is normalized so a pure sinusoid of amplitude A lands at A
in its bin. A rectangular window is used; the survey fixtures place tones
on integer-period frequencies, which keeps leakage out of verdicts near
the acceptance limits (documented tolerance: 1% amplitude error).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import SurveyChannel

# Minimum record length, in periods of the lowest analysis frequency.
MIN_PERIODS = 10.0


class SpectrumError(ValueError):
    """Channel unsuitable for the requested spectral analysis."""


@dataclass
class Spectrum:
    frequencies_hz: np.ndarray
    amplitudes: np.ndarray  # single-sided sinusoid amplitude, unit of the input
    bin_spacing_hz: float

    def peak(self) -> tuple[float, float]:
        """(frequency, amplitude) of the largest bin."""
        i = int(np.argmax(self.amplitudes))
        return float(self.frequencies_hz[i]), float(self.amplitudes[i])


def amplitude_spectrum(channel: SurveyChannel, f_lo: float, f_hi: float) -> Spectrum:
    """DFT amplitudes of a channel restricted to [f_lo, f_hi].

    Requires sample_rate >= 2*f_hi (Nyquist) and a record at least
    MIN_PERIODS/f_lo long.
    """
    if f_lo <= 0 or f_hi <= f_lo:
        raise SpectrumError(f"bad frequency band [{f_lo}, {f_hi}]")
    if channel.sample_rate_hz < 2.0 * f_hi:
        raise SpectrumError(
            f"sample rate {channel.sample_rate_hz} Hz below Nyquist for f_hi={f_hi} Hz"
        )
    if channel.duration_s < MIN_PERIODS / f_lo:
        raise SpectrumError(
            f"record of {channel.duration_s:.3g} s too short; need >= {MIN_PERIODS / f_lo:.3g} s"
        )
    values = channel.values
    n = values.size
    spec = np.fft.rfft(values)
    freqs = np.fft.rfftfreq(n, d=1.0 / channel.sample_rate_hz)
    amps = np.abs(spec) / n
    # single-sided: double everything except DC and (for even n) Nyquist
    amps[1:] *= 2.0
    if n % 2 == 0:
        amps[-1] /= 2.0
    mask = (freqs >= f_lo) & (freqs <= f_hi)
    return Spectrum(
        frequencies_hz=freqs[mask],
        amplitudes=amps[mask],
        bin_spacing_hz=channel.sample_rate_hz / n,
    )


# IEC 61672 analytic A-weighting poles (Hz).
_F1 = 20.598997
_F2 = 107.65265
_F3 = 737.86223
_F4 = 12194.217


def _ra(f: np.ndarray) -> np.ndarray:
    f2 = f * f
    num = _F4 ** 2 * f2 * f2
    den = (
        (f2 + _F1 ** 2)
        * np.sqrt((f2 + _F2 ** 2) * (f2 + _F3 ** 2))
        * (f2 + _F4 ** 2)
    )
    return num / den


_RA_1KHZ = float(_ra(np.array([1000.0]))[0])


def a_weighting_gain(f) -> np.ndarray:
    """Linear A-weighting gain, normalized to exactly 1 at 1 kHz."""
    f = np.asarray(f, dtype=float)
    return _ra(f) / _RA_1KHZ


def a_weighting_db(f) -> np.ndarray:
    return 20.0 * np.log10(a_weighting_gain(f))
