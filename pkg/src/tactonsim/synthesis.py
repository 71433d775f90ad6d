"""Signal synthesis: commanded carrier signal, stimulation at a skin point,
frequency spectra, and 2D stimulated-area grids.

The commanded signal is A * U(t) * M(t) * E(t) with a 40 kHz carrier U, an AM
sinusoid M (weighted pair w1*M1 + w2*M2 when a superposition ratio is used),
and an envelope sinusoid E; a frequency of 0 Hz turns the corresponding
factor into the constant 1. The stimulation felt at a skin point replaces A
with amplitude * height gain * falloff(distance to the focal point) and the
carrier with the constant 1, since the focused ultrasound acts as a constant
pressure at skin scale. The envelope stays a signed sinusoid exactly as
commanded; whether hardware rectifies negative envelope values is left to
device drivers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    CarrierRateTooLow,
    EmptyWaveform,
    OutOfRange,
    RateTooLow,
    SpacingOutOfRange,
)
from .field import (
    DEFAULT_FALLOFF,
    DEFAULT_HEIGHT_CURVE,
    FalloffProfile,
    HeightCurve,
    falloff,
    height_gain,
)
from .tacton import PLANE_HALF_EXTENT_MM, Shape, Tacton, TemporalConfig, drawing_frequency, validate
from .trajectory import trajectory_bounds, trajectory_positions

CARRIER_FREQUENCY_HZ = 40000.0
MIN_CARRIER_RATE_HZ = 8.0 * CARRIER_FREQUENCY_HZ
DEFAULT_SKIN_RATE_HZ = 20000.0
DEFAULT_CARRIER_RATE_HZ = 320000.0

_GRID_CELL_CHUNK = 256  # cells per vectorized block when rendering field grids


class WaveformKind(str, Enum):
    COMMAND_CARRIER = "command_carrier"
    SKIN_POINT = "skin_point"


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled dimensionless pressure signal, samples in [-1, 1]."""

    sample_rate: float
    samples: np.ndarray
    kind: WaveformKind

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.sample_rate


@dataclass(frozen=True)
class Spectrum:
    """One-sided amplitude spectrum: a unit sinusoid peaks at magnitude 1."""

    frequencies: np.ndarray
    magnitudes: np.ndarray

    @property
    def bin_width(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0]) if len(self.frequencies) > 1 else 0.0


@dataclass(frozen=True)
class FieldGrid:
    """Scalar stimulation intensity over the skin plane.

    ``values[r, c]`` is the time-aggregated intensity at
    (origin + c * spacing, origin + r * spacing); ``origin`` is the lower-left
    cell center in mm.
    """

    origin: tuple[float, float]
    spacing: float
    values: np.ndarray
    aggregate: str = "rms"

    def to_dict(self) -> dict:
        rows, cols = self.values.shape
        return {
            "origin_mm": [self.origin[0], self.origin[1]],
            "spacing_mm": self.spacing,
            "rows": rows,
            "cols": cols,
            "values": [float(v) for v in self.values.ravel()],
        }


def _sin_or_one(frequency: float, t: np.ndarray) -> np.ndarray:
    if frequency == 0.0:
        return np.ones_like(t)
    return np.sin(2.0 * math.pi * frequency * t)


def modulation_value(temporal: TemporalConfig, t):
    """AM-times-envelope modulation in [-1, 1] at time(s) t.

    Evaluates (w1 * M1 + w2 * M2) * E when two AM frequencies are configured,
    M * E otherwise, with the 0 Hz constant-1 conventions.
    """
    arr = np.asarray(t, dtype=float)
    freqs = temporal.am_frequencies
    if len(freqs) == 1:
        m = _sin_or_one(freqs[0], arr)
    else:
        w1, w2 = temporal.superposition_weights
        m = w1 * _sin_or_one(freqs[0], arr) + w2 * _sin_or_one(freqs[1], arr)
    out = m * _sin_or_one(temporal.envelope_frequency, arr)
    return float(out) if np.isscalar(t) else out


def _time_grid(duration: float, sample_rate: float) -> np.ndarray:
    n = int(round(duration * sample_rate))
    return np.arange(n) / sample_rate


def command_signal(tacton: Tacton, carrier_rate: float = DEFAULT_CARRIER_RATE_HZ) -> Waveform:
    """The commanded device signal with the 40 kHz carrier resolved.

    ``carrier_rate`` must be at least 320 kHz (8 samples per carrier cycle).
    """
    validate(tacton)
    if carrier_rate < MIN_CARRIER_RATE_HZ:
        raise CarrierRateTooLow(
            f"carrier rate {carrier_rate:g} Hz < {MIN_CARRIER_RATE_HZ:g} Hz"
        )
    t = _time_grid(tacton.temporal.total_duration, carrier_rate)
    samples = (
        tacton.temporal.amplitude
        * np.sin(2.0 * math.pi * CARRIER_FREQUENCY_HZ * t)
        * modulation_value(tacton.temporal, t)
    )
    return Waveform(sample_rate=carrier_rate, samples=samples, kind=WaveformKind.COMMAND_CARRIER)


def skin_signal(tacton: Tacton, skin_point, sample_rate: float = DEFAULT_SKIN_RATE_HZ,
                profile: FalloffProfile = DEFAULT_FALLOFF,
                curve: HeightCurve = DEFAULT_HEIGHT_CURVE) -> Waveform:
    """Stimulation waveform at a skin point (carrier replaced by constant 1).

    samples[i] = amplitude * height_gain * falloff(|focal(t_i) - skin|)
                 * modulation(t_i)
    """
    validate(tacton)
    ax, ay = float(skin_point[0]), float(skin_point[1])
    if abs(ax) > PLANE_HALF_EXTENT_MM or abs(ay) > PLANE_HALF_EXTENT_MM:
        raise OutOfRange("skin_point", (ax, ay), -PLANE_HALF_EXTENT_MM, PLANE_HALF_EXTENT_MM)
    f_d = 0.0
    if tacton.spatial.shape is not Shape.POINT:
        f_d = drawing_frequency(tacton.spatial)
    min_rate = 2.0 * max(1000.0, 20.0 * f_d)
    if sample_rate < min_rate:
        raise RateTooLow(
            f"sample rate {sample_rate:g} Hz < {min_rate:g} Hz required for "
            f"drawing frequency {f_d:.2f} Hz"
        )

    t = _time_grid(tacton.temporal.total_duration, sample_rate)
    pos = trajectory_positions(tacton.spatial, t)
    dist = np.hypot(pos[:, 0] - ax, pos[:, 1] - ay)
    gain = tacton.temporal.amplitude * height_gain(tacton.spatial.height, curve)
    samples = gain * falloff(dist, profile) * modulation_value(tacton.temporal, t)
    return Waveform(sample_rate=sample_rate, samples=samples, kind=WaveformKind.SKIN_POINT)


def one_sided_magnitudes(samples: np.ndarray) -> np.ndarray:
    """Amplitude-normalized one-sided DFT magnitudes of a real series.

    Interior bins carry 2/N so a unit sinusoid on a bin reads 1.0; the DC bin
    (and the Nyquist bin for even N) carries 1/N, which keeps the one-sided
    form energy-consistent with the time series.
    """
    n = len(samples)
    mags = np.abs(np.fft.rfft(samples)) * (2.0 / n)
    mags[0] *= 0.5
    if n % 2 == 0:
        mags[-1] *= 0.5
    return mags


def spectrum(w: Waveform) -> Spectrum:
    """One-sided amplitude spectrum over the full duration (rectangular window).

    Frequency resolution is 1 / duration; bins run 0 .. sample_rate / 2.
    """
    if len(w.samples) == 0:
        raise EmptyWaveform("cannot transform an empty waveform")
    freqs = np.fft.rfftfreq(len(w.samples), 1.0 / w.sample_rate)
    return Spectrum(frequencies=freqs, magnitudes=one_sided_magnitudes(w.samples))


def field_grid(tacton: Tacton, spacing: float,
               sample_rate: float = DEFAULT_SKIN_RATE_HZ,
               profile: FalloffProfile = DEFAULT_FALLOFF,
               curve: HeightCurve = DEFAULT_HEIGHT_CURVE,
               aggregate: str = "rms") -> FieldGrid:
    """Time-aggregated stimulation over a grid covering the stimulated area.

    The grid spans the trajectory bounding box expanded by the falloff cutoff
    radius, sampled at ``spacing`` mm (0.25 to 5). Each cell holds the RMS of
    the skin signal at its center over the full Tacton duration
    (``aggregate="peak"`` switches to the absolute peak). Cells are evaluated
    in a fixed order so results are bit-identical run to run.
    """
    validate(tacton)
    if not (0.25 <= spacing <= 5.0):
        raise SpacingOutOfRange(spacing)
    if aggregate not in ("rms", "peak"):
        raise ValueError(f"aggregate must be 'rms' or 'peak', got {aggregate!r}")

    xmin, xmax, ymin, ymax = trajectory_bounds(tacton.spatial)
    margin = profile.cutoff_radius
    x0, y0 = xmin - margin, ymin - margin
    cols = int(math.ceil((xmax + margin - x0) / spacing)) + 1
    rows = int(math.ceil((ymax + margin - y0) / spacing)) + 1
    xs = x0 + spacing * np.arange(cols)
    ys = y0 + spacing * np.arange(rows)

    t = _time_grid(tacton.temporal.total_duration, sample_rate)
    pos = trajectory_positions(tacton.spatial, t)
    mod = modulation_value(tacton.temporal, t)
    gain = tacton.temporal.amplitude * height_gain(tacton.spatial.height, curve)

    centers = np.stack(
        [np.repeat(xs[None, :], rows, axis=0).ravel(),
         np.repeat(ys[:, None], cols, axis=1).ravel()],
        axis=1,
    )
    out = np.empty(rows * cols)
    for start in range(0, len(centers), _GRID_CELL_CHUNK):
        block = centers[start:start + _GRID_CELL_CHUNK]
        dist = np.hypot(
            pos[None, :, 0] - block[:, 0:1],
            pos[None, :, 1] - block[:, 1:2],
        )
        sig = gain * falloff(dist, profile) * mod[None, :]
        if aggregate == "rms":
            out[start:start + len(block)] = np.sqrt(np.mean(sig * sig, axis=1))
        else:
            out[start:start + len(block)] = np.max(np.abs(sig), axis=1)

    return FieldGrid(
        origin=(float(xs[0]), float(ys[0])),
        spacing=spacing,
        values=out.reshape(rows, cols),
        aggregate=aggregate,
    )
