"""Spectral peak detection, harmonic-structure classification, and comparison
of simulated spectra against vibrometer measurement files.

Classification templates reflect the three rendering techniques: a pure-AM
spectrum sits on multiples of the AM frequency (the simulation itself yields
a single component; measured skin responses add harmonics), pure STM sits on
multiples of the drawing frequency, and combined AM+STM shows the AM
frequency plus sideband pairs at multiples of the drawing frequency offset by
the AM frequency.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.signal

from .errors import EmptySpectrum, MismatchedUnits, ParseError
from .synthesis import Spectrum, one_sided_magnitudes

DEFAULT_FLOOR_DB = -40.0
DEFAULT_MIN_TOL_HZ = 2.0
# Mains hum and its low harmonics; capped at the 3rd so genuine content in the
# vibrotactile band (e.g. 420 Hz) is never swallowed.
DEFAULT_NOTCH_HZ = (60.0, 120.0, 180.0)


@dataclass(frozen=True)
class SpectralPeak:
    frequency: float
    magnitude: float
    bin_index: int


class TactonClass(str, Enum):
    PURE_AM_LIKE = "PureAMLike"
    PURE_STM_LIKE = "PureSTMLike"
    AM_STM_LIKE = "AMSTMLike"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class HarmonicReport:
    """Outcome of matching detected peaks against a harmonic template.

    ``matched`` holds (harmonic index n, peak frequency, deviation in Hz).
    For the AM+STM template, index 0 labels the AM-frequency component and
    index n >= 1 labels the sideband pair at n * f_d +/- f_AM.
    """

    classification: TactonClass
    base_frequency: float
    matched: tuple[tuple[int, float, float], ...] = ()
    unmatched_peaks: tuple[float, ...] = ()


@dataclass(frozen=True)
class ComparisonReport:
    """Peak-level agreement between a simulated and a measured spectrum."""

    shared: tuple[tuple[float, float], ...]   # (measured Hz, matching sim Hz)
    sim_only: tuple[float, ...]
    measured_only: tuple[float, ...]
    explained_fraction: float
    notched: tuple[float, ...]
    tol_hz: float
    floor_db: float

    def to_dict(self) -> dict:
        return {
            "shared": [list(p) for p in self.shared],
            "sim_only": list(self.sim_only),
            "measured_only": list(self.measured_only),
            "explained_fraction": self.explained_fraction,
            "notched": list(self.notched),
            "tol_hz": self.tol_hz,
            "floor_db": self.floor_db,
        }


@dataclass(frozen=True)
class MeasurementFile:
    """Parsed vibrometer export: either a time series transformed here, or a
    pre-computed spectrum. Magnitude units are arbitrary; comparisons are on
    peak frequencies and relative magnitudes only."""

    spectrum: Spectrum
    source: Path | None = None
    kind: str = "spectrum"            # "time_series" or "spectrum"
    metadata: dict | None = None


def detect_peaks(s: Spectrum, floor_db: float = DEFAULT_FLOOR_DB) -> list[SpectralPeak]:
    """Local spectral maxima above a floor relative to the strongest non-DC bin.

    The DC bin is excluded; maxima in neighboring bins are merged to the
    larger. Returned sorted by descending magnitude.
    """
    if len(s.magnitudes) == 0:
        raise EmptySpectrum("spectrum has no bins")
    if floor_db >= 0:
        raise ValueError(f"floor_db must be negative, got {floor_db!r}")
    mags = np.asarray(s.magnitudes, dtype=float)
    if len(mags) < 3:
        return []
    peak_mag = float(mags[1:].max())
    if peak_mag <= 0.0:
        return []
    threshold = peak_mag * 10.0 ** (floor_db / 20.0)
    idx, _ = scipy.signal.find_peaks(mags, height=threshold, distance=2)
    idx = idx[idx > 0]
    peaks = [SpectralPeak(float(s.frequencies[i]), float(mags[i]), int(i)) for i in idx]
    peaks.sort(key=lambda p: -p.magnitude)
    return peaks


def _template_elements(kind: TactonClass, f_am: float, f_d: float,
                       fmax: float, tol: float) -> list[tuple[int, float]]:
    """(harmonic index, frequency) pairs of a template up to fmax + tol."""
    elements: list[tuple[int, float]] = []
    if kind is TactonClass.PURE_AM_LIKE:
        n = 1
        while n * f_am <= fmax + tol:
            elements.append((n, n * f_am))
            n += 1
    elif kind is TactonClass.PURE_STM_LIKE:
        n = 1
        while n * f_d <= fmax + tol:
            elements.append((n, n * f_d))
            n += 1
    else:
        elements.append((0, f_am))
        n = 1
        while n * f_d - f_am <= fmax + tol:
            for f in (n * f_d + f_am, abs(n * f_d - f_am)):
                if f > 0.0 and f <= fmax + tol:
                    elements.append((n, f))
            n += 1
    return elements


def classify(peaks: list[SpectralPeak], f_am: float, f_d: float,
             tol_hz: float) -> HarmonicReport:
    """Match peaks to harmonic templates and name the rendering technique.

    Templates are tried in order pure-AM, pure-STM, AM+STM (a template is
    only attempted when its base frequencies are nonzero); the first template
    covering every peak within ``tol_hz`` wins. Unclassified otherwise.
    """
    if not peaks:
        return HarmonicReport(TactonClass.UNCLASSIFIED, base_frequency=0.0)
    fmax = max(p.frequency for p in peaks)

    candidates: list[tuple[TactonClass, float]] = []
    if f_am > 0.0:
        candidates.append((TactonClass.PURE_AM_LIKE, f_am))
    if f_d > 0.0:
        candidates.append((TactonClass.PURE_STM_LIKE, f_d))
    if f_am > 0.0 and f_d > 0.0:
        candidates.append((TactonClass.AM_STM_LIKE, f_d))

    for kind, base in candidates:
        elements = _template_elements(kind, f_am, f_d, fmax, tol_hz)
        if not elements:
            continue
        matched: list[tuple[int, float, float]] = []
        unmatched: list[float] = []
        for p in peaks:
            best = min(elements, key=lambda e: abs(p.frequency - e[1]))
            deviation = p.frequency - best[1]
            if abs(deviation) <= tol_hz:
                matched.append((best[0], p.frequency, deviation))
            else:
                unmatched.append(p.frequency)
        if not unmatched:
            return HarmonicReport(kind, base_frequency=base,
                                  matched=tuple(matched))

    return HarmonicReport(
        TactonClass.UNCLASSIFIED,
        base_frequency=f_d if f_d > 0.0 else f_am,
        unmatched_peaks=tuple(p.frequency for p in peaks),
    )


def _read_csv_rows(path: Path) -> tuple[list[str], list[tuple[float, float]]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(str(e), path=path) from e
    lines = [ln for ln in text.splitlines()]
    if not lines or not lines[0].strip():
        raise ParseError("empty file", path=path, line=1)
    header = [c.strip() for c in lines[0].split(",")]
    rows: list[tuple[float, float]] = []
    for i, ln in enumerate(lines[1:], start=2):
        if not ln.strip():
            continue
        parts = ln.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 columns, got {len(parts)}", path=path, line=i)
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as e:
            raise ParseError(f"non-numeric value: {ln.strip()!r}", path=path, line=i) from e
    if not rows:
        raise ParseError("no data rows", path=path, line=len(lines))
    return header, rows


_TIME_HEADERS = {"t_s": "s", "t_ms": "ms", "t_us": "us"}
_DISP_HEADERS = {"displacement_um": "um", "displacement_mm": "mm", "displacement_nm": "nm"}
_FREQ_HEADERS = {"f_hz": "hz", "f_khz": "khz"}


def load_measurement(path) -> MeasurementFile:
    """Parse a measurement CSV (plus optional ``<stem>.json`` sidecar).

    Accepts ``t_s,displacement_um`` time series (transformed to a spectrum
    here) or ``f_hz,magnitude`` pre-computed spectra with uniform bins
    starting at 0 Hz.
    """
    path = Path(path)
    header, rows = _read_csv_rows(path)
    if len(header) != 2:
        raise ParseError(f"expected 2 header columns, got {len(header)}", path=path, line=1)
    col_a, col_b = header

    metadata = None
    sidecar = path.with_suffix(".json")
    if sidecar.exists():
        try:
            metadata = json.loads(sidecar.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"bad metadata sidecar: {e}", path=sidecar) from e

    data = np.asarray(rows, dtype=float)

    if col_a in _TIME_HEADERS or col_b in _DISP_HEADERS:
        if _TIME_HEADERS.get(col_a) != "s" or _DISP_HEADERS.get(col_b) != "um":
            raise MismatchedUnits(
                f"expected header 't_s,displacement_um', got '{col_a},{col_b}'",
                path=path, line=1,
            )
        times, disp = data[:, 0], data[:, 1]
        if len(times) < 2:
            raise ParseError("time series needs at least 2 samples", path=path, line=2)
        dt = np.diff(times)
        if dt.min() <= 0 or (dt.max() - dt.min()) > 1e-6 * dt.mean():
            raise ParseError("time series must be uniformly sampled", path=path, line=2)
        rate = 1.0 / float(dt.mean())
        freqs = np.fft.rfftfreq(len(disp), 1.0 / rate)
        spec = Spectrum(frequencies=freqs, magnitudes=one_sided_magnitudes(disp))
        return MeasurementFile(spectrum=spec, source=path, kind="time_series",
                               metadata=metadata)

    if col_a in _FREQ_HEADERS:
        if _FREQ_HEADERS[col_a] != "hz" or col_b != "magnitude":
            raise MismatchedUnits(
                f"expected header 'f_hz,magnitude', got '{col_a},{col_b}'",
                path=path, line=1,
            )
        freqs, mags = data[:, 0], data[:, 1]
        if freqs[0] != 0.0:
            raise ParseError("spectrum must start at 0 Hz", path=path, line=2)
        if len(freqs) > 2:
            df = np.diff(freqs)
            if df.min() <= 0 or (df.max() - df.min()) > 1e-6 * df.mean():
                raise ParseError("spectrum bins must be uniform", path=path, line=2)
        spec = Spectrum(frequencies=freqs, magnitudes=mags)
        return MeasurementFile(spectrum=spec, source=path, kind="spectrum",
                               metadata=metadata)

    raise ParseError(f"unrecognized header '{col_a},{col_b}'", path=path, line=1)


def _notch_filter(peaks: list[SpectralPeak], notch_hz, tol: float):
    kept, dropped = [], []
    for p in peaks:
        if any(abs(p.frequency - nf) <= tol for nf in notch_hz):
            dropped.append(p)
        else:
            kept.append(p)
    return kept, dropped


def compare_measurement(sim: Spectrum, measured: MeasurementFile,
                        tol_hz: float | None = None,
                        floor_db: float = DEFAULT_FLOOR_DB,
                        notch_hz=DEFAULT_NOTCH_HZ) -> ComparisonReport:
    """Peak-level comparison of a simulated spectrum against a measurement.

    ``tol_hz`` defaults to max(2 bins of the coarser spectrum, 2 Hz). Measured
    peaks within the mains-hum notch list are excluded before matching.
    Reports shared peak frequencies, each side's exclusive peaks, and the
    fraction of (un-notched) measured peaks explained by a simulated peak.
    """
    coarser_bin = max(sim.bin_width, measured.spectrum.bin_width)
    min_tol = max(2.0 * coarser_bin, DEFAULT_MIN_TOL_HZ)
    if tol_hz is None:
        tol_hz = min_tol
    elif tol_hz < 2.0 * coarser_bin:
        raise ValueError(
            f"tol_hz {tol_hz:g} below 2 bins of the coarser spectrum ({2 * coarser_bin:g} Hz)"
        )

    sim_peaks = detect_peaks(sim, floor_db)
    meas_peaks = detect_peaks(measured.spectrum, floor_db)
    meas_peaks, notched = _notch_filter(meas_peaks, notch_hz, tol_hz)

    shared: list[tuple[float, float]] = []
    measured_only: list[float] = []
    matched_sim: set[int] = set()
    for mp in meas_peaks:
        best_i, best_df = None, math.inf
        for i, sp in enumerate(sim_peaks):
            df = abs(sp.frequency - mp.frequency)
            if df < best_df:
                best_i, best_df = i, df
        if best_i is not None and best_df <= tol_hz:
            shared.append((mp.frequency, sim_peaks[best_i].frequency))
            matched_sim.add(best_i)
        else:
            measured_only.append(mp.frequency)

    sim_only = [sp.frequency for i, sp in enumerate(sim_peaks) if i not in matched_sim]
    fraction = 1.0 if not meas_peaks else len(shared) / len(meas_peaks)

    return ComparisonReport(
        shared=tuple(sorted(shared)),
        sim_only=tuple(sorted(sim_only)),
        measured_only=tuple(sorted(measured_only)),
        explained_fraction=fraction,
        notched=tuple(sorted(p.frequency for p in notched)),
        tol_hz=float(tol_hz),
        floor_db=float(floor_db),
    )
