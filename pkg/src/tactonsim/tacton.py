"""Tacton parameter model: validated domain types and derived quantities.

A Tacton is described by five temporal parameters (commanded amplitude, one
or two AM frequencies with mixing weights, an envelope frequency, and a total
duration) and a spatiotemporal configuration (trajectory shape, size, drawing
speed, and focal height above the device). Everything downstream of this
module assumes configs that passed :func:`validate`.

Units: millimetres for lengths, metres/second for drawing speed, Hz for
frequencies, seconds for durations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DegenerateNoStimulation,
    InconsistentSuperposition,
    OutOfRange,
    UndefinedForPoint,
    ValidationError,
)

# Mixing ratios offered for two superposed AM sinusoids.
SUPERPOSITION_RATIOS: tuple[tuple[float, float], ...] = (
    (1.0, 0.0),
    (0.75, 0.25),
    (0.5, 0.5),
    (0.25, 0.75),
    (0.0, 1.0),
)

MAX_FREQUENCY_HZ = 1000.0   # beyond vibrotactile sensitivity; keeps spectra in budget
MAX_DURATION_S = 10.0
MAX_SIZE_MM = 60.0          # palm-scale trajectory bound
MAX_HEIGHT_MM = 600.0
DEFAULT_HEIGHT_MM = 200.0   # height of peak relative intensity for typical arrays
PLANE_HALF_EXTENT_MM = 60.0  # skin-plane coordinates handled by this tool


class Shape(str, Enum):
    POINT = "point"
    HORIZONTAL_LINE = "horizontal_line"
    CIRCLE = "circle"
    REGULAR_TRIANGLE = "regular_triangle"
    SQUARE = "square"


@dataclass(frozen=True)
class TemporalConfig:
    """The five temporal parameters of the commanded signal.

    ``amplitude`` is the commanded pressure amplitude as a fraction of device
    maximum. ``am_frequencies`` holds one AM frequency, or two when a
    superposition ratio other than 1:0 mixes a pair of sinusoids; 0 Hz means
    no AM (the modulation term is the constant 1). ``envelope_frequency`` of
    0 Hz likewise means a constant envelope.
    """

    amplitude: float
    am_frequencies: tuple[float, ...]
    superposition_weights: tuple[float, float] = (1.0, 0.0)
    envelope_frequency: float = 0.0
    total_duration: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "am_frequencies", tuple(float(f) for f in self.am_frequencies))
        object.__setattr__(self, "superposition_weights", tuple(float(w) for w in self.superposition_weights))


@dataclass(frozen=True)
class SpatioTemporalConfig:
    """Trajectory shape, size, drawing speed, and focal height.

    ``size`` is the line length, circle diameter, or polygon side length in
    mm; it must be 0 for a static point and positive otherwise.
    ``drawing_speed`` is in m/s. ``start_phase`` offsets the trajectory start
    by a fraction of the perimeter (reproducibility override; perception can
    be orientation-sensitive).
    """

    shape: Shape
    size: float = 0.0
    drawing_speed: float = 0.0
    height: float = DEFAULT_HEIGHT_MM
    start_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))


@dataclass(frozen=True)
class Tacton:
    temporal: TemporalConfig
    spatial: SpatioTemporalConfig


def _check_range(field_name: str, value: float, lo: float, hi: float,
                 lo_open: bool = False) -> None:
    if not math.isfinite(value):
        raise OutOfRange(field_name, value, lo, hi)
    if lo_open:
        if not (lo < value <= hi):
            raise OutOfRange(field_name, value, lo, hi)
    elif not (lo <= value <= hi):
        raise OutOfRange(field_name, value, lo, hi)


def validate(tacton: Tacton) -> Tacton:
    """Check every type invariant; return the tacton unchanged if all hold.

    Raises :class:`OutOfRange`, :class:`InconsistentSuperposition`, or
    :class:`DegenerateNoStimulation` naming the violated field. Idempotent.
    """
    t = tacton.temporal
    s = tacton.spatial

    _check_range("amplitude", t.amplitude, 0.0, 1.0)
    _check_range("total_duration_s", t.total_duration, 0.0, MAX_DURATION_S, lo_open=True)
    if len(t.am_frequencies) not in (1, 2):
        raise ValidationError(
            f"am_frequencies must hold 1 or 2 entries, got {len(t.am_frequencies)}",
            field="am_frequencies",
        )
    for f in t.am_frequencies:
        _check_range("am_frequencies", f, 0.0, MAX_FREQUENCY_HZ)
    _check_range("envelope_frequency", t.envelope_frequency, 0.0, MAX_FREQUENCY_HZ)

    if tuple(t.superposition_weights) not in SUPERPOSITION_RATIOS:
        raise InconsistentSuperposition(
            f"superposition_weights {t.superposition_weights!r} not one of "
            f"{SUPERPOSITION_RATIOS}"
        )
    if t.superposition_weights != (1.0, 0.0) and len(t.am_frequencies) != 2:
        raise InconsistentSuperposition(
            "a superposition ratio other than 1:0 requires exactly two AM frequencies"
        )

    _check_range("height_mm", s.height, 0.0, MAX_HEIGHT_MM, lo_open=True)
    _check_range("drawing_speed_mps", s.drawing_speed, 0.0, math.inf)
    if not (0.0 <= s.start_phase < 1.0):
        raise OutOfRange("start_phase", s.start_phase, 0.0, 1.0)
    if s.shape is Shape.POINT:
        if s.size != 0.0:
            raise OutOfRange("size_mm", s.size, 0.0, 0.0)
    else:
        if not (0.0 < s.size <= MAX_SIZE_MM):
            raise OutOfRange("size_mm", s.size, 0.0, MAX_SIZE_MM)

    if s.shape is Shape.POINT and all(f == 0.0 for f in t.am_frequencies):
        raise DegenerateNoStimulation()

    return tacton


def perimeter(shape: Shape, size: float) -> float:
    """Trajectory length of one completion, in mm.

    A horizontal-line completion is one out-and-back traversal (2 * length):
    a one-way sweep has no periodic return, and out-and-back keeps the focal
    point continuous.
    """
    shape = Shape(shape)
    if shape is Shape.POINT:
        return 0.0
    if shape is Shape.CIRCLE:
        return math.pi * size
    if shape is Shape.HORIZONTAL_LINE:
        return 2.0 * size
    if shape is Shape.REGULAR_TRIANGLE:
        return 3.0 * size
    if shape is Shape.SQUARE:
        return 4.0 * size
    raise ValueError(f"unknown shape {shape!r}")


def drawing_frequency(spatial: SpatioTemporalConfig) -> float:
    """Completions of the trajectory per second: v / perimeter.

    Raises :class:`UndefinedForPoint` for a static focal point.
    """
    if spatial.shape is Shape.POINT:
        raise UndefinedForPoint("drawing frequency is undefined for shape 'point'")
    speed_mm_s = spatial.drawing_speed * 1000.0
    return speed_mm_s / perimeter(spatial.shape, spatial.size)
