"""Focal-point trajectory: maps time to position on the 2D skin plane.

All shapes are traversed at constant drawing speed. Closed polygons run
counterclockwise starting at the vertex with the largest x (ties broken by
largest y), centroid at the origin; the horizontal line is traversed
out-and-back so one completion returns to the start. Corners are ideal
instantaneous direction changes; device kinematics are out of scope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import OutOfRange, RateTooLow
from .tacton import MAX_DURATION_S, Shape, SpatioTemporalConfig, drawing_frequency, perimeter

MIN_SAMPLES_PER_REVOLUTION = 8.0


class Point2D(NamedTuple):
    """Position on the skin plane, mm, origin at the trajectory centroid."""

    x: float
    y: float


@dataclass(frozen=True)
class PointSeries:
    """Uniformly sampled trajectory; ``points`` has shape (n, 2) in mm."""

    sample_rate: float
    points: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.points)) / self.sample_rate


def _walk_vertices(shape: Shape, size: float) -> np.ndarray:
    """Vertex sequence of the piecewise-linear walk, first vertex repeated."""
    half = size / 2.0
    if shape is Shape.HORIZONTAL_LINE:
        verts = [(half, 0.0), (-half, 0.0)]
    elif shape is Shape.SQUARE:
        verts = [(half, half), (-half, half), (-half, -half), (half, -half)]
    elif shape is Shape.REGULAR_TRIANGLE:
        r = size / math.sqrt(3.0)  # circumradius for side length `size`
        verts = [
            (r, 0.0),
            (-r / 2.0, r * math.sqrt(3.0) / 2.0),
            (-r / 2.0, -r * math.sqrt(3.0) / 2.0),
        ]
    else:
        raise ValueError(f"no vertex walk for shape {shape!r}")
    verts.append(verts[0])
    return np.asarray(verts, dtype=float)


def trajectory_positions(spatial: SpatioTemporalConfig, times: np.ndarray) -> np.ndarray:
    """Vectorized positions, shape (n, 2) mm, for an array of times in s."""
    times = np.asarray(times, dtype=float)
    shape = spatial.shape
    if shape is Shape.POINT:
        return np.zeros(times.shape + (2,))

    if shape is Shape.CIRCLE:
        radius = spatial.size / 2.0
        f_d = drawing_frequency(spatial)
        angle = 2.0 * math.pi * (f_d * times + spatial.start_phase)
        return np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=-1)

    verts = _walk_vertices(shape, spatial.size)
    seg = np.diff(verts, axis=0)
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(seg_len)])
    total = cum[-1]

    s = np.mod(spatial.drawing_speed * 1000.0 * times + spatial.start_phase * total, total)
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg) - 1)
    frac = (s - cum[idx]) / seg_len[idx]
    return verts[idx] + frac[..., None] * seg[idx]


def position_at(spatial: SpatioTemporalConfig, t: float) -> Point2D:
    """Focal-point position at time t >= 0 s."""
    if t < 0:
        raise OutOfRange("t", t, 0.0, None)
    p = trajectory_positions(spatial, np.asarray([t]))[0]
    return Point2D(float(p[0]), float(p[1]))


def sample_trajectory(spatial: SpatioTemporalConfig, sample_rate: float,
                      duration: float) -> PointSeries:
    """Uniform discretization: points[i] = position at i / sample_rate.

    The series has exactly round(duration * sample_rate) entries. Raises
    :class:`RateTooLow` when the rate resolves fewer than 8 positions per
    trajectory completion, which would alias the motion.
    """
    if not (0.0 < duration <= MAX_DURATION_S):
        raise OutOfRange("duration_s", duration, 0.0, MAX_DURATION_S)
    if sample_rate <= 0:
        raise OutOfRange("sample_rate_hz", sample_rate, 0.0, None)
    if spatial.shape is not Shape.POINT:
        f_d = drawing_frequency(spatial)
        if f_d > 0 and sample_rate / f_d < MIN_SAMPLES_PER_REVOLUTION:
            raise RateTooLow(
                f"{sample_rate:g} Hz gives {sample_rate / f_d:.2f} samples per "
                f"revolution at drawing frequency {f_d:.2f} Hz; need >= "
                f"{MIN_SAMPLES_PER_REVOLUTION:g}"
            )
    n = int(round(duration * sample_rate))
    times = np.arange(n) / sample_rate
    return PointSeries(sample_rate=sample_rate, points=trajectory_positions(spatial, times))


def trajectory_bounds(spatial: SpatioTemporalConfig) -> tuple[float, float, float, float]:
    """Exact bounding box (xmin, xmax, ymin, ymax) of the trajectory, mm."""
    shape = spatial.shape
    half = spatial.size / 2.0
    if shape is Shape.POINT:
        return (0.0, 0.0, 0.0, 0.0)
    if shape is Shape.CIRCLE:
        return (-half, half, -half, half)
    verts = _walk_vertices(shape, spatial.size)
    return (
        float(verts[:, 0].min()),
        float(verts[:, 0].max()),
        float(verts[:, 1].min()),
        float(verts[:, 1].max()),
    )


def closed_outline(spatial: SpatioTemporalConfig, samples: int = 256) -> np.ndarray:
    """One full traversal of the trajectory as a polyline, shape (m, 2).

    Display helper: endpoints repeat the start for closed shapes.
    """
    if spatial.shape is Shape.POINT:
        return np.zeros((1, 2))
    if spatial.shape is Shape.CIRCLE:
        angle = 2.0 * math.pi * (np.linspace(0.0, 1.0, samples + 1) + spatial.start_phase)
        return np.stack(
            [spatial.size / 2.0 * np.cos(angle), spatial.size / 2.0 * np.sin(angle)], axis=-1
        )
    return _walk_vertices(spatial.shape, spatial.size)
