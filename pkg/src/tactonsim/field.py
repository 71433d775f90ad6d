"""Spatial intensity model of a focused ultrasound point.

Two pluggable pieces: a radial falloff S(D) of normalized stimulation
intensity with distance D from the focal point (S(0) = 1, zero beyond a
cutoff radius), and a relative-intensity curve versus focal height above the
device (inverted U, peaking at 200 mm). Side lobes are modeled away: the
stimulation is a single circular spot.

The defaults stand in for measured curves: a Gaussian falloff with FWHM
8.6 mm (the 40 kHz wavelength, the canonical focal-spot scale) cut off at
10 mm, and a quadratic height curve 1 - ((h - 200)/280)^2 clamped to [0, 1].
Tabulated variants accept digitized data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NegativeDistance, OutOfRange, ValidationError
from .tacton import DEFAULT_HEIGHT_MM, MAX_HEIGHT_MM

_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


class FalloffKind(str, Enum):
    GAUSSIAN = "gaussian"
    RAISED_COSINE = "raised_cosine"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class FalloffProfile:
    """Radial falloff S(D): 1 at the focal point, 0 at and beyond the cutoff.

    ``fwhm`` is the full width at half maximum in mm. For the raised-cosine
    kind the formula 0.5 * (1 + cos(pi * D / cutoff_radius)) fixes the
    half-max width to the cutoff radius, so ``fwhm`` is derived. Tabulated
    profiles interpolate (distance_mm, value) pairs linearly and must start
    at (0, 1) with non-increasing values.
    """

    kind: FalloffKind = FalloffKind.GAUSSIAN
    fwhm: float = 8.6
    cutoff_radius: float = 10.0
    table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", FalloffKind(self.kind))
        if self.kind is FalloffKind.RAISED_COSINE:
            object.__setattr__(self, "fwhm", float(self.cutoff_radius))
        if not self.cutoff_radius > 0:
            raise OutOfRange("falloff.cutoff_radius_mm", self.cutoff_radius, 0.0, None)
        if not 0 < self.fwhm < 2.0 * self.cutoff_radius:
            raise OutOfRange("falloff.fwhm_mm", self.fwhm, 0.0, 2.0 * self.cutoff_radius)
        if self.kind is FalloffKind.TABULATED:
            if not self.table:
                raise ValidationError("tabulated falloff requires a table", field="falloff.table")
            tab = tuple((float(d), float(v)) for d, v in self.table)
            object.__setattr__(self, "table", tab)
            dists = [d for d, _ in tab]
            vals = [v for _, v in tab]
            if dists[0] != 0.0 or vals[0] != 1.0:
                raise ValidationError("falloff table must start at (0, 1)", field="falloff.table")
            if any(b <= a for a, b in zip(dists, dists[1:])):
                raise ValidationError("falloff table distances must increase", field="falloff.table")
            if any(b > a for a, b in zip(vals, vals[1:])) or min(vals) < 0 or max(vals) > 1:
                raise ValidationError(
                    "falloff table values must be in [0, 1] and non-increasing",
                    field="falloff.table",
                )


class HeightCurveKind(str, Enum):
    QUADRATIC = "quadratic"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class HeightCurve:
    """Relative intensity gain versus focal height; 1 at ``peak_height``.

    Quadratic kind: gain(h) = clamp(1 - ((h - peak) / half_width)^2, 0, 1).
    Tabulated kind interpolates (height_mm, gain) pairs; gain must rise to 1
    at the peak and fall beyond it.
    """

    kind: HeightCurveKind = HeightCurveKind.QUADRATIC
    peak_height: float = DEFAULT_HEIGHT_MM
    half_width: float = 280.0
    table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", HeightCurveKind(self.kind))
        if not 0 < self.peak_height <= MAX_HEIGHT_MM:
            raise OutOfRange("height_curve.peak_height_mm", self.peak_height, 0.0, MAX_HEIGHT_MM)
        if self.kind is HeightCurveKind.QUADRATIC and not self.half_width > 0:
            raise OutOfRange("height_curve.half_width_mm", self.half_width, 0.0, None)
        if self.kind is HeightCurveKind.TABULATED:
            if not self.table:
                raise ValidationError("tabulated height curve requires a table",
                                      field="height_curve.table")
            tab = tuple((float(h), float(g)) for h, g in self.table)
            object.__setattr__(self, "table", tab)
            heights = [h for h, _ in tab]
            gains = [g for _, g in tab]
            if any(b <= a for a, b in zip(heights, heights[1:])):
                raise ValidationError("height curve heights must increase",
                                      field="height_curve.table")
            if min(gains) < 0 or max(gains) > 1:
                raise ValidationError("height curve gains must be in [0, 1]",
                                      field="height_curve.table")
            if max(gains) != 1.0:
                raise ValidationError("height curve must reach gain 1 at its peak",
                                      field="height_curve.table")


DEFAULT_FALLOFF = FalloffProfile()
DEFAULT_HEIGHT_CURVE = HeightCurve()


def falloff(distance, profile: FalloffProfile = DEFAULT_FALLOFF):
    """Normalized intensity S(D) in [0, 1] at distance D mm from the focus.

    Accepts a scalar or ndarray; returns the matching type.
    """
    d = np.asarray(distance, dtype=float)
    if np.any(d < 0):
        raise NegativeDistance(f"distance must be >= 0, got {np.min(d)!r}")

    if profile.kind is FalloffKind.GAUSSIAN:
        sigma = profile.fwhm * _FWHM_TO_SIGMA
        s = np.exp(-0.5 * (d / sigma) ** 2)
    elif profile.kind is FalloffKind.RAISED_COSINE:
        s = 0.5 * (1.0 + np.cos(math.pi * np.minimum(d, profile.cutoff_radius)
                                / profile.cutoff_radius))
    else:
        dists = np.array([p[0] for p in profile.table])
        vals = np.array([p[1] for p in profile.table])
        s = np.interp(d, dists, vals, right=0.0)

    s = np.where(d < profile.cutoff_radius, s, 0.0)
    return float(s) if np.isscalar(distance) else s


def height_gain(height: float, curve: HeightCurve = DEFAULT_HEIGHT_CURVE) -> float:
    """Relative intensity in [0, 1] for a focal plane ``height`` mm above the device."""
    if not (0.0 < height <= MAX_HEIGHT_MM):
        raise OutOfRange("height_mm", height, 0.0, MAX_HEIGHT_MM)
    if curve.kind is HeightCurveKind.QUADRATIC:
        g = 1.0 - ((height - curve.peak_height) / curve.half_width) ** 2
        return min(1.0, max(0.0, g))
    heights = [h for h, _ in curve.table]
    gains = [g for _, g in curve.table]
    return float(np.interp(height, heights, gains))


def intensity_at(focal, skin, amplitude: float, height: float = DEFAULT_HEIGHT_MM,
                 profile: FalloffProfile = DEFAULT_FALLOFF,
                 curve: HeightCurve = DEFAULT_HEIGHT_CURVE) -> float:
    """Stimulation intensity at a skin point: amplitude * height gain * falloff.

    ``focal`` and ``skin`` are (x, y) positions in mm on the skin plane; the
    result depends on them only through their Euclidean distance.
    """
    dist = math.hypot(focal[0] - skin[0], focal[1] - skin[1])
    return amplitude * height_gain(height, curve) * falloff(dist, profile)


def falloff_profile_from_dict(d: dict) -> FalloffProfile:
    """Parse the optional ``model.falloff`` object of a Tacton document."""
    kind = FalloffKind(d.get("kind", "gaussian"))
    table = d.get("table")
    return FalloffProfile(
        kind=kind,
        fwhm=float(d.get("fwhm_mm", 8.6)),
        cutoff_radius=float(d.get("cutoff_radius_mm", 10.0)),
        table=tuple((float(a), float(b)) for a, b in table) if table else None,
    )


def height_curve_from_dict(d: dict) -> HeightCurve:
    """Parse the optional ``model.height_curve`` object of a Tacton document."""
    kind = HeightCurveKind(d.get("kind", "quadratic"))
    table = d.get("table")
    return HeightCurve(
        kind=kind,
        peak_height=float(d.get("peak_height_mm", DEFAULT_HEIGHT_MM)),
        half_width=float(d.get("half_width_mm", 280.0)),
        table=tuple((float(a), float(b)) for a, b in table) if table else None,
    )


def falloff_profile_to_dict(p: FalloffProfile) -> dict:
    d = {"kind": p.kind.value, "fwhm_mm": p.fwhm, "cutoff_radius_mm": p.cutoff_radius}
    if p.table is not None:
        d["table"] = [list(pair) for pair in p.table]
    return d


def height_curve_to_dict(c: HeightCurve) -> dict:
    d = {"kind": c.kind.value, "peak_height_mm": c.peak_height}
    if c.kind is HeightCurveKind.QUADRATIC:
        d["half_width_mm"] = c.half_width
    if c.table is not None:
        d["table"] = [list(pair) for pair in c.table]
    return d
