"""Exception hierarchy shared across the simulation engine."""


class TactonSimError(Exception):
    """Base class for all errors raised by tactonsim."""


class ValidationError(TactonSimError):
    """A Tacton (or related input) violates its declared invariants.

    ``field`` names the offending parameter so front-ends can attach the
    message to the right control.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class OutOfRange(ValidationError):
    def __init__(self, field: str, value, lo=None, hi=None):
        bounds = ""
        if lo is not None or hi is not None:
            bounds = f" (allowed range {lo!r} .. {hi!r})"
        super().__init__(f"{field} = {value!r} is out of range{bounds}", field=field)
        self.value = value
        self.lo = lo
        self.hi = hi


class InconsistentSuperposition(ValidationError):
    def __init__(self, message: str):
        super().__init__(message, field="superposition_weights")


class DegenerateNoStimulation(ValidationError):
    """Static focal point with no amplitude modulation produces no vibration."""

    def __init__(self):
        super().__init__(
            "shape 'point' with all AM frequencies at 0 Hz renders no stimulation; "
            "use a moving trajectory or a nonzero AM frequency",
            field="am_frequencies",
        )


class UndefinedForPoint(TactonSimError):
    """Drawing frequency has no meaning for a static focal point."""


class RateTooLow(TactonSimError):
    """Sample rate too low to resolve the trajectory or modulation content."""


class CarrierRateTooLow(RateTooLow):
    """Sample rate cannot represent the 40 kHz carrier (needs >= 8 samples/cycle)."""


class NegativeDistance(TactonSimError):
    """Falloff queried with a negative distance."""


class SpacingOutOfRange(ValidationError):
    def __init__(self, spacing):
        super().__init__(
            f"grid spacing {spacing!r} mm outside [0.25, 5] mm", field="grid_spacing_mm"
        )


class EmptyWaveform(TactonSimError):
    pass


class EmptySpectrum(TactonSimError):
    pass


class ParseError(TactonSimError):
    """A measurement or data file could not be parsed.

    ``line`` is the 1-based line number where parsing failed, when known.
    """

    def __init__(self, message: str, path=None, line: int | None = None):
        loc = f"{path}:{line}: " if path is not None and line is not None else (
            f"{path}: " if path is not None else ""
        )
        super().__init__(f"{loc}{message}")
        self.path = path
        self.line = line


class MismatchedUnits(ParseError):
    """File header carries a recognized quantity in unsupported units."""
