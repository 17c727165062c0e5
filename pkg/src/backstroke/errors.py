"""Exception types shared across the package."""


class BackstrokeError(Exception):
    """Base class for every error this package raises deliberately."""


class InvalidInputError(BackstrokeError, ValueError):
    """An input is non-finite or violates a stated value invariant."""


class BoundsError(BackstrokeError, ValueError):
    """A pixel coordinate lies outside the image."""


class InvalidPixelError(BackstrokeError, ValueError):
    """A depth sample is marked invalid (value 0)."""


class BehindCameraError(BackstrokeError, ValueError):
    """A point with z <= 0 cannot be projected."""


class RenderError(BackstrokeError, RuntimeError):
    """The synthetic depth solve failed to converge or produced bad depths."""


class FormatError(BackstrokeError, ValueError):
    """A file does not match its documented format, or a value cannot be stored in it."""


class InsufficientDataError(BackstrokeError, ValueError):
    """Too few valid samples to proceed."""


class GapError(BackstrokeError, ValueError):
    """An invalid-pixel gap cannot be interpolated (missing valid endpoint)."""


class SingularFitError(BackstrokeError, ValueError):
    """The least-squares design is rank deficient."""


class OrderingError(BackstrokeError, ValueError):
    """A sequence that must be monotone in y is not."""


class DomainTooShortError(BackstrokeError, ValueError):
    """The curve domain is too short for the requested waypoint step."""


class DegeneratePathError(BackstrokeError, ValueError):
    """A path of zero length cannot be time-parameterized."""


class UnsupportedTransformError(BackstrokeError, ValueError):
    """The transform does not preserve the stroke plane, so a single pitch angle cannot represent orientation."""


class FrameError(BackstrokeError, ValueError):
    """An operation received a trajectory in the wrong coordinate frame."""


class CoverageError(BackstrokeError, ValueError):
    """A waypoint lies outside the reference surface's domain."""


class EmptyTraceError(BackstrokeError, ValueError):
    """An error-statistics input contains no entries."""


class ConfigError(BackstrokeError, ValueError):
    """A configuration file or CLI argument is missing or malformed."""
