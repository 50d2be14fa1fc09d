"""Exception types raised by the toolkit.

IO and argument-parsing problems raise the builtin ``ValueError`` /
``OSError``; everything that represents a *numerical* failure of an
analysis gets a dedicated class below so callers (and the CLI exit-code
contract) can tell the two apart.
"""


class HomsimError(Exception):
    """Base class for numerical/analysis failures."""


class NoRealRootError(HomsimError):
    """Target energy lies beyond the reach of the field-tuning parabola."""


class OutOfWindowError(HomsimError):
    """Field value or solution lies outside the allowed field window."""


class GridTooCoarseError(HomsimError):
    """Trace step too large to resolve the detector response."""


class SpanTooShortError(HomsimError):
    """Trace does not extend far enough for an edge-safe convolution."""


class GridMismatchError(HomsimError):
    """Two traces that must share a delay grid do not."""


class WindowExceedsTraceError(HomsimError):
    """Requested sampling window is wider than the supplied trace."""


class SpanTooNarrowError(HomsimError):
    """Requested spectrum span does not cover the line."""


class DegenerateDataError(HomsimError):
    """Data carry no fittable structure (flat, too few points, ...)."""


class NoPeakError(HomsimError):
    """Curve has no unique interior maximum to fit."""


class NonPhysicalError(HomsimError):
    """Fit converged to a physically meaningless optimum."""


class NotConvergedError(HomsimError):
    """Least-squares iteration hit its cap without meeting tolerance.

    Carries the partial fit state (if any) as ``partial_result``.
    """

    def __init__(self, message: str, partial_result=None):
        super().__init__(message)
        self.partial_result = partial_result
