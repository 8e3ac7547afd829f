"""Exception types shared across the package."""


class NlqwError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(NlqwError, ValueError):
    """Lattice size, site index, or array shape is unusable."""


class BoundaryOverflowError(NlqwError, RuntimeError):
    """Amplitude above threshold would cross an open-boundary edge."""


class DegenerateDistributionError(NlqwError, ValueError):
    """Probability distribution too close to zero to characterize."""


class InsufficientDataError(NlqwError, ValueError):
    """Not enough recorded samples for the requested statistic."""


class NoTransitionError(NlqwError, RuntimeError):
    """No localization transition found in the scanned interval."""
