"""Exception and warning types shared across the package."""


class ConfigurationError(ValueError):
    """Inconsistent dimensions, invalid schedules, or bad config values."""


class PlacementError(RuntimeError):
    """Random node placement failed to produce a connected network."""


class FilterNumericsError(RuntimeError):
    """A filter update could not be completed numerically."""


class ConsensusCycleWarning(UserWarning):
    """Consensus ran for a step count that is not a full selection cycle."""


class DegenerateHeadingWarning(UserWarning):
    """Truth propagation hit a zero-velocity state; heading is undefined."""
