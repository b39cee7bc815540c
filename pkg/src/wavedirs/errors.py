"""Exception hierarchy shared by all wavedirs modules."""


class WavedirsError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(WavedirsError, ValueError):
    pass


class FrameUndefinedError(WavedirsError):
    """The neighborhood does not span a plane (collinear or too few points)."""


class InsufficientNeighborsError(WavedirsError):
    def __init__(self, count, required):
        super().__init__(f"{count} neighbors, at least {required} required")
        self.count = count
        self.required = required


class IllConditionedError(WavedirsError):
    def __init__(self, condition):
        super().__init__(f"design matrix is rank deficient (condition estimate {condition:.3e})")
        self.condition = condition


class ParseError(WavedirsError, ValueError):
    """Malformed point cloud file. ``location`` is a line number or byte offset."""

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)
        self.location = location
