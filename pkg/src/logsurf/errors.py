"""Exception types shared across the package."""


class LogSurfError(Exception):
    """Base class for all package errors."""


class ModelError(LogSurfError):
    """A surface model operation was invalid or left the model inconsistent."""


class NotNegativeDefiniteError(ModelError):
    """A curve configuration required to be negative definite is not."""


class MultiEdgeError(LogSurfError):
    """Two curves in a normal-crossing computation meet in more than one point."""


class ScenarioError(LogSurfError):
    """A scenario file is malformed or internally inconsistent."""
