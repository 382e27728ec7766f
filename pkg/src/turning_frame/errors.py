"""Exception types shared across the package."""


class TurningFrameError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TurningFrameError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResolutionError(TurningFrameError):
    """A grid is too coarse to resolve the requested state or derivative."""


class InvalidStateError(TurningFrameError):
    """A state object violates an invariant required by the operation."""


class ConsistencyError(TurningFrameError):
    """Two independent computation routes disagree beyond tolerance."""


class NotAsymptoticError(TurningFrameError):
    """A fit window does not lie in the late-scale linear regime."""


class ConfigError(TurningFrameError):
    """A configuration document is missing or malformed.

    ``field`` names the offending entry so command-line users see exactly
    which key to fix.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
