"""Exception hierarchy. Everything user-facing derives from ErgokitError so
the CLI can map data problems to a single exit code."""


class ErgokitError(Exception):
    """Base class for all data and contract errors raised by ergokit."""


class SkeletonConfigError(ErgokitError):
    """Skeleton config file is structurally invalid (unknown key, bad type)."""


class FrameFormatError(ErgokitError):
    """A recording document or frame line could not be parsed.

    Carries the 1-based line number when parsing a multi-line document.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IncompleteFrameError(ErgokitError):
    """A frame is missing a pose or angle entry required by the skeleton."""


class ContractViolation(ErgokitError):
    """An operation was called with input outside its stated preconditions."""
