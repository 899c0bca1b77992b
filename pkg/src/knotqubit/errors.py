"""Exception hierarchy shared by all knotqubit modules."""


class KnotQubitError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(KnotQubitError, ValueError):
    """An input violates a documented precondition."""


class InputFormatError(ValidationError):
    """A data file could not be parsed.

    ``line`` is the 1-based line number of the offending record when known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class GridTooCoarseError(ValidationError):
    """The finite-difference grid under-resolves a feature of the potential."""


class NoDoubletError(KnotQubitError):
    """Fewer than two bound states exist, so there is no tunnel-split doublet."""


class LevelDestroyedError(KnotQubitError):
    """A field exceeds the critical value at which the bound level disappears."""


class DegenerateCombinationError(KnotQubitError):
    """A symmetric/antisymmetric combination vanished identically."""
