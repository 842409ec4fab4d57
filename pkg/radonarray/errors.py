class RadonArrayError(Exception):
    """Base class for every error raised by radonarray."""


class InvalidArgumentError(RadonArrayError, ValueError):
    """An operation received an argument outside its documented domain."""


class ConfigError(RadonArrayError):
    def __init__(self, message: str, line: int | None = None) -> None:
        """Initialize a new ConfigError.

        Parameters
        ----------
        message (str): What is wrong with the scenario file.
        line (int, optional): 1-based line of the offending key. Defaults to None.
        """
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GridFileError(RadonArrayError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NoArrivalError(RadonArrayError):
    """No coherent arrival was found in the data."""


class SubArraySizingError(RadonArrayError):
    def __init__(self, message: str, best_k: int, best_peak: float) -> None:
        self.best_k = best_k
        self.best_peak = best_peak
        super().__init__(f"{message} (best k={best_k}, min peak semblance={best_peak:.3f})")


class IllConditionedTriangulationError(RadonArrayError):
    """The bearing rays are too close to parallel to intersect reliably."""


class BehindArrayError(RadonArrayError):
    """The least-squares intersection lies at z <= 0."""


class StageError(RadonArrayError):
    def __init__(self, stage: str, cause: Exception) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
