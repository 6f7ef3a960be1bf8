"""Exception types shared across the package."""


class EgolinkError(Exception):
    """Base class for all egolink errors."""


class InvalidArgumentError(EgolinkError, ValueError):
    """An argument violates a documented precondition."""


class UndefinedValueError(EgolinkError):
    """A quantity is mathematically undefined for the given input."""


class DegenerateSampleError(EgolinkError):
    """The sampled rows carry no usable signal (e.g. all-zero in-sample block)."""


class DegenerateCVError(EgolinkError):
    """Cross-validation produced no scoreable holdout rows."""


class UndefinedMetricError(EgolinkError):
    """A ranking metric is undefined (missing positives, negatives, or ordered pairs)."""


class IngestionError(EgolinkError):
    """A data file could not be parsed."""

    def __init__(self, message: str, path: str | None = None, line_number: int | None = None):
        self.path = path
        self.line_number = line_number
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line_number is not None:
            prefix += f":{line_number}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ConvergenceWarning(UserWarning):
    """An iterative solver hit its iteration cap before reaching tolerance."""
