"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so new error types should subclass one
of the three families below rather than ``CavsError`` directly.
"""


class CavsError(Exception):
    """Base class for all library errors."""


# -- validation family (CLI exit 2) -------------------------------------------

class ValidationError(CavsError):
    """Inputs are well-formed but violate a precondition."""


class UnknownVariableError(ValidationError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown variable {self.name!r}"


class GraphError(ValidationError):
    """Structural problem: cycle, self-loop, duplicate edge, wrong graph kind."""


class NotAmenableError(ValidationError):
    """Adjustment is not possible without orienting edges at the treatment."""


class InconsistentOrientationError(ValidationError):
    """An orientation choice admits no DAG in the equivalence class."""


class DataError(ValidationError):
    """Dataset contents do not match what an operation needs."""


class UnestimableInterventionError(DataError):
    def __init__(self, variable, category):
        super().__init__(
            f"cannot estimate do({variable}={category}): category never observed"
        )
        self.variable = variable
        self.category = category


class EmptyStratumError(DataError):
    """Raised in strict mode when an (x, z) stratum has no samples."""


class UndefinedSimilarityError(ValidationError):
    """Cosine similarity against an all-zero distribution."""


# -- computation-limit family (CLI exit 3) ------------------------------------

class LimitError(CavsError):
    """A configured enumeration bound was exceeded."""

    def __init__(self, what, cap):
        super().__init__(f"{what} exceeds the configured limit of {cap}")
        self.cap = cap


class EnumerationLimitError(LimitError):
    def __init__(self, cap):
        super().__init__("path enumeration", cap)


class SubsetScanLimitError(LimitError):
    def __init__(self, pool_size, cap):
        super().__init__(f"candidate pool of {pool_size} variables", cap)
        self.pool_size = pool_size


class ClassSizeLimitError(LimitError):
    def __init__(self, cap):
        super().__init__("equivalence class size", cap)


# -- input-format family (CLI exit 4) -----------------------------------------

class ParseError(CavsError):
    """Malformed network or dataset file.

    ``line`` and ``column`` are 1-based; either may be None when the problem
    is not tied to a single location (e.g. a cycle spanning several lines).
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
