"""Exception hierarchy for poolal.

Two families hang off PoolalError:

- ConfigurationError: the caller asked for something impossible before any
  work happened (bad config values, infeasible stratification, mismatched
  datasets). The CLI maps these to exit code 2.
- Everything else is a runtime failure (pool transitions, numerics, budget,
  data format, I/O). The CLI maps these to exit code 1.
"""

from pathlib import Path


class PoolalError(Exception):
    """Base class for all poolal errors."""


# --- Configuration family ---


class ConfigurationError(PoolalError):
    """Raised for invalid experiment or CLI configuration."""


class InvalidConfigError(ConfigurationError):
    """Raised when a configuration value violates its contract."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class StratificationError(ConfigurationError):
    """Raised when a stratified seed draw cannot cover every class."""

    def __init__(self, seed_count: int, class_count: int):
        super().__init__(
            f"seed_count={seed_count} cannot cover {class_count} classes"
        )
        self.seed_count = seed_count
        self.class_count = class_count


class IntegrityError(ConfigurationError):
    """Raised when runs that must share a dataset report different digests."""

    def __init__(self, expected: str, actual: str):
        super().__init__(f"dataset digest mismatch: expected {expected[:12]}, got {actual[:12]}")
        self.expected = expected
        self.actual = actual


# --- Pool transitions ---


class PoolError(PoolalError):
    """Base class for illegal pool transitions."""


class DoubleLabelError(PoolError):
    """Raised when an oracle label is committed for an already labeled id."""

    def __init__(self, instance_id: int):
        super().__init__(f"instance {instance_id} is already labeled")
        self.instance_id = instance_id


class InstanceNotFoundError(PoolError):
    """Raised when an id is not part of the training pool."""

    def __init__(self, instance_id: int):
        super().__init__(f"instance {instance_id} is not in the training pool")
        self.instance_id = instance_id


class PseudoConflictError(PoolError):
    """Raised when a pseudo-label targets an instance outside D^U."""

    def __init__(self, instance_id: int):
        super().__init__(f"instance {instance_id} cannot receive a pseudo-label")
        self.instance_id = instance_id


class PoolExhaustedError(PoolError):
    """Raised when a selector is asked to draw from an empty D^U."""


# --- Numerics ---


class NumericError(PoolalError):
    """Base class for classifier and scoring failures."""


class ShapeError(NumericError):
    """Raised when a vector or matrix has the wrong dimensions."""


class InputError(NumericError):
    """Raised for non-finite features or empty inputs."""


class DegenerateBatchError(NumericError):
    """Raised when every example in a batch carries zero weight."""


class DegenerateTrainingError(NumericError):
    """Raised when a training set holds fewer than two distinct labels."""

    def __init__(self, labels: list[int]):
        super().__init__(f"training set needs >= 2 distinct labels, got {sorted(set(labels))}")
        self.labels = labels


class UndefinedMeasureError(NumericError):
    """Raised when an uncertainty measure is undefined (K=1)."""


class UndefinedDensityError(NumericError):
    """Raised when density is requested against an empty pool."""


# --- Budget ---


class BudgetExhaustedError(PoolalError):
    """Raised when a charge would push oracle_spent past the budget."""

    def __init__(self, budget: int, spent: int, requested: int):
        super().__init__(
            f"oracle budget exhausted: spent {spent} of {budget}, requested {requested}"
        )
        self.budget = budget
        self.spent = spent
        self.requested = requested


# --- Data ---


class DataError(PoolalError):
    """Base class for dataset ingestion and emission failures."""


class DatasetFormatError(DataError):
    """Raised when an embedding file is malformed."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")
        self.line = line
        self.field = field


class GenerationError(DataError):
    """Raised when synthetic class means cannot be placed at the requested separation."""


class ReportIOError(DataError):
    """Raised when a report or snapshot cannot be read or written."""

    def __init__(self, path: Path, last_error: Exception | None = None):
        super().__init__(f"I/O failure at {path}: {last_error}")
        self.path = path
        self.last_error = last_error
