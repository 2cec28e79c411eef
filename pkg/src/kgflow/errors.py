"""Exception types raised across the library.

Every kgflow-specific failure derives from :class:`KgflowError` so callers can
catch the whole family with one clause while tests pin down exact subtypes.
"""

from __future__ import annotations


class KgflowError(Exception):
    """Base class for all library errors."""


# -- RDF / Turtle ------------------------------------------------------------

class TurtleSyntaxError(KgflowError):
    """Malformed Turtle input. Carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownPrefixError(TurtleSyntaxError):
    """A prefixed name used a prefix that was never declared."""

    def __init__(self, prefix: str, line: int, column: int):
        super().__init__(f"undeclared prefix '{prefix}:'", line, column)
        self.prefix = prefix


# -- Schema registry ---------------------------------------------------------

class SchemaLoadError(KgflowError):
    """A schema document violates the structural rules of the registry."""


class UnknownClassError(KgflowError):
    """An IRI does not name a registered class (or names the wrong kind)."""


class DuplicateClassError(KgflowError):
    """An extension tried to register an IRI that already exists."""


class UnknownParentError(KgflowError):
    """An extension referenced a parent class that is not registered."""


class UnboundImplementationError(KgflowError):
    """No callable is registered for a task/method implementation key."""


# -- Validation --------------------------------------------------------------

class ShapeLoadError(KgflowError):
    """The shapes document could not be interpreted."""


class ValidationFailedError(KgflowError):
    """A graph failed validation where conformance is mandatory."""

    def __init__(self, report):
        lines = "; ".join(v.message for v in report.violations[:3])
        more = "" if len(report.violations) <= 3 else f" (+{len(report.violations) - 3} more)"
        super().__init__(f"knowledge graph does not conform: {lines}{more}")
        self.report = report


# -- Builder -----------------------------------------------------------------

class InvalidNameError(KgflowError):
    """A pipeline or entity name is not usable as an IRI local name."""


class DuplicateEntityNameError(KgflowError):
    """Two data entities in one pipeline share a name."""


class IncompatibleMethodError(KgflowError):
    """The chosen method class is not compatible with the task class."""


class ArityMismatchError(KgflowError):
    """Wrong number of inputs for a task, or wrong data arity for a plot."""


class ParamTypeError(KgflowError):
    """A parameter value has the wrong type, or a required one is missing."""


class UnknownParamError(KgflowError):
    """A parameter name is not declared for the method class."""


class EmptyPipelineError(KgflowError):
    """The pipeline has no tasks."""


class IoError(KgflowError):
    """Reading or writing a file failed."""


# -- Executor ----------------------------------------------------------------

class UnboundInputError(KgflowError):
    """A task input is neither a CSV column nor an earlier task's output."""


class RuntimeFailure(KgflowError):
    """A task raised during execution; the run is aborted."""

    def __init__(self, task_iri: str, cause: str, partial=None):
        super().__init__(f"task {task_iri} failed: {cause}")
        self.task_iri = task_iri
        self.cause = cause
        self.partial = partial


class MissingColumnError(KgflowError):
    """The dataset has no column with the declared source name."""

    def __init__(self, column: str):
        super().__init__(f"dataset has no column named {column!r}")
        self.column = column


# -- Datasets ----------------------------------------------------------------

class EmptyFileError(KgflowError):
    """The CSV file has no header row."""


class RaggedRowsError(KgflowError):
    """A CSV row has the wrong field count or an empty cell."""

    def __init__(self, line: int, detail: str):
        super().__init__(f"bad CSV row at line {line}: {detail}")
        self.line = line


# -- Method library ----------------------------------------------------------

class BadRatioError(KgflowError):
    """Split ratio outside the open interval (0, 1)."""


class TooFewRowsError(KgflowError):
    """Not enough rows to perform the operation."""


class ConstantColumnError(KgflowError):
    """Normalization is undefined for a constant column."""


class EmptyVectorError(KgflowError):
    """A statistic was requested over zero values."""


class BadPercentileError(KgflowError):
    """Percentile rank outside [0, 100]."""


class SingularSystemError(KgflowError):
    """The normal equations are singular; no unique least-squares solution."""


class BadKError(KgflowError):
    """Neighbor or cluster count outside the usable range."""


class EmptyTrainingSetError(KgflowError):
    """A model was asked to train on zero rows."""


class DimensionMismatchError(KgflowError):
    """Feature width differs between training and prediction."""


class LengthMismatchError(KgflowError):
    """Two vectors that must align have different lengths."""


class ZeroActualError(KgflowError):
    """Relative error is undefined when an actual value is zero."""


class CanvasOverflowError(KgflowError):
    """More plots were drawn than the canvas grid has slots."""
