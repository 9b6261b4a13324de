"""Exception types shared across the package."""

from __future__ import annotations


class SalsaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SalsaError):
    """Caller supplied data that violates an operation's precondition."""


class SchemaError(InvalidInputError):
    """A document does not match its schema; carries a JSON-path-like location."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class CatalogError(SalsaError):
    """The typology catalog is malformed."""


class ClassificationPathError(SalsaError):
    """A decision-tree walk broke down at a specific question."""

    def __init__(self, message: str, question: str | None = None, answer: str | None = None):
        self.question = question
        self.answer = answer
        super().__init__(message)


class InvalidEditError(SalsaError):
    """An edit cannot be used in the requested computation."""


class ScoringError(SalsaError):
    """Scoring was asked to process an edit it cannot score."""


class FitError(SalsaError):
    """Weight fitting failed; ``unobserved`` lists (family, polarity) keys with no data."""

    def __init__(self, message: str, unobserved: tuple = ()):
        self.unobserved = tuple(unobserved)
        super().__init__(message)


class UndefinedAlphaError(SalsaError):
    """Krippendorff's alpha has no defined value for the given matrix."""


class UndefinedAgreementError(SalsaError):
    """A pairwise agreement rate has no defined value (no qualifying units)."""


class WorkflowError(SalsaError):
    """Base class for annotation workflow violations."""


class WrongStageError(WorkflowError):
    """Submission stage does not match the task's current state."""


class NotAssignedError(WorkflowError):
    """The acting annotator is not assigned to this task at this stage."""


class RevisionConflictError(WorkflowError):
    """Optimistic concurrency check failed: revision is not newer than the stored one."""


class AssignmentError(WorkflowError):
    """An assignment request violates the workflow rules."""


class UnknownEditError(WorkflowError):
    """A classification submission references an edit id outside the adjudicated set."""


class EditValidationError(SalsaError):
    """Submitted edits failed structural validation; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"edit validation failed: {lines}")


class StoreError(SalsaError):
    """Base class for persistence problems."""


class StoreCorruptError(StoreError):
    """The on-disk store cannot be loaded."""


class NotFoundError(StoreError):
    """A corpus, pair, or task id is unknown."""
