"""The three-stage annotation workflow: select, adjudicate, classify.

Three annotators select edits independently, a fourth annotator (never one of
the three) adjudicates them into a single edit set, and the original three
classify and rate every adjudicated edit. All transitions here are pure
functions over immutable task values; the store layers persistence,
validation, and locking on top.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    AssignmentError,
    InvalidInputError,
    NotAssignedError,
    RevisionConflictError,
    UnknownEditError,
    WrongStageError,
)
from .model import Classification, Edit, InformationChange, Polarity
from .typology import Typology

ANNOTATORS_PER_STAGE = 3


class Stage(str, Enum):
    SELECTION = "selection"
    ADJUDICATION = "adjudication"
    CLASSIFICATION = "classification"


class TaskState(str, Enum):
    UNASSIGNED = "unassigned"
    SELECTING = "selecting"
    AWAITING_ADJUDICATION = "awaiting_adjudication"
    ADJUDICATING = "adjudicating"
    AWAITING_CLASSIFICATION = "awaiting_classification"
    CLASSIFYING = "classifying"
    COMPLETE = "complete"


@dataclass(frozen=True)
class ClassificationEntry:
    """One annotator's classification of one adjudicated edit."""

    edit_id: str
    classification: Classification
    information_change: InformationChange | None = None


@dataclass(frozen=True)
class AnnotationRecord:
    """A single stage submission by one annotator for one pair.

    Selection and adjudication carry full edits (operations and spans);
    classification carries per-edit classification entries referencing
    adjudicated edit ids.
    """

    annotator: str
    pair: str
    stage: Stage
    revision: int = 1
    submitted_at: str = ""
    edits: tuple[Edit, ...] = ()
    classifications: tuple[ClassificationEntry, ...] = ()


@dataclass(frozen=True)
class WorkflowTask:
    pair: str
    state: TaskState = TaskState.UNASSIGNED
    selection_annotators: tuple[str, ...] = ()
    selection_received: tuple[str, ...] = ()
    adjudicator: str | None = None
    classification_annotators: tuple[str, ...] = ()
    classification_received: tuple[str, ...] = ()
    adjudicated_edits: tuple[Edit, ...] | None = None

    def adjudicated_ids(self) -> frozenset[str]:
        return frozenset(e.id for e in self.adjudicated_edits or ())


def _distinct(annotators: Sequence[str]) -> tuple[str, ...]:
    if len(set(annotators)) != len(annotators):
        raise AssignmentError("annotator ids must be distinct")
    return tuple(annotators)


def assign_selection(task: WorkflowTask, annotators: Sequence[str]) -> WorkflowTask:
    if task.state is not TaskState.UNASSIGNED:
        raise AssignmentError(f"task '{task.pair}' is {task.state.value}, not unassigned")
    if len(annotators) != ANNOTATORS_PER_STAGE:
        raise AssignmentError(f"selection needs exactly {ANNOTATORS_PER_STAGE} annotators")
    return replace(task, state=TaskState.SELECTING, selection_annotators=_distinct(annotators))


def assign_adjudicator(task: WorkflowTask, annotator: str) -> WorkflowTask:
    if task.state is not TaskState.AWAITING_ADJUDICATION:
        raise AssignmentError(f"task '{task.pair}' is {task.state.value}, not awaiting adjudication")
    if annotator in task.selection_annotators:
        raise AssignmentError("the adjudicator must not be one of the selection annotators")
    return replace(task, state=TaskState.ADJUDICATING, adjudicator=annotator)


def assign_classification(task: WorkflowTask, annotators: Sequence[str] | None = None) -> WorkflowTask:
    """Move to classifying; defaults to the original selection annotators."""
    if task.state is not TaskState.AWAITING_CLASSIFICATION:
        raise AssignmentError(
            f"task '{task.pair}' is {task.state.value}, not awaiting classification"
        )
    chosen = tuple(annotators) if annotators is not None else task.selection_annotators
    if len(chosen) != ANNOTATORS_PER_STAGE:
        raise AssignmentError(f"classification needs exactly {ANNOTATORS_PER_STAGE} annotators")
    return replace(
        task, state=TaskState.CLASSIFYING, classification_annotators=_distinct(chosen)
    )


_STAGE_STATE = {
    Stage.SELECTION: TaskState.SELECTING,
    Stage.ADJUDICATION: TaskState.ADJUDICATING,
    Stage.CLASSIFICATION: TaskState.CLASSIFYING,
}


def apply_submission(
    task: WorkflowTask, record: AnnotationRecord, last_revision: int | None
) -> WorkflowTask:
    """Advance the task with one stored submission.

    Raises typed workflow errors for wrong-stage, unassigned-annotator, and
    stale-revision submissions; the task is untouched in every error case.
    """
    if record.pair != task.pair:
        raise InvalidInputError(f"record targets pair '{record.pair}', task is '{task.pair}'")
    expected = _STAGE_STATE[record.stage]
    if task.state is not expected:
        raise WrongStageError(
            f"task '{task.pair}' is {task.state.value}; cannot accept a "
            f"{record.stage.value} submission"
        )
    if record.revision < 1 or (last_revision is not None and record.revision <= last_revision):
        raise RevisionConflictError(
            f"revision {record.revision} is not newer than stored revision {last_revision}"
        )

    if record.stage is Stage.SELECTION:
        if record.annotator not in task.selection_annotators:
            raise NotAssignedError(f"'{record.annotator}' is not assigned to select on '{task.pair}'")
        received = _with(task.selection_received, record.annotator, task.selection_annotators)
        state = (
            TaskState.AWAITING_ADJUDICATION
            if set(received) == set(task.selection_annotators)
            else TaskState.SELECTING
        )
        return replace(task, state=state, selection_received=received)

    if record.stage is Stage.ADJUDICATION:
        if record.annotator != task.adjudicator:
            raise NotAssignedError(f"'{record.annotator}' is not the adjudicator of '{task.pair}'")
        return replace(
            task, state=TaskState.AWAITING_CLASSIFICATION, adjudicated_edits=record.edits
        )

    if record.annotator not in task.classification_annotators:
        raise NotAssignedError(f"'{record.annotator}' is not assigned to classify on '{task.pair}'")
    known = task.adjudicated_ids()
    entry_ids = [e.edit_id for e in record.classifications]
    unknown = sorted(set(entry_ids) - known)
    if unknown:
        raise UnknownEditError(
            f"classification references edit id(s) outside the adjudicated set: {', '.join(unknown)}"
        )
    if len(set(entry_ids)) != len(entry_ids):
        raise InvalidInputError("classification lists the same edit id twice")
    # Partial submissions are stored as progress but only a complete one marks
    # the annotator as received.
    if set(entry_ids) == known:
        received = _with(task.classification_received, record.annotator, task.classification_annotators)
        state = (
            TaskState.COMPLETE
            if set(received) == set(task.classification_annotators)
            else TaskState.CLASSIFYING
        )
        return replace(task, state=state, classification_received=received)
    return task


def _with(received: tuple[str, ...], annotator: str, assigned: tuple[str, ...]) -> tuple[str, ...]:
    if annotator in received:
        return received
    return tuple(a for a in assigned if a in received or a == annotator)


def check_task_invariants(task: WorkflowTask) -> list[str]:
    """Internal consistency checks, used by randomized workflow tests."""
    problems: list[str] = []
    if not set(task.selection_received) <= set(task.selection_annotators):
        problems.append("selection received is not a subset of assigned")
    if not set(task.classification_received) <= set(task.classification_annotators):
        problems.append("classification received is not a subset of assigned")
    if task.adjudicator is not None and task.adjudicator in task.selection_annotators:
        problems.append("adjudicator overlaps the selection annotators")
    if task.state is TaskState.UNASSIGNED and task.selection_annotators:
        problems.append("unassigned task has selection annotators")
    if task.state in (TaskState.SELECTING, TaskState.AWAITING_ADJUDICATION) and len(
        task.selection_annotators
    ) != ANNOTATORS_PER_STAGE:
        problems.append("selecting task lacks a full selection assignment")
    if task.state is TaskState.AWAITING_ADJUDICATION and set(task.selection_received) != set(
        task.selection_annotators
    ):
        problems.append("awaiting adjudication without all selections received")
    if task.state in (TaskState.ADJUDICATING,) and task.adjudicator is None:
        problems.append("adjudicating without an adjudicator")
    if (
        task.state
        in (TaskState.AWAITING_CLASSIFICATION, TaskState.CLASSIFYING, TaskState.COMPLETE)
        and task.adjudicated_edits is None
    ):
        problems.append("post-adjudication state without adjudicated edits")
    if task.state is TaskState.COMPLETE and set(task.classification_received) != set(
        task.classification_annotators
    ):
        problems.append("complete without all classifications received")
    return problems


# ---------------------------------------------------------------------------
# Final aggregation of the three classification submissions


def _round_half_away(value: float) -> int:
    return int(math.floor(value + 0.5)) if value >= 0 else -int(math.floor(-value + 0.5))


def _majority(values: Iterable, threshold: int) -> list:
    counts = Counter(values)
    best = max(counts.values(), default=0)
    if best < threshold:
        return []
    return [v for v, n in counts.items() if n == best]


def merge_classifications(
    adjudicated: Sequence[Edit],
    records: Sequence[AnnotationRecord],
    typology: Typology,
) -> tuple[Edit, ...]:
    """Merge the classifiers' submissions into one final classification per edit.

    Polarity and types go by majority vote; a three-way polarity tie resolves
    toward error, type ties resolve by catalog order. The rating magnitude is
    the mean of the three magnitudes (trivial counts 0) rounded half away from
    zero, and the grammar flag is a majority vote. The merge is a pure
    function of the submissions, so it is permutation-invariant.
    """
    if not records:
        raise InvalidInputError("no classification records to merge")
    entries_by_edit: dict[str, list[ClassificationEntry]] = {e.id: [] for e in adjudicated}
    for record in records:
        for entry in record.classifications:
            if entry.edit_id in entries_by_edit:
                entries_by_edit[entry.edit_id].append(entry)
    merged: list[Edit] = []
    for edit in adjudicated:
        entries = entries_by_edit[edit.id]
        if not entries:
            raise InvalidInputError(f"edit '{edit.id}' was never classified")
        classifications = [e.classification for e in entries]
        polarity = _merge_polarity(classifications)
        grammar = sum(1 for c in classifications if c.grammar_error) * 2 > len(classifications)
        if polarity is Polarity.TRIVIAL:
            final = Classification(polarity=Polarity.TRIVIAL, grammar_error=grammar)
        else:
            magnitudes = [c.magnitude for c in classifications]
            rating = _round_half_away(sum(magnitudes) / len(magnitudes))
            winners = [c for c in classifications if c.polarity is polarity]
            if polarity is Polarity.QUALITY:
                final = Classification(
                    polarity=polarity,
                    quality_type=_merge_quality_type(winners, typology),
                    grammar_error=grammar,
                    rating=max(rating, 1),
                )
            else:
                final = Classification(
                    polarity=polarity,
                    error_types=_merge_error_types(winners, typology),
                    grammar_error=grammar,
                    rating=max(rating, 1),
                )
        merged.append(
            replace(
                edit,
                classification=final,
                information_change=_merge_information_change(entries, edit.information_change),
            )
        )
    return tuple(merged)


def _merge_polarity(classifications: Sequence[Classification]) -> Polarity:
    winners = _majority((c.polarity for c in classifications), threshold=2)
    if len(winners) == 1:
        return winners[0]
    # No strict majority (or a tie): resolve toward error.
    return Polarity.ERROR if not winners or Polarity.ERROR in winners else winners[0]


def _merge_quality_type(winners: Sequence[Classification], typology: Typology) -> str:
    counts = Counter(c.quality_type for c in winners if c.quality_type)
    if not counts:
        raise InvalidInputError("quality classification without a quality type")
    best = max(counts.values())
    tied = [t for t, n in counts.items() if n == best]
    return min(tied, key=typology.index)


def _merge_error_types(winners: Sequence[Classification], typology: Typology) -> tuple[str, ...]:
    votes = Counter(t for c in winners for t in c.error_types)
    if not votes:
        raise InvalidInputError("error classification without error types")
    majority = [t for t, n in votes.items() if n * 2 > len(winners)]
    if not majority:
        best = max(votes.values())
        tied = [t for t, n in votes.items() if n == best]
        majority = [min(tied, key=typology.index)]
    return tuple(sorted(majority, key=typology.index))


def _merge_information_change(
    entries: Sequence[ClassificationEntry], fallback: InformationChange | None
) -> InformationChange | None:
    stated = [e.information_change for e in entries if e.information_change is not None]
    if not stated:
        return fallback
    counts = Counter(stated)
    best = max(counts.values())
    tied = [ic for ic, n in counts.items() if n == best]
    order = list(InformationChange)
    return min(tied, key=order.index)
