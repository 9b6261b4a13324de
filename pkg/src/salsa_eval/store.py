"""Directory-backed persistence for corpora, tasks, and annotation records.

One JSON file per corpus, per task, and per annotation record; records are
append-only and never rewritten. Writes are serialized per task id, reads are
lock-free over the in-memory index, and every mutation is written through to
disk immediately so shutdown never has pending state.
"""

from __future__ import annotations

import datetime as _dt
import json
import threading
from collections import defaultdict
from dataclasses import replace
from pathlib import Path
from typing import Sequence
from urllib.parse import quote

from .errors import (
    NotFoundError,
    RevisionConflictError,
    SchemaError,
    StoreCorruptError,
    EditValidationError,
)
from .model import Edit, SentencePair, snap_edit
from .serialization import (
    Corpus,
    corpus_to_dict,
    edit_to_dict,
    parse_corpus,
    parse_edit,
    record_to_dict,
    parse_annotations,
    annotations_to_dict,
)
from .typology import Typology, default_typology
from .validation import Violation, validate_edit, validate_edits
from .workflow import (
    AnnotationRecord,
    Stage,
    TaskState,
    WorkflowTask,
    apply_submission,
    assign_adjudicator,
    assign_classification,
    assign_selection,
    merge_classifications,
)

DATASET_VERSION = 1


def _fs_name(identifier: str) -> str:
    # Pair and corpus ids are arbitrary strings; percent-encode for file names.
    return quote(identifier, safe="")


def _task_to_dict(task: WorkflowTask) -> dict:
    out: dict = {
        "pair": task.pair,
        "state": task.state.value,
        "selection_annotators": list(task.selection_annotators),
        "selection_received": list(task.selection_received),
        "adjudicator": task.adjudicator,
        "classification_annotators": list(task.classification_annotators),
        "classification_received": list(task.classification_received),
    }
    if task.adjudicated_edits is not None:
        out["adjudicated_edits"] = [edit_to_dict(e) for e in task.adjudicated_edits]
    return out


def _task_from_dict(obj: dict) -> WorkflowTask:
    adjudicated = obj.get("adjudicated_edits")
    return WorkflowTask(
        pair=obj["pair"],
        state=TaskState(obj["state"]),
        selection_annotators=tuple(obj.get("selection_annotators", [])),
        selection_received=tuple(obj.get("selection_received", [])),
        adjudicator=obj.get("adjudicator"),
        classification_annotators=tuple(obj.get("classification_annotators", [])),
        classification_received=tuple(obj.get("classification_received", [])),
        adjudicated_edits=(
            tuple(parse_edit(e, f"adjudicated_edits[{i}]") for i, e in enumerate(adjudicated))
            if adjudicated is not None
            else None
        ),
    )


class Store:
    """Desk-scale document store plus the workflow engine on top of it."""

    def __init__(self, root: str | Path, typology: Typology | None = None):
        self.root = Path(root)
        self.typology = typology or default_typology()
        self._corpora: dict[str, Corpus] = {}
        self._pairs: dict[str, SentencePair] = {}
        self._pair_corpus: dict[str, str] = {}
        self._tasks: dict[str, WorkflowTask] = {}
        self._records: dict[str, list[AnnotationRecord]] = defaultdict(list)
        self._locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._global_lock = threading.Lock()
        for sub in ("corpora", "tasks", "records"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self._load()

    # -- loading -----------------------------------------------------------

    def _load(self) -> None:
        try:
            for path in sorted((self.root / "corpora").glob("*.json")):
                corpus = parse_corpus(json.loads(path.read_text("utf-8")))
                self._index_corpus(corpus)
            for path in sorted((self.root / "tasks").glob("*.json")):
                task = _task_from_dict(json.loads(path.read_text("utf-8")))
                self._tasks[task.pair] = task
            for path in sorted((self.root / "records").glob("*/*.json")):
                obj = json.loads(path.read_text("utf-8"))
                (record,) = parse_annotations({"annotations": [obj]})
                self._records[record.pair].append(record)
            for records in self._records.values():
                records.sort(key=lambda r: (r.stage.value, r.annotator, r.revision))
        except (json.JSONDecodeError, SchemaError, KeyError, ValueError) as exc:
            raise StoreCorruptError(f"cannot load store at {self.root}: {exc}") from exc
        for pair_id in self._pairs:
            if pair_id not in self._tasks:
                raise StoreCorruptError(f"pair '{pair_id}' has no task file")

    def _index_corpus(self, corpus: Corpus) -> None:
        if corpus.id in self._corpora:
            raise SchemaError("id", f"corpus '{corpus.id}' already exists")
        for pair in corpus.pairs:
            if pair.id in self._pairs:
                raise SchemaError("pairs", f"pair id '{pair.id}' already exists in another corpus")
        self._corpora[corpus.id] = corpus
        for pair in corpus.pairs:
            self._pairs[pair.id] = pair
            self._pair_corpus[pair.id] = corpus.id

    # -- corpora -----------------------------------------------------------

    def import_corpus(self, document: dict) -> str:
        corpus = parse_corpus(document)
        with self._global_lock:
            self._index_corpus(corpus)
            self._write_json(
                self.root / "corpora" / f"{_fs_name(corpus.id)}.json", corpus_to_dict(corpus)
            )
            for pair in corpus.pairs:
                task = WorkflowTask(pair=pair.id)
                self._tasks[pair.id] = task
                self._write_task(task)
        return corpus.id

    def corpora(self) -> list[Corpus]:
        return [self._corpora[key] for key in sorted(self._corpora)]

    def corpus(self, corpus_id: str) -> Corpus:
        if corpus_id not in self._corpora:
            raise NotFoundError(f"unknown corpus '{corpus_id}'")
        return self._corpora[corpus_id]

    def export_corpus(self, corpus_id: str) -> dict:
        return corpus_to_dict(self.corpus(corpus_id))

    def pair(self, pair_id: str) -> SentencePair:
        if pair_id not in self._pairs:
            raise NotFoundError(f"unknown pair '{pair_id}'")
        return self._pairs[pair_id]

    def corpus_of(self, pair_id: str) -> str:
        return self._pair_corpus.get(pair_id, "")

    def weight_scheme(self):
        """The scheme in ``weights.json`` at the store root, or the shipped default."""
        from .scoring import default_weights
        from .serialization import parse_weight_scheme

        path = self.root / "weights.json"
        if path.exists():
            return parse_weight_scheme(json.loads(path.read_text("utf-8")))
        return default_weights()

    def pairs(self, corpus_id: str | None = None) -> list[SentencePair]:
        if corpus_id is not None:
            return list(self.corpus(corpus_id).pairs)
        return [self._pairs[key] for key in sorted(self._pairs)]

    # -- tasks and submissions ----------------------------------------------

    def task(self, pair_id: str) -> WorkflowTask:
        if pair_id not in self._tasks:
            raise NotFoundError(f"no task for pair '{pair_id}'")
        return self._tasks[pair_id]

    def tasks(self, annotator: str | None = None, state: TaskState | None = None) -> list[WorkflowTask]:
        out = []
        for pair_id in sorted(self._tasks):
            task = self._tasks[pair_id]
            if state is not None and task.state is not state:
                continue
            if annotator is not None and not self._pending_for(task, annotator):
                continue
            out.append(task)
        return out

    def _pending_for(self, task: WorkflowTask, annotator: str) -> bool:
        if task.state is TaskState.SELECTING:
            return annotator in task.selection_annotators and annotator not in task.selection_received
        if task.state is TaskState.ADJUDICATING:
            return annotator == task.adjudicator
        if task.state is TaskState.CLASSIFYING:
            return (
                annotator in task.classification_annotators
                and annotator not in task.classification_received
            )
        return False

    def assign(self, pair_id: str, stage: Stage, annotators: Sequence[str]) -> WorkflowTask:
        with self._locks[pair_id]:
            task = self.task(pair_id)
            if stage is Stage.SELECTION:
                task = assign_selection(task, annotators)
            elif stage is Stage.ADJUDICATION:
                if len(annotators) != 1:
                    raise EditValidationError(
                        [Violation("assignment", "adjudication takes exactly one annotator")]
                    )
                task = assign_adjudicator(task, annotators[0])
            else:
                task = assign_classification(task, annotators or None)
            self._tasks[pair_id] = task
            self._write_task(task)
            return task

    def last_revision(self, pair_id: str, annotator: str, stage: Stage) -> int | None:
        revisions = [
            r.revision
            for r in self._records.get(pair_id, [])
            if r.annotator == annotator and r.stage is stage
        ]
        return max(revisions) if revisions else None

    def submit(self, record: AnnotationRecord) -> tuple[WorkflowTask, list[str]]:
        """Validate, persist, and apply one submission; returns (task, snap warnings)."""
        pair = self.pair(record.pair)
        warnings: list[str] = []
        if record.edits:
            snapped = []
            for edit in record.edits:
                edit, w = snap_edit(edit, pair)
                warnings.extend(w)
                snapped.append(edit)
            record = AnnotationRecord(
                annotator=record.annotator,
                pair=record.pair,
                stage=record.stage,
                revision=record.revision,
                submitted_at=record.submitted_at,
                edits=tuple(snapped),
                classifications=record.classifications,
            )
        violations = self._validate_record(record, pair)
        if violations:
            raise EditValidationError(violations)
        if not record.submitted_at:
            record = AnnotationRecord(
                annotator=record.annotator,
                pair=record.pair,
                stage=record.stage,
                revision=record.revision,
                submitted_at=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
                edits=record.edits,
                classifications=record.classifications,
            )
        with self._locks[record.pair]:
            task = self.task(record.pair)
            last = self.last_revision(record.pair, record.annotator, record.stage)
            updated = apply_submission(task, record, last)
            self._write_record(record)
            self._records[record.pair].append(record)
            self._tasks[record.pair] = updated
            self._write_task(updated)
            return updated, warnings

    def _validate_record(self, record: AnnotationRecord, pair: SentencePair) -> list[Violation]:
        if record.stage in (Stage.SELECTION, Stage.ADJUDICATION):
            violations = validate_edits(record.edits, pair, self.typology)
            for edit in record.edits:
                for sub in edit.walk():
                    if sub.classification is not None:
                        violations.append(
                            Violation(
                                "stage.classification",
                                f"{record.stage.value} submissions carry no classifications",
                                sub.id,
                            )
                        )
            return violations
        violations: list[Violation] = []
        task = self.task(record.pair)
        adjudicated = {e.id: e for e in task.adjudicated_edits or ()}
        for entry in record.classifications:
            edit = adjudicated.get(entry.edit_id)
            if edit is None:
                continue  # membership is enforced by the workflow transition
            candidate = replace(
                edit,
                classification=entry.classification,
                information_change=entry.information_change or edit.information_change,
            )
            violations.extend(
                v
                for v in validate_edit(candidate, pair, self.typology)
                if v.code.startswith("classification")
            )
        return violations

    def records(
        self,
        pair_id: str | None = None,
        stage: Stage | None = None,
        annotator: str | None = None,
    ) -> list[AnnotationRecord]:
        pair_ids = [pair_id] if pair_id is not None else sorted(self._records)
        out: list[AnnotationRecord] = []
        for pid in pair_ids:
            for record in self._records.get(pid, []):
                if stage is not None and record.stage is not stage:
                    continue
                if annotator is not None and record.annotator != annotator:
                    continue
                out.append(record)
        return out

    def latest_records(self, pair_id: str, stage: Stage) -> list[AnnotationRecord]:
        """The highest-revision record per annotator for one pair and stage."""
        latest: dict[str, AnnotationRecord] = {}
        for record in self.records(pair_id=pair_id, stage=stage):
            current = latest.get(record.annotator)
            if current is None or record.revision > current.revision:
                latest[record.annotator] = record
        return [latest[a] for a in sorted(latest)]

    # -- aggregation and export ---------------------------------------------

    def aggregate_final(self, pair_id: str) -> tuple[Edit, ...]:
        task = self.task(pair_id)
        if task.state is not TaskState.COMPLETE:
            raise NotFoundError(f"task '{pair_id}' is not complete")
        assert task.adjudicated_edits is not None
        records = [
            r
            for r in self.latest_records(pair_id, Stage.CLASSIFICATION)
            if {e.edit_id for e in r.classifications} == task.adjudicated_ids()
        ]
        return merge_classifications(task.adjudicated_edits, records, self.typology)

    def final_dataset(self, corpus_id: str | None = None) -> list[tuple[SentencePair, tuple[Edit, ...]]]:
        out = []
        for pair in self.pairs(corpus_id):
            task = self._tasks.get(pair.id)
            if task is not None and task.state is TaskState.COMPLETE:
                out.append((pair, self.aggregate_final(pair.id)))
        return out

    def has_incomplete(self, corpus_id: str | None = None) -> bool:
        return any(
            self._tasks[p.id].state is not TaskState.COMPLETE for p in self.pairs(corpus_id)
        )

    def export_dataset(self, corpus_id: str | None = None) -> dict:
        corpora = [self.corpus(corpus_id)] if corpus_id else self.corpora()
        pair_ids = {p.id for c in corpora for p in c.pairs}
        records = [r for pid in sorted(pair_ids) for r in self._records.get(pid, [])]
        return {
            "version": DATASET_VERSION,
            "corpora": [corpus_to_dict(c) for c in corpora],
            "tasks": [
                _task_to_dict(self._tasks[pid]) for pid in sorted(pair_ids) if pid in self._tasks
            ],
            "records": annotations_to_dict(records)["annotations"],
            "final": [
                {"pair": pair.id, "edits": [edit_to_dict(e) for e in edits]}
                for pair, edits in self.final_dataset(corpus_id)
            ],
        }

    # -- disk helpers --------------------------------------------------------

    def _write_json(self, path: Path, obj: dict) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n", "utf-8")
        tmp.replace(path)

    def _write_task(self, task: WorkflowTask) -> None:
        self._write_json(self.root / "tasks" / f"{_fs_name(task.pair)}.json", _task_to_dict(task))

    def _write_record(self, record: AnnotationRecord) -> None:
        name = f"{record.stage.value}-{_fs_name(record.annotator)}-r{record.revision}.json"
        path = self.root / "records" / _fs_name(record.pair) / name
        if path.exists():
            raise RevisionConflictError(f"record file already exists: {path.name}")
        self._write_json(path, record_to_dict(record))
