"""HTTP interface over the store: corpora, tasks, submissions, reports, exports.

Every mutating endpoint is a thin adapter over one store call, so responses
match direct store results on identical inputs. The annotator identity is a
pseudonymous id carried in the ``X-Annotator`` header.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Header, Query
from fastapi.responses import JSONResponse, PlainTextResponse

from ..errors import (
    AssignmentError,
    EditValidationError,
    NotAssignedError,
    NotFoundError,
    RevisionConflictError,
    SalsaError,
    SchemaError,
    UnknownEditError,
    WrongStageError,
)
from ..model import detect_split_candidates
from ..qe import export_records
from ..reports import agreement_report, error_agreement_report, score_report
from ..serialization import (
    edit_to_dict,
    parse_annotations,
    round_floats,
)
from ..store import Store
from ..typology import typology_to_dict
from ..workflow import Stage, TaskState, WorkflowTask
from . import schemas

_ERROR_STATUS = {
    EditValidationError: 400,
    SchemaError: 400,
    RevisionConflictError: 409,
    WrongStageError: 409,
    UnknownEditError: 409,
    NotAssignedError: 403,
    AssignmentError: 409,
    NotFoundError: 404,
}


def _status_for(exc: SalsaError) -> int:
    for cls, status in _ERROR_STATUS.items():
        if isinstance(exc, cls):
            return status
    return 400


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="salsa-eval", version="0.1.0")

    @app.exception_handler(SalsaError)
    async def salsa_error_handler(_, exc: SalsaError):
        body = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, EditValidationError):
            body["violations"] = [v.to_dict() for v in exc.violations]
        return JSONResponse(status_code=_status_for(exc), content=body)

    def task_view(task: WorkflowTask) -> dict:
        pair = store.pair(task.pair)
        view: dict = {
            "pair": task.pair,
            "corpus": store.corpus_of(task.pair),
            "state": task.state.value,
            "selection": {
                "assigned": list(task.selection_annotators),
                "received": list(task.selection_received),
            },
            "adjudicator": task.adjudicator,
            "classification": {
                "assigned": list(task.classification_annotators),
                "received": list(task.classification_received),
            },
            "pair_data": {
                "id": pair.id,
                "system": pair.system,
                "metadata": dict(pair.metadata),
                "complex": {
                    "text": pair.complex.text,
                    "tokens": [
                        {"start": t.start, "end": t.end, "surface": t.surface}
                        for t in pair.complex.tokens
                    ],
                },
                "simplified": {
                    "text": pair.simplified.text,
                    "tokens": [
                        {"start": t.start, "end": t.end, "surface": t.surface}
                        for t in pair.simplified.tokens
                    ],
                },
            },
            "split_shells": [],
            "selections": None,
            "adjudicated_edits": None,
        }
        if task.state is TaskState.SELECTING:
            view["split_shells"] = [edit_to_dict(e) for e in detect_split_candidates(pair)]
        if task.state in (TaskState.AWAITING_ADJUDICATION, TaskState.ADJUDICATING):
            view["selections"] = {
                record.annotator: [edit_to_dict(e) for e in record.edits]
                for record in store.latest_records(task.pair, Stage.SELECTION)
            }
        if task.adjudicated_edits is not None:
            view["adjudicated_edits"] = [edit_to_dict(e) for e in task.adjudicated_edits]
        return view

    @app.get("/corpora", response_model=list[schemas.CorpusSummary])
    def list_corpora():
        return [
            {
                "id": corpus.id,
                "pairs": len(corpus.pairs),
                "systems": sorted({p.system for p in corpus.pairs}),
            }
            for corpus in store.corpora()
        ]

    @app.post("/corpora", response_model=schemas.ImportResponse, status_code=201)
    def import_corpus(body: schemas.CorpusBody):
        document = body.model_dump(exclude_none=True)
        if not document.get("metadata"):
            document.pop("metadata", None)
        corpus_id = store.import_corpus(document)
        return {"id": corpus_id, "pairs": len(store.corpus(corpus_id).pairs)}

    @app.get("/typology")
    def get_typology():
        return typology_to_dict(store.typology)

    @app.get("/tasks", response_model=list[schemas.TaskSummary])
    def list_tasks(
        annotator: str | None = Query(default=None),
        state: str | None = Query(default=None),
    ):
        state_filter = TaskState(state) if state else None
        return [
            {
                "pair": task.pair,
                "corpus": store.corpus_of(task.pair),
                "state": task.state.value,
                "system": store.pair(task.pair).system,
            }
            for task in store.tasks(annotator=annotator, state=state_filter)
        ]

    @app.get("/tasks/{pair_id}", response_model=schemas.TaskView)
    def get_task(pair_id: str):
        return task_view(store.task(pair_id))

    @app.post("/tasks/{pair_id}/assignment", response_model=schemas.TaskView)
    def assign(pair_id: str, body: schemas.AssignmentRequest):
        task = store.assign(pair_id, Stage(body.stage), body.annotators)
        return task_view(task)

    def _submit(pair_id: str, stage: Stage, annotator: str, payload: dict) -> dict:
        record_obj = {"pair": pair_id, "annotator": annotator, "stage": stage.value, **payload}
        (record,) = parse_annotations({"annotations": [record_obj]})
        task, warnings = store.submit(record)
        return {"task": task_view(task), "warnings": warnings}

    def _edit_payload(body: schemas.EditSubmission) -> dict:
        payload = {
            "revision": body.revision,
            "edits": [e.model_dump(exclude_none=True, exclude_defaults=True) for e in body.edits],
        }
        if body.submitted_at:
            payload["submitted_at"] = body.submitted_at
        return payload

    @app.post("/tasks/{pair_id}/selection", response_model=schemas.SubmitResponse)
    def submit_selection(
        pair_id: str,
        body: schemas.EditSubmission,
        annotator: str = Header(alias="X-Annotator"),
    ):
        return _submit(pair_id, Stage.SELECTION, annotator, _edit_payload(body))

    @app.post("/tasks/{pair_id}/adjudication", response_model=schemas.SubmitResponse)
    def submit_adjudication(
        pair_id: str,
        body: schemas.EditSubmission,
        annotator: str = Header(alias="X-Annotator"),
    ):
        return _submit(pair_id, Stage.ADJUDICATION, annotator, _edit_payload(body))

    @app.post("/tasks/{pair_id}/classification", response_model=schemas.SubmitResponse)
    def submit_classification(
        pair_id: str,
        body: schemas.ClassificationSubmission,
        annotator: str = Header(alias="X-Annotator"),
    ):
        payload = {
            "revision": body.revision,
            "classifications": [c.model_dump(exclude_none=True) for c in body.classifications],
        }
        if body.submitted_at:
            payload["submitted_at"] = body.submitted_at
        return _submit(pair_id, Stage.CLASSIFICATION, annotator, payload)

    @app.get("/reports/agreement")
    def report_agreement(
        corpus: str | None = Query(default=None),
        stage: str = Query(default="selection"),
        expand_composites: bool = Query(default=False),
        classes: str | None = Query(default=None),
        errors: bool = Query(default=False),
    ):
        pairs = store.pairs(corpus)
        stage_enum = Stage(stage)
        records = []
        for pair in pairs:
            records.extend(store.latest_records(pair.id, stage_enum))
        if errors:
            rows = error_agreement_report(records, pairs, store.typology)
            return {"partial": store.has_incomplete(corpus), "stage": stage, "types": round_floats(rows)}
        class_list = classes.split(",") if classes else None
        rows = agreement_report(records, pairs, class_list, expand_composites)
        return {
            "partial": store.has_incomplete(corpus),
            "stage": stage,
            "expand_composites": expand_composites,
            "classes": round_floats(rows),
        }

    @app.get("/reports/scores", response_model=schemas.ScoresReport)
    def report_scores(corpus: str | None = Query(default=None)):
        weights = store.weight_scheme()
        dataset = [
            (pair, edits, "consensus") for pair, edits in store.final_dataset(corpus)
        ]
        rows = score_report(dataset, weights, store.typology)
        return {
            "partial": store.has_incomplete(corpus),
            "weights_provenance": weights.provenance,
            "rows": round_floats(rows),
        }

    @app.get("/export/qe")
    def export_qe(
        corpus: str | None = Query(default=None),
        include_complex: bool = Query(default=False),
    ):
        dataset = store.final_dataset(corpus)
        lines = [
            json.dumps(round_floats(record), sort_keys=True, ensure_ascii=False)
            for record in export_records(
                dataset, store.weight_scheme(), store.typology, include_complex
            )
        ]
        return PlainTextResponse("\n".join(lines) + "\n", media_type="application/x-ndjson")

    @app.get("/export/dataset")
    def export_dataset(corpus: str | None = Query(default=None)):
        return store.export_dataset(corpus)

    return app


def serve(store_dir: str, host: str = "127.0.0.1", port: int = 8040) -> None:
    """Run the service until interrupted; refuses to start on a corrupt store."""
    import uvicorn

    app = create_app(Store(store_dir))
    uvicorn.run(app, host=host, port=port, log_level="info")
