"""Pydantic request/response models for the HTTP service.

These mirror the JSON wire formats in ``serialization``; pydantic checks the
shape at the boundary, then the payload is handed to the same parsers the CLI
uses so domain rules live in exactly one place.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class TextBody(BaseModel):
    text: str


class PairBody(BaseModel):
    id: str
    system: str = ""
    complex: TextBody
    simplified: TextBody
    metadata: dict[str, Any] = Field(default_factory=dict)


class CorpusBody(BaseModel):
    version: int = 1
    id: Optional[str] = None
    metadata: dict[str, Any] = Field(default_factory=dict)
    pairs: list[PairBody]


class SpanBody(BaseModel):
    side: Literal["complex", "simplified"]
    start: int
    end: int


class ClassificationBody(BaseModel):
    polarity: Literal["quality", "error", "trivial"]
    quality_type: Optional[str] = None
    error_types: list[str] = Field(default_factory=list)
    grammar_error: bool = False
    rating: Optional[int] = None


class EditBody(BaseModel):
    id: str
    operation: Literal["insertion", "deletion", "substitution", "reorder", "split", "structure"]
    spans: list[SpanBody] = Field(default_factory=list)
    reorder_level: Optional[Literal["word", "component"]] = None
    information_change: Optional[Literal["less", "same", "more", "different"]] = None
    constituents: list["EditBody"] = Field(default_factory=list)
    structure_subtype: Optional[str] = None
    classification: Optional[ClassificationBody] = None


class ClassificationEntryBody(BaseModel):
    edit_id: str
    information_change: Optional[Literal["less", "same", "more", "different"]] = None
    classification: ClassificationBody


class EditSubmission(BaseModel):
    revision: int = 1
    submitted_at: str = ""
    edits: list[EditBody] = Field(default_factory=list)


class ClassificationSubmission(BaseModel):
    revision: int = 1
    submitted_at: str = ""
    classifications: list[ClassificationEntryBody] = Field(default_factory=list)


class AssignmentRequest(BaseModel):
    stage: Literal["selection", "adjudication", "classification"]
    annotators: list[str]


class TokenView(BaseModel):
    start: int
    end: int
    surface: str


class SentenceView(BaseModel):
    text: str
    tokens: list[TokenView]


class PairView(BaseModel):
    id: str
    system: str
    complex: SentenceView
    simplified: SentenceView
    metadata: dict[str, Any] = Field(default_factory=dict)


class StageView(BaseModel):
    assigned: list[str] = Field(default_factory=list)
    received: list[str] = Field(default_factory=list)


class TaskView(BaseModel):
    pair: str
    corpus: str
    state: str
    selection: StageView
    adjudicator: Optional[str] = None
    classification: StageView
    pair_data: PairView
    split_shells: list[dict] = Field(default_factory=list)
    selections: Optional[dict[str, list[dict]]] = None
    adjudicated_edits: Optional[list[dict]] = None


class TaskSummary(BaseModel):
    pair: str
    corpus: str
    state: str
    system: str


class SubmitResponse(BaseModel):
    task: TaskView
    warnings: list[str] = Field(default_factory=list)


class CorpusSummary(BaseModel):
    id: str
    pairs: int
    systems: list[str]


class ImportResponse(BaseModel):
    id: str
    pairs: int


class AgreementRow(BaseModel):
    cls: str = Field(alias="class")
    alpha: Optional[float] = None
    pct_two: Optional[float] = None
    pct_three: Optional[float] = None
    units: int = 0

    model_config = {"populate_by_name": True}


class AgreementReport(BaseModel):
    partial: bool
    stage: str
    expand_composites: bool
    classes: list[AgreementRow]


class ErrorAgreementRow(BaseModel):
    type: str
    frequency: float
    alpha: Optional[float] = None
    pairs: int


class ScoreRow(BaseModel):
    pair: str
    annotator: str
    system: str
    total: float
    n_edits: int
    conceptual: float
    syntactic: float
    lexical: float
    quality: float
    error: float


class ScoresReport(BaseModel):
    partial: bool
    weights_provenance: str
    rows: list[ScoreRow]
