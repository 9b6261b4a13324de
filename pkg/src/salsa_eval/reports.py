"""Report builders shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Sequence

from .agreement import (
    EditClass,
    build_matrix,
    error_presence_agreement,
    krippendorff_alpha,
    pairwise_agreement,
)
from .errors import UndefinedAgreementError, UndefinedAlphaError
from .model import Edit, Operation, SentencePair
from .scoring import WeightScheme, sentence_score
from .typology import Typology, default_typology
from .workflow import AnnotationRecord

DEFAULT_CLASSES = tuple(op.value for op in Operation)


def agreement_report(
    records: Sequence[AnnotationRecord],
    pairs: Sequence[SentencePair],
    classes: Sequence[str] | None = None,
    expand_composites: bool = False,
) -> list[dict]:
    """One row per edit class: alpha plus the two/three-annotator agreement rates."""
    rows = []
    for spec in classes or DEFAULT_CLASSES:
        edit_class = EditClass.parse(spec)
        matrix = build_matrix(records, pairs, edit_class, expand_composites)
        try:
            alpha = krippendorff_alpha(matrix)
        except UndefinedAlphaError:
            alpha = None
        try:
            pairwise = pairwise_agreement(matrix)
            pct_two: float | None = pairwise.pct_at_least_two
            pct_three: float | None = pairwise.pct_all
            qualifying = pairwise.qualifying_units
        except UndefinedAgreementError:
            pct_two = pct_three = None
            qualifying = 0
        rows.append(
            {
                "class": edit_class.label,
                "alpha": alpha,
                "pct_two": pct_two,
                "pct_three": pct_three,
                "units": qualifying,
            }
        )
    return rows


def error_agreement_report(
    records: Sequence[AnnotationRecord],
    pairs: Sequence[SentencePair],
    typology: Typology | None = None,
) -> list[dict]:
    stats = error_presence_agreement(records, pairs, typology)
    return [
        {
            "type": type_id,
            "frequency": stat.frequency,
            "alpha": stat.alpha,
            "pairs": stat.pairs,
        }
        for type_id, stat in sorted(stats.items())
    ]


def score_report(
    dataset: Sequence[tuple[SentencePair, Sequence[Edit], str]],
    weights: WeightScheme,
    typology: Typology | None = None,
    include_per_edit: bool = False,
) -> list[dict]:
    """One row per (pair, annotator) with the sentence score and sub-scores."""
    typology = typology or default_typology()
    rows = []
    for pair, edits, annotator in dataset:
        breakdown = sentence_score(pair, edits, weights, typology)
        row: dict = {
            "pair": pair.id,
            "annotator": annotator,
            "system": pair.system,
            "total": breakdown.total,
            "n_edits": len(edits),
        }
        row.update({f.value: v for f, v in breakdown.by_family.items()})
        row.update({p.value: v for p, v in breakdown.by_polarity.items()})
        if include_per_edit:
            row["per_edit"] = breakdown.to_dict()["per_edit"]
        rows.append(row)
    rows.sort(key=lambda r: (r["pair"], r["annotator"]))
    return rows
