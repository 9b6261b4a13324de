"""Structural validation of edits against a sentence pair and a typology.

Violations are returned, not raised: callers (service, CLI, store) decide
whether a non-empty list is fatal. Each violation carries a stable machine
code plus the offending edit id so a UI can highlight the exact span layer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    COMPOSITE_OPERATIONS,
    Edit,
    Operation,
    Polarity,
    SentencePair,
    Side,
    SpanRange,
)
from .typology import Typology


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    edit_id: str | None = None

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "edit_id": self.edit_id}


def _check_span(span: SpanRange, pair: SentencePair, edit: Edit, out: list[Violation]) -> None:
    sentence = pair.sentence(span.side)
    if not (0 <= span.start < span.end <= len(sentence.text)):
        out.append(
            Violation(
                "span.bounds",
                f"span {span.side.value}[{span.start},{span.end}) out of bounds for "
                f"text of length {len(sentence.text)}",
                edit.id,
            )
        )
        return
    if span.start not in sentence.token_starts() or span.end not in sentence.token_ends():
        out.append(
            Violation(
                "span.alignment",
                f"span {span.side.value}[{span.start},{span.end}) is not aligned to token boundaries",
                edit.id,
            )
        )


def _check_sides(edit: Edit, out: list[Violation]) -> None:
    n_complex = len(edit.spans_on(Side.COMPLEX))
    n_simplified = len(edit.spans_on(Side.SIMPLIFIED))
    op = edit.operation
    if op is Operation.INSERTION:
        if n_complex:
            out.append(Violation("operation.sides", "insertion must not touch the complex side", edit.id))
        if not n_simplified:
            out.append(Violation("operation.sides", "insertion requires a simplified-side span", edit.id))
    elif op is Operation.DELETION:
        if n_simplified:
            out.append(Violation("operation.sides", "deletion must not touch the simplified side", edit.id))
        if not n_complex:
            out.append(Violation("operation.sides", "deletion requires a complex-side span", edit.id))
    elif op in (Operation.SUBSTITUTION, Operation.REORDER):
        if not n_complex or not n_simplified:
            out.append(
                Violation(
                    "operation.sides",
                    f"{op.value} requires at least one span on each side",
                    edit.id,
                )
            )


def _check_composite(edit: Edit, pair: SentencePair, typology: Typology, out: list[Violation]) -> None:
    if not edit.constituents:
        out.append(Violation("composite.constituents", "composite edit requires constituents", edit.id))
        return
    for c in edit.constituents:
        if c.operation in COMPOSITE_OPERATIONS:
            out.append(
                Violation(
                    "composite.operation",
                    f"constituent '{c.id}' must be a single-operation edit, not {c.operation.value}",
                    edit.id,
                )
            )
        if c.classification is not None:
            out.append(
                Violation(
                    "composite.constituent_classified",
                    f"constituent '{c.id}' carries its own classification; the composite is the rated unit",
                    edit.id,
                )
            )
        out.extend(_validate_structure(c, pair, typology))
    for side in Side:
        own = tuple(
            _merged(edit.spans_on(side))
        )
        union = edit.coverage(side)
        if own != union:
            out.append(
                Violation(
                    "composite.spans",
                    f"composite spans on the {side.value} side do not equal the union of "
                    f"constituent spans",
                    edit.id,
                )
            )


def _merged(spans: tuple[SpanRange, ...]) -> tuple[tuple[int, int], ...]:
    from .model import merge_ranges

    return merge_ranges((s.start, s.end) for s in spans)


def _validate_structure(edit: Edit, pair: SentencePair, typology: Typology) -> list[Violation]:
    out: list[Violation] = []
    for span in edit.spans:
        _check_span(span, pair, edit, out)
    same_side = [(a, b) for i, a in enumerate(edit.spans) for b in edit.spans[i + 1 :] if a.overlaps(b)]
    for a, b in same_side:
        out.append(
            Violation(
                "span.overlap",
                f"spans [{a.start},{a.end}) and [{b.start},{b.end}) of the same edit overlap "
                f"on the {a.side.value} side",
                edit.id,
            )
        )
    if (edit.reorder_level is not None) != (edit.operation is Operation.REORDER):
        out.append(
            Violation(
                "reorder.level",
                "reorder_level must be present exactly when the operation is reorder",
                edit.id,
            )
        )
    if edit.operation in COMPOSITE_OPERATIONS:
        _check_composite(edit, pair, typology, out)
    else:
        _check_sides(edit, out)
        if edit.constituents:
            out.append(
                Violation(
                    "constituents.unexpected",
                    "only split and structure edits may own constituents",
                    edit.id,
                )
            )
    if edit.structure_subtype is not None and edit.operation is not Operation.STRUCTURE:
        out.append(
            Violation(
                "structure.subtype",
                "structure_subtype applies only to structure edits",
                edit.id,
            )
        )
    return out


def _validate_classification(edit: Edit, typology: Typology) -> list[Violation]:
    out: list[Violation] = []
    cls = edit.classification
    if cls is None:
        return out
    if cls.polarity is Polarity.QUALITY:
        if not cls.quality_type or cls.error_types:
            out.append(
                Violation(
                    "classification.types",
                    "quality polarity requires exactly one quality type and no error types",
                    edit.id,
                )
            )
    elif cls.polarity is Polarity.ERROR:
        if cls.quality_type or not cls.error_types:
            out.append(
                Violation(
                    "classification.types",
                    "error polarity requires a non-empty error type set and no quality type",
                    edit.id,
                )
            )
    else:
        if cls.quality_type or cls.error_types:
            out.append(
                Violation(
                    "classification.types",
                    "trivial polarity carries no type ids",
                    edit.id,
                )
            )
        if cls.rating is not None:
            out.append(
                Violation("classification.rating", "trivial edits carry no rating", edit.id)
            )
    if cls.polarity is not Polarity.TRIVIAL:
        if cls.rating not in (1, 2, 3):
            out.append(
                Violation(
                    "classification.rating",
                    f"rating must be 1, 2 or 3 (got {cls.rating!r})",
                    edit.id,
                )
            )
    if cls.polarity is Polarity.TRIVIAL:
        trivial_defs = [
            t
            for t in typology.of_polarity(Polarity.TRIVIAL)
            if edit.operation in t.operations
            and (edit.information_change is None or edit.information_change in t.information_changes)
        ]
        if not trivial_defs:
            out.append(
                Violation(
                    "classification.operation",
                    f"no trivial type permits a {edit.operation.value} edit"
                    + (
                        f" with {edit.information_change.value} information"
                        if edit.information_change
                        else ""
                    ),
                    edit.id,
                )
            )
    for type_id in cls.type_ids():
        type_def = typology.get(type_id)
        if type_def is None:
            out.append(Violation("classification.unknown_type", f"unknown edit type '{type_id}'", edit.id))
            continue
        expected = Polarity.QUALITY if type_id == cls.quality_type else Polarity.ERROR
        if type_def.polarity is not expected:
            out.append(
                Violation(
                    "classification.polarity",
                    f"type '{type_id}' has polarity {type_def.polarity.value}, "
                    f"which does not fit its position in this classification",
                    edit.id,
                )
            )
        if edit.operation not in type_def.operations:
            out.append(
                Violation(
                    "classification.operation",
                    f"type '{type_id}' cannot be introduced by a {edit.operation.value} edit",
                    edit.id,
                )
            )
        if edit.information_change is None:
            out.append(
                Violation(
                    "classification.information_missing",
                    "classified quality/error edits must state their information change",
                    edit.id,
                )
            )
        elif edit.information_change not in type_def.information_changes:
            out.append(
                Violation(
                    "classification.information",
                    f"type '{type_id}' does not permit {edit.information_change.value} information",
                    edit.id,
                )
            )
    return out


def validate_edit(edit: Edit, pair: SentencePair, typology: Typology) -> list[Violation]:
    """All rule violations for one edit; an empty list means the edit is valid.

    Covers span bounds/alignment, operation-side constraints, composite
    integrity, and, when a classification is present, whether the
    (operation, information change, type) combination is permitted.
    """
    out = _validate_structure(edit, pair, typology)
    out.extend(_validate_classification(edit, typology))
    return out


def validate_edits(edits, pair: SentencePair, typology: Typology) -> list[Violation]:
    """Validate a submission's edit list, including id uniqueness."""
    out: list[Violation] = []
    seen: set[str] = set()
    for edit in edits:
        for sub in edit.walk():
            if sub.id in seen:
                out.append(Violation("edit.duplicate_id", f"duplicate edit id '{sub.id}'", sub.id))
            seen.add(sub.id)
        out.extend(validate_edit(edit, pair, typology))
    return out
