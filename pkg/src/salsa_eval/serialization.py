"""JSON document schemas: corpora, edits, annotation records, weight schemes.

Parsing is shape validation only (types, required keys, unknown keys), with
JSON-path-precise error messages; domain rules live in ``validation``.
Serialization is canonical: optional fields are emitted only when set, so a
parse/serialize round trip is stable.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .errors import SchemaError
from .model import (
    Classification,
    Edit,
    Family,
    InformationChange,
    Operation,
    Polarity,
    ReorderLevel,
    SentencePair,
    SpanRange,
    Side,
    build_pair,
)

CORPUS_VERSION = 1
ANNOTATIONS_VERSION = 1
WEIGHTS_VERSION = 1
DATASET_VERSION = 1


def _expect(obj: Any, path: str, cls: type, what: str) -> Any:
    if not isinstance(obj, cls):
        raise SchemaError(path, f"expected {what}, got {type(obj).__name__}")
    return obj


def _get_str(obj: Mapping, key: str, path: str, required: bool = True, default: str = "") -> str:
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}", "missing required field")
        return default
    value = obj[key]
    if not isinstance(value, str):
        raise SchemaError(f"{path}.{key}", f"expected a string, got {type(value).__name__}")
    return value


def _get_int(obj: Mapping, key: str, path: str, required: bool = True, default: int = 0) -> int:
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}", "missing required field")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{path}.{key}", f"expected an integer, got {type(value).__name__}")
    return value


def _check_keys(obj: Mapping, allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(path, f"unknown field(s): {', '.join(sorted(unknown))}")


def _enum(cls, value: str, path: str):
    try:
        return cls(value)
    except ValueError:
        valid = ", ".join(m.value for m in cls)
        raise SchemaError(path, f"'{value}' is not one of: {valid}") from None


# ---------------------------------------------------------------------------
# Corpus documents: {"version"?, "id"?, "metadata"?, "pairs": [...]}

@dataclass(frozen=True)
class Corpus:
    id: str
    pairs: tuple[SentencePair, ...]
    metadata: Mapping[str, Any]


def corpus_content_id(pairs_obj: list) -> str:
    digest = hashlib.sha256(
        json.dumps(pairs_obj, sort_keys=True, ensure_ascii=False).encode("utf-8")
    ).hexdigest()
    return f"corpus-{digest[:12]}"


def parse_corpus(doc: Any) -> Corpus:
    _expect(doc, "", dict, "an object")
    _check_keys(doc, {"version", "id", "metadata", "pairs"}, "")
    raw_pairs = doc.get("pairs")
    _expect(raw_pairs, "pairs", list, "a list")
    pairs: list[SentencePair] = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_pairs):
        path = f"pairs[{i}]"
        _expect(raw, path, dict, "an object")
        _check_keys(raw, {"id", "system", "complex", "simplified", "metadata"}, path)
        pair_id = _get_str(raw, "id", path)
        if not pair_id:
            raise SchemaError(f"{path}.id", "pair id must be non-empty")
        if pair_id in seen:
            raise SchemaError(f"{path}.id", f"duplicate pair id '{pair_id}'")
        seen.add(pair_id)
        texts = {}
        for side in ("complex", "simplified"):
            side_obj = raw.get(side)
            _expect(side_obj, f"{path}.{side}", dict, "an object")
            text = _get_str(side_obj, "text", f"{path}.{side}")
            if not text or text.isspace():
                raise SchemaError(f"{path}.{side}.text", "expected non-empty text")
            texts[side] = text
        metadata = raw.get("metadata", {})
        _expect(metadata, f"{path}.metadata", dict, "an object")
        pairs.append(
            build_pair(
                pair_id,
                texts["complex"],
                texts["simplified"],
                system=_get_str(raw, "system", path, required=False),
                metadata=metadata,
            )
        )
    corpus_id = _get_str(doc, "id", "", required=False)
    if not corpus_id:
        corpus_id = corpus_content_id(raw_pairs)
    metadata = doc.get("metadata", {})
    _expect(metadata, "metadata", dict, "an object")
    return Corpus(id=corpus_id, pairs=tuple(pairs), metadata=dict(metadata))


def pair_to_dict(pair: SentencePair) -> dict:
    out: dict[str, Any] = {
        "id": pair.id,
        "system": pair.system,
        "complex": {"text": pair.complex.text},
        "simplified": {"text": pair.simplified.text},
    }
    if pair.metadata:
        out["metadata"] = dict(pair.metadata)
    return out


def corpus_to_dict(corpus: Corpus) -> dict:
    out: dict[str, Any] = {
        "version": CORPUS_VERSION,
        "id": corpus.id,
        "pairs": [pair_to_dict(p) for p in corpus.pairs],
    }
    if corpus.metadata:
        out["metadata"] = dict(corpus.metadata)
    return out


# ---------------------------------------------------------------------------
# Edits

def parse_span(obj: Any, path: str) -> SpanRange:
    _expect(obj, path, dict, "an object")
    _check_keys(obj, {"side", "start", "end"}, path)
    return SpanRange(
        side=_enum(Side, _get_str(obj, "side", path), f"{path}.side"),
        start=_get_int(obj, "start", path),
        end=_get_int(obj, "end", path),
    )


def parse_classification(obj: Any, path: str) -> Classification:
    _expect(obj, path, dict, "an object")
    _check_keys(obj, {"polarity", "quality_type", "error_types", "grammar_error", "rating"}, path)
    polarity = _enum(Polarity, _get_str(obj, "polarity", path), f"{path}.polarity")
    error_types_raw = obj.get("error_types", [])
    _expect(error_types_raw, f"{path}.error_types", list, "a list")
    error_types: list[str] = []
    for i, t in enumerate(error_types_raw):
        if not isinstance(t, str):
            raise SchemaError(f"{path}.error_types[{i}]", "expected a string")
        if t in error_types:
            raise SchemaError(f"{path}.error_types[{i}]", f"duplicate error type '{t}'")
        error_types.append(t)
    quality_type = obj.get("quality_type")
    if quality_type is not None and not isinstance(quality_type, str):
        raise SchemaError(f"{path}.quality_type", "expected a string or null")
    grammar = obj.get("grammar_error", False)
    if not isinstance(grammar, bool):
        raise SchemaError(f"{path}.grammar_error", "expected a boolean")
    rating = obj.get("rating")
    if rating is not None and (isinstance(rating, bool) or not isinstance(rating, int)):
        raise SchemaError(f"{path}.rating", "expected an integer or null")
    return Classification(
        polarity=polarity,
        quality_type=quality_type,
        error_types=tuple(error_types),
        grammar_error=grammar,
        rating=rating,
    )


def parse_edit(obj: Any, path: str = "edit") -> Edit:
    _expect(obj, path, dict, "an object")
    _check_keys(
        obj,
        {
            "id",
            "operation",
            "spans",
            "reorder_level",
            "information_change",
            "constituents",
            "structure_subtype",
            "classification",
        },
        path,
    )
    edit_id = _get_str(obj, "id", path)
    if not edit_id:
        raise SchemaError(f"{path}.id", "edit id must be non-empty")
    spans_raw = obj.get("spans", [])
    _expect(spans_raw, f"{path}.spans", list, "a list")
    spans = tuple(parse_span(s, f"{path}.spans[{i}]") for i, s in enumerate(spans_raw))
    constituents_raw = obj.get("constituents", [])
    _expect(constituents_raw, f"{path}.constituents", list, "a list")
    constituents = tuple(
        parse_edit(c, f"{path}.constituents[{i}]") for i, c in enumerate(constituents_raw)
    )
    reorder_level = obj.get("reorder_level")
    if reorder_level is not None:
        reorder_level = _enum(ReorderLevel, reorder_level, f"{path}.reorder_level")
    information_change = obj.get("information_change")
    if information_change is not None:
        information_change = _enum(
            InformationChange, information_change, f"{path}.information_change"
        )
    structure_subtype = obj.get("structure_subtype")
    if structure_subtype is not None and not isinstance(structure_subtype, str):
        raise SchemaError(f"{path}.structure_subtype", "expected a string or null")
    classification = obj.get("classification")
    if classification is not None:
        classification = parse_classification(classification, f"{path}.classification")
    return Edit(
        id=edit_id,
        operation=_enum(Operation, _get_str(obj, "operation", path), f"{path}.operation"),
        spans=spans,
        reorder_level=reorder_level,
        information_change=information_change,
        constituents=constituents,
        structure_subtype=structure_subtype,
        classification=classification,
    )


def classification_to_dict(cls: Classification) -> dict:
    out: dict[str, Any] = {"polarity": cls.polarity.value}
    if cls.quality_type is not None:
        out["quality_type"] = cls.quality_type
    if cls.error_types:
        out["error_types"] = list(cls.error_types)
    if cls.grammar_error:
        out["grammar_error"] = True
    if cls.rating is not None:
        out["rating"] = cls.rating
    return out


def edit_to_dict(edit: Edit) -> dict:
    out: dict[str, Any] = {
        "id": edit.id,
        "operation": edit.operation.value,
        "spans": [{"side": s.side.value, "start": s.start, "end": s.end} for s in edit.spans],
    }
    if edit.reorder_level is not None:
        out["reorder_level"] = edit.reorder_level.value
    if edit.information_change is not None:
        out["information_change"] = edit.information_change.value
    if edit.constituents:
        out["constituents"] = [edit_to_dict(c) for c in edit.constituents]
    if edit.structure_subtype is not None:
        out["structure_subtype"] = edit.structure_subtype
    if edit.classification is not None:
        out["classification"] = classification_to_dict(edit.classification)
    return out


# ---------------------------------------------------------------------------
# Standalone annotation documents:
# {"version"?, "annotations": [{"pair", "annotator"?, "stage"?, "revision"?,
#   "submitted_at"?, "edits"? | "classifications"?}]}

def parse_annotations(doc: Any):
    """Parse a standalone annotations document into AnnotationRecord objects."""
    from .workflow import AnnotationRecord, ClassificationEntry, Stage

    _expect(doc, "", dict, "an object")
    _check_keys(doc, {"version", "annotations"}, "")
    raw_entries = doc.get("annotations")
    _expect(raw_entries, "annotations", list, "a list")
    records = []
    for i, raw in enumerate(raw_entries):
        path = f"annotations[{i}]"
        _expect(raw, path, dict, "an object")
        _check_keys(
            raw,
            {"pair", "annotator", "stage", "revision", "submitted_at", "edits", "classifications"},
            path,
        )
        if "edits" in raw and "classifications" in raw:
            raise SchemaError(path, "provide either 'edits' or 'classifications', not both")
        edits: tuple[Edit, ...] = ()
        entries: tuple = ()
        if "classifications" in raw:
            raw_cls = _expect(raw["classifications"], f"{path}.classifications", list, "a list")
            entries = tuple(
                parse_classification_entry(c, f"{path}.classifications[{j}]")
                for j, c in enumerate(raw_cls)
            )
            default_stage = Stage.CLASSIFICATION.value
        else:
            raw_edits = _expect(raw.get("edits", []), f"{path}.edits", list, "a list")
            edits = tuple(parse_edit(e, f"{path}.edits[{j}]") for j, e in enumerate(raw_edits))
            default_stage = Stage.SELECTION.value
        stage = _enum(Stage, raw.get("stage", default_stage), f"{path}.stage")
        records.append(
            AnnotationRecord(
                annotator=_get_str(raw, "annotator", path, required=False),
                pair=_get_str(raw, "pair", path),
                stage=stage,
                revision=_get_int(raw, "revision", path, required=False, default=1),
                submitted_at=_get_str(raw, "submitted_at", path, required=False),
                edits=edits,
                classifications=entries,
            )
        )
    return records


def parse_classification_entry(obj: Any, path: str):
    from .workflow import ClassificationEntry

    _expect(obj, path, dict, "an object")
    _check_keys(obj, {"edit_id", "information_change", "classification"}, path)
    information_change = obj.get("information_change")
    if information_change is not None:
        information_change = _enum(
            InformationChange, information_change, f"{path}.information_change"
        )
    if "classification" not in obj:
        raise SchemaError(f"{path}.classification", "missing required field")
    return ClassificationEntry(
        edit_id=_get_str(obj, "edit_id", path),
        information_change=information_change,
        classification=parse_classification(obj["classification"], f"{path}.classification"),
    )


def classification_entry_to_dict(entry) -> dict:
    out: dict[str, Any] = {
        "edit_id": entry.edit_id,
        "classification": classification_to_dict(entry.classification),
    }
    if entry.information_change is not None:
        out["information_change"] = entry.information_change.value
    return out


def record_to_dict(record) -> dict:
    out: dict[str, Any] = {
        "pair": record.pair,
        "annotator": record.annotator,
        "stage": record.stage.value,
        "revision": record.revision,
    }
    if record.submitted_at:
        out["submitted_at"] = record.submitted_at
    if record.classifications:
        out["classifications"] = [classification_entry_to_dict(e) for e in record.classifications]
    else:
        out["edits"] = [edit_to_dict(e) for e in record.edits]
    return out


def annotations_to_dict(records: Sequence) -> dict:
    return {
        "version": ANNOTATIONS_VERSION,
        "annotations": [record_to_dict(r) for r in records],
    }


# ---------------------------------------------------------------------------
# Weight schemes

WEIGHT_PROVENANCES = ("default", "fitted", "manual")


def weight_key_name(family: Family, polarity: Polarity) -> str:
    return f"{family.value}.{polarity.value}"


def parse_weight_scheme(doc: Any):
    from .scoring import WEIGHT_KEYS, WeightScheme

    _expect(doc, "", dict, "an object")
    _check_keys(doc, {"version", "provenance", "weights", "diagnostics"}, "")
    provenance = doc.get("provenance", "manual")
    if provenance not in WEIGHT_PROVENANCES:
        raise SchemaError("provenance", f"expected one of: {', '.join(WEIGHT_PROVENANCES)}")
    raw = doc.get("weights")
    _expect(raw, "weights", dict, "an object")
    expected = {weight_key_name(f, p) for f, p in WEIGHT_KEYS}
    if set(raw) != expected:
        missing = sorted(expected - set(raw))
        extra = sorted(set(raw) - expected)
        detail = []
        if missing:
            detail.append(f"missing: {', '.join(missing)}")
        if extra:
            detail.append(f"unknown: {', '.join(extra)}")
        raise SchemaError("weights", "; ".join(detail))
    weights: dict[tuple[Family, Polarity], float] = {}
    for family, polarity in WEIGHT_KEYS:
        key = weight_key_name(family, polarity)
        value = raw[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise SchemaError(f"weights.{key}", "expected a finite number")
        weights[(family, polarity)] = float(value)
    sign_problems = [
        weight_key_name(f, p)
        for (f, p), v in weights.items()
        if (p is Polarity.QUALITY and v < 0) or (p is Polarity.ERROR and v > 0)
    ]
    if sign_problems:
        msg = (
            "weight sign convention violated (quality >= 0, error <= 0) for: "
            + ", ".join(sorted(sign_problems))
        )
        if provenance == "default":
            raise SchemaError("weights", msg)
        warnings.warn(msg, stacklevel=2)
    return WeightScheme(weights=weights, provenance=provenance)


def weight_scheme_to_dict(scheme, diagnostics: dict | None = None) -> dict:
    out: dict[str, Any] = {
        "version": WEIGHTS_VERSION,
        "provenance": scheme.provenance,
        "weights": {
            weight_key_name(f, p): scheme.weights[(f, p)]
            for f, p in sorted(scheme.weights, key=lambda k: (k[0].value, k[1].value))
        },
    }
    if diagnostics:
        out["diagnostics"] = diagnostics
    return out


# ---------------------------------------------------------------------------
# Canonical JSON emission (stable key order, 9 significant digit floats)

def round_floats(obj: Any) -> Any:
    if isinstance(obj, float):
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def canonical_json(obj: Any, indent: int | None = 2) -> str:
    return json.dumps(round_floats(obj), sort_keys=True, ensure_ascii=False, indent=indent) + "\n"
