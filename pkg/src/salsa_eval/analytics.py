"""Corpus- and system-level descriptive statistics over classified datasets.

All aggregates use population standard deviation / variance and are
deterministic regardless of input record order. A dataset here is a sequence
of (pair, classified edits) items.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Sequence

from .errors import InvalidInputError
from .model import (
    Edit,
    Operation,
    Polarity,
    SentencePair,
    SINGLE_OPERATIONS,
    Side,
    tokens_covered,
)
from .scoring import WeightScheme, sentence_score
from .typology import Typology, default_typology

Dataset = Sequence[tuple[SentencePair, Sequence[Edit]]]

DEFAULT_LENGTH_BUCKETS = (0, 10, 20, 30, 40)


def _mean_sd(values: Sequence[float]) -> tuple[float, float]:
    if not values:
        return 0.0, 0.0
    mean = sum(values) / len(values)
    variance = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(variance)


def _type_key(edit: Edit) -> str | None:
    cls = edit.classification
    if cls is None:
        return None
    if cls.polarity is Polarity.TRIVIAL:
        if edit.operation is Operation.INSERTION:
            return "trivial_insertion"
        if edit.operation is Operation.DELETION:
            return "trivial_deletion"
        return f"trivial_{edit.operation.value}"
    ids = cls.type_ids()
    return ids[0] if ids else None


def edit_size_stats(dataset: Dataset) -> dict:
    """Span size statistics (tokens and characters) per edit type, per side."""
    sizes: dict[str, dict[Side, list[tuple[int, int]]]] = defaultdict(
        lambda: {Side.COMPLEX: [], Side.SIMPLIFIED: []}
    )
    for pair, edits in dataset:
        for edit in edits:
            key = _type_key(edit)
            if key is None:
                continue
            complex_idx, simplified_idx = tokens_covered(edit, pair)
            sizes[key][Side.COMPLEX].append((len(complex_idx), edit.span_chars(Side.COMPLEX)))
            sizes[key][Side.SIMPLIFIED].append(
                (len(simplified_idx), edit.span_chars(Side.SIMPLIFIED))
            )
    report: dict = {}
    for key in sorted(sizes):
        per_side = {}
        count = 0
        for side in (Side.COMPLEX, Side.SIMPLIFIED):
            rows = sizes[key][side]
            count = len(rows)
            mean_tokens, sd_tokens = _mean_sd([t for t, _ in rows])
            mean_chars, sd_chars = _mean_sd([c for _, c in rows])
            per_side[side.value] = {
                "mean_tokens": mean_tokens,
                "sd_tokens": sd_tokens,
                "mean_chars": mean_chars,
                "sd_chars": sd_chars,
            }
        report[key] = {"count": count, "sides": per_side}
    return report


def split_frequency(dataset: Dataset, length_buckets: Sequence[int] = DEFAULT_LENGTH_BUCKETS) -> dict:
    """Proportion of pairs containing a split edit, bucketed by input token count."""
    edges = list(length_buckets)
    if not edges or any(lo >= hi for lo, hi in zip(edges, edges[1:])):
        raise InvalidInputError("length bucket edges must be strictly increasing")
    buckets = [
        {"min": lo, "max": hi, "pairs": 0, "with_split": 0}
        for lo, hi in zip(edges, list(edges[1:]) + [None])
    ]
    total_pairs = 0
    total_split = 0
    for pair, edits in dataset:
        length = len(pair.complex.tokens)
        has_split = any(e.operation is Operation.SPLIT for e in edits)
        total_pairs += 1
        total_split += has_split
        for bucket in buckets:
            if length >= bucket["min"] and (bucket["max"] is None or length < bucket["max"]):
                bucket["pairs"] += 1
                bucket["with_split"] += has_split
                break
    for bucket in buckets:
        bucket["proportion"] = bucket["with_split"] / bucket["pairs"] if bucket["pairs"] else 0.0
    return {
        "buckets": buckets,
        "overall": total_split / total_pairs if total_pairs else 0.0,
        "pairs": total_pairs,
    }


def composite_breakdown(dataset: Dataset) -> dict:
    """Constituent-token makeup of split and structure edits, as percentages."""
    token_counts: dict[Operation, dict[Operation, int]] = {
        Operation.SPLIT: {op: 0 for op in SINGLE_OPERATIONS},
        Operation.STRUCTURE: {op: 0 for op in SINGLE_OPERATIONS},
    }
    excluded = 0
    for pair, edits in dataset:
        for edit in edits:
            if not edit.is_composite:
                continue
            if not edit.constituents:
                excluded += 1
                continue
            for constituent in edit.constituents:
                complex_idx, simplified_idx = tokens_covered(constituent, pair)
                n = len(complex_idx) + len(simplified_idx)
                if constituent.operation in token_counts[edit.operation]:
                    token_counts[edit.operation][constituent.operation] += n
    report: dict = {"excluded_empty_composites": excluded}
    for composite_op, counts in token_counts.items():
        total = sum(counts.values())
        report[composite_op.value] = {
            "tokens": {op.value: n for op, n in counts.items()},
            "percent": {
                op.value: (100.0 * n / total if total else 0.0) for op, n in counts.items()
            },
        }
    return report


def char_edit_distance(a: str, b: str) -> int:
    """Character-level Levenshtein distance (insert/delete/substitute, unit cost)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def system_report(
    dataset: Dataset,
    weights: WeightScheme,
    typology: Typology | None = None,
) -> dict:
    """Per-system score statistics, edit counts per type, and error frequencies."""
    typology = typology or default_typology()
    by_system: dict[str, list[tuple[SentencePair, Sequence[Edit]]]] = defaultdict(list)
    for pair, edits in dataset:
        by_system[pair.system].append((pair, edits))
    report: dict = {"systems": {}}
    for system in sorted(by_system):
        # fixed accumulation order keeps float sums identical across input orders
        rows = sorted(by_system[system], key=lambda item: item[0].id)
        totals: list[float] = []
        family_scores: dict[str, list[float]] = defaultdict(list)
        polarity_scores: dict[str, list[float]] = defaultdict(list)
        edit_counts: dict[str, int] = defaultdict(int)
        error_pairs: dict[str, int] = defaultdict(int)
        distances: list[float] = []
        for pair, edits in rows:
            breakdown = sentence_score(pair, edits, weights, typology)
            totals.append(breakdown.total)
            for family, value in breakdown.by_family.items():
                family_scores[family.value].append(value)
            for polarity, value in breakdown.by_polarity.items():
                polarity_scores[polarity.value].append(value)
            errors_here: set[str] = set()
            for edit in edits:
                key = _type_key(edit)
                if key is not None:
                    edit_counts[key] += 1
                if edit.classification is not None:
                    errors_here.update(edit.classification.error_types)
            for type_id in errors_here:
                error_pairs[type_id] += 1
            distances.append(float(char_edit_distance(pair.complex.text, pair.simplified.text)))
        n = len(rows)
        mean, sd = _mean_sd(totals)
        mean_distance, _ = _mean_sd(distances)
        report["systems"][system] = {
            "pairs": n,
            "score": {"mean": mean, "variance": sd * sd},
            "by_family": {
                name: {"mean": m, "variance": s * s}
                for name, (m, s) in (
                    (name, _mean_sd(values)) for name, values in sorted(family_scores.items())
                )
            },
            "by_polarity": {
                name: {"mean": m, "variance": s * s}
                for name, (m, s) in (
                    (name, _mean_sd(values)) for name, values in sorted(polarity_scores.items())
                )
            },
            "edit_counts": dict(sorted(edit_counts.items())),
            "error_frequency": {
                type_id: error_pairs[type_id] / n for type_id in sorted(error_pairs)
            },
            "mean_char_edit_distance": mean_distance,
        }
    return report
