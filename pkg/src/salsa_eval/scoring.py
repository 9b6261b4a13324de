"""Sentence-level edit scoring and least-squares fitting of the weight scheme.

A sentence's score is the sum over its edits of

    exp((len_complex + len_simplified) / (LEN_complex + LEN_simplified)) * w * r

where the lengths are character counts (edit span coverage over sentence
text), ``w`` is the signed weight of the edit's (family, polarity) key and
``r`` is the unsigned 1-3 magnitude. Error weights are negative, so failures
subtract; trivial edits contribute exactly 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import FitError, InvalidEditError, InvalidInputError, ScoringError
from .model import Classification, Edit, Family, Polarity, SentencePair, Side
from .typology import Typology, default_typology

WEIGHT_KEYS: tuple[tuple[Family, Polarity], ...] = tuple(
    (family, polarity)
    for family in Family
    for polarity in (Polarity.QUALITY, Polarity.ERROR)
)

# Shipped defaults: the syntactic-error weight is the only empirically settled
# value (-5); the rest are +1/-1 placeholders meant to be replaced by a fit.
DEFAULT_WEIGHT_VALUES: dict[tuple[Family, Polarity], float] = {
    (Family.CONCEPTUAL, Polarity.QUALITY): 1.0,
    (Family.SYNTACTIC, Polarity.QUALITY): 1.0,
    (Family.LEXICAL, Polarity.QUALITY): 1.0,
    (Family.CONCEPTUAL, Polarity.ERROR): -1.0,
    (Family.SYNTACTIC, Polarity.ERROR): -5.0,
    (Family.LEXICAL, Polarity.ERROR): -1.0,
}


@dataclass(frozen=True)
class WeightScheme:
    """Signed weights keyed by (family, polarity); provenance tracks origin."""

    weights: Mapping[tuple[Family, Polarity], float]
    provenance: str = "manual"

    def __post_init__(self) -> None:
        missing = [k for k in WEIGHT_KEYS if k not in self.weights]
        if missing:
            names = ", ".join(f"{f.value}.{p.value}" for f, p in missing)
            raise InvalidInputError(f"weight scheme missing keys: {names}")


def default_weights() -> WeightScheme:
    return WeightScheme(weights=dict(DEFAULT_WEIGHT_VALUES), provenance="default")


def length_factor(edit: Edit, pair: SentencePair) -> float:
    """exp of the edit's combined span length over the combined sentence length.

    Lies in (1, e] because coverage is non-empty and bounded by the sentence.
    Raises :class:`InvalidEditError` for edits with no span coverage at all.
    """
    chars = edit.span_chars(Side.COMPLEX) + edit.span_chars(Side.SIMPLIFIED)
    if chars == 0:
        raise InvalidEditError(f"edit '{edit.id}' covers no characters")
    denom = len(pair.complex.text) + len(pair.simplified.text)
    if denom == 0:
        raise InvalidEditError(f"pair '{pair.id}' has empty sentences")
    return math.exp(chars / denom)


def signed_rating(classification: Classification) -> int:
    """Magnitude with the polarity's sign: quality +, error -, trivial 0."""
    if classification.polarity is Polarity.QUALITY:
        return classification.magnitude
    if classification.polarity is Polarity.ERROR:
        return -classification.magnitude
    return 0


def edit_family(classification: Classification, typology: Typology) -> Family | None:
    """The family an edit's score contribution is attributed to.

    Error classifications may carry several types; the first in catalog order
    decides the family. Trivial edits have no family.
    """
    if classification.polarity is Polarity.QUALITY and classification.quality_type:
        return typology.require(classification.quality_type).family
    if classification.polarity is Polarity.ERROR and classification.error_types:
        first = min(classification.error_types, key=typology.index)
        return typology.require(first).family
    return None


@dataclass(frozen=True)
class EditContribution:
    edit_id: str
    length_factor: float
    contribution: float
    family: Family | None
    polarity: Polarity


@dataclass(frozen=True)
class ScoreBreakdown:
    total: float
    by_family: Mapping[Family, float]
    by_polarity: Mapping[Polarity, float]
    per_edit: tuple[EditContribution, ...]

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "by_family": {f.value: v for f, v in self.by_family.items()},
            "by_polarity": {p.value: v for p, v in self.by_polarity.items()},
            "per_edit": [
                {
                    "edit_id": c.edit_id,
                    "length_factor": c.length_factor,
                    "contribution": c.contribution,
                    "family": c.family.value if c.family else None,
                    "polarity": c.polarity.value,
                }
                for c in self.per_edit
            ],
        }


def sentence_score(
    pair: SentencePair,
    edits: Sequence[Edit],
    weights: WeightScheme,
    typology: Typology | None = None,
) -> ScoreBreakdown:
    """Score one sentence pair from its classified edits.

    Every edit must carry a classification; unclassified edits raise
    :class:`ScoringError` naming the edit. An empty edit list scores 0.
    """
    typology = typology or default_typology()
    by_family = {f: 0.0 for f in Family}
    by_polarity = {Polarity.QUALITY: 0.0, Polarity.ERROR: 0.0}
    per_edit: list[EditContribution] = []
    total = 0.0
    for edit in edits:
        cls = edit.classification
        if cls is None:
            raise ScoringError(f"edit '{edit.id}' is not classified")
        factor = length_factor(edit, pair)
        if cls.polarity is Polarity.TRIVIAL or cls.magnitude == 0:
            per_edit.append(EditContribution(edit.id, factor, 0.0, None, Polarity.TRIVIAL))
            continue
        family = edit_family(cls, typology)
        if family is None:
            raise ScoringError(f"edit '{edit.id}' has no resolvable family")
        weight = weights.weights[(family, cls.polarity)]
        contribution = factor * weight * cls.magnitude
        total += contribution
        by_family[family] += contribution
        by_polarity[cls.polarity] += contribution
        per_edit.append(EditContribution(edit.id, factor, contribution, family, cls.polarity))
    return ScoreBreakdown(
        total=total,
        by_family=by_family,
        by_polarity=by_polarity,
        per_edit=tuple(per_edit),
    )


@dataclass(frozen=True)
class FitDiagnostics:
    r_squared: float
    residual_norm: float
    n_sentences: int
    feature_counts: Mapping[tuple[Family, Polarity], int]
    stderr: Mapping[tuple[Family, Polarity], float]

    def to_dict(self) -> dict:
        return {
            "r_squared": self.r_squared,
            "residual_norm": self.residual_norm,
            "n_sentences": self.n_sentences,
            "feature_counts": {
                f"{f.value}.{p.value}": n for (f, p), n in self.feature_counts.items()
            },
            "stderr": {f"{f.value}.{p.value}": s for (f, p), s in self.stderr.items()},
        }


def design_row(
    pair: SentencePair, edits: Sequence[Edit], typology: Typology
) -> dict[tuple[Family, Polarity], float]:
    """One regression row: per key, the sum of length_factor * magnitude."""
    row = {key: 0.0 for key in WEIGHT_KEYS}
    for edit in edits:
        cls = edit.classification
        if cls is None:
            raise ScoringError(f"edit '{edit.id}' is not classified")
        if cls.polarity is Polarity.TRIVIAL or cls.magnitude == 0:
            continue
        family = edit_family(cls, typology)
        if family is None:
            raise ScoringError(f"edit '{edit.id}' has no resolvable family")
        row[(family, cls.polarity)] += length_factor(edit, pair) * cls.magnitude
    return row


MIN_FIT_SENTENCES = 6


def fit_weights(
    dataset: Sequence[tuple[SentencePair, Sequence[Edit], float]],
    typology: Typology | None = None,
    fixed: Mapping[tuple[Family, Polarity], float] | None = None,
) -> tuple[WeightScheme, FitDiagnostics]:
    """Ordinary least squares (no intercept) of gold sentence scores on edit features.

    ``fixed`` pins chosen keys to given values; their contribution is
    subtracted from the targets and only the remaining keys are fitted, which
    is the escape hatch when a key was never observed. Raises
    :class:`FitError` listing unobserved (all-zero) free keys.
    """
    typology = typology or default_typology()
    fixed = dict(fixed or {})
    rows = []
    golds = []
    counts = {key: 0 for key in WEIGHT_KEYS}
    n_with_edits = 0
    for pair, edits, gold in dataset:
        if not math.isfinite(gold):
            raise InvalidInputError(f"pair '{pair.id}' has a non-finite gold score")
        row = design_row(pair, edits, typology)
        for edit in edits:
            cls = edit.classification
            if cls is not None and cls.polarity is not Polarity.TRIVIAL and cls.magnitude > 0:
                counts[(edit_family(cls, typology), cls.polarity)] += 1
        if any(v != 0.0 for v in row.values()):
            n_with_edits += 1
        rows.append(row)
        golds.append(float(gold))
    if n_with_edits < MIN_FIT_SENTENCES:
        raise InvalidInputError(
            f"need at least {MIN_FIT_SENTENCES} sentences with edits to fit, got {n_with_edits}"
        )

    free_keys = [key for key in WEIGHT_KEYS if key not in fixed]
    x_full = np.array([[row[key] for key in WEIGHT_KEYS] for row in rows], dtype=float)
    y = np.array(golds, dtype=float)
    key_col = {key: i for i, key in enumerate(WEIGHT_KEYS)}
    unobserved = [key for key in free_keys if not np.any(x_full[:, key_col[key]])]
    if unobserved:
        names = ", ".join(f"{f.value}.{p.value}" for f, p in unobserved)
        raise FitError(f"no observations for weight key(s): {names}", unobserved=unobserved)

    x_free = x_full[:, [key_col[k] for k in free_keys]]
    y_adj = y - sum(fixed[k] * x_full[:, key_col[k]] for k in fixed) if fixed else y
    solution, _, _, _ = np.linalg.lstsq(x_free, y_adj, rcond=None)

    residuals = y_adj - x_free @ solution
    rss = float(residuals @ residuals)
    total = float(y_adj @ y_adj)
    r_squared = 1.0 - rss / total if total > 0 else 1.0

    dof = len(rows) - len(free_keys)
    stderr = {key: 0.0 for key in WEIGHT_KEYS}
    if dof > 0 and rss > 0:
        sigma2 = rss / dof
        covariance = sigma2 * np.linalg.pinv(x_free.T @ x_free)
        for i, key in enumerate(free_keys):
            stderr[key] = float(math.sqrt(max(covariance[i, i], 0.0)))

    weights = dict(fixed)
    weights.update({key: float(v) for key, v in zip(free_keys, solution)})
    scheme = WeightScheme(weights=weights, provenance="fitted")
    diagnostics = FitDiagnostics(
        r_squared=r_squared,
        residual_norm=float(math.sqrt(rss)),
        n_sentences=len(rows),
        feature_counts=counts,
        stderr=stderr,
    )
    return scheme, diagnostics
