"""Word-level quality estimation targets derived from edit annotations.

Each output token gets the signed rating of the covering edit with the
largest absolute rating; when a positive and a negative rating tie in
magnitude the negative (error) side wins, extending the error-over-quality
priority rule to ratings. Labels are the sign of that rating, which keeps
ratings and labels consistent by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InvalidInputError, ScoringError
from .model import Edit, SentencePair, Side, tokens_covered
from .scoring import ScoreBreakdown, WeightScheme, sentence_score, signed_rating
from .typology import Typology

QUALITY = "QUALITY"
OK = "OK"
ERROR = "ERROR"

# Word-level loss weight used when fine-tuning a metric on these targets.
DEFAULT_WORD_LOSS_WEIGHT = 0.9
DEFAULT_SENTENCE_LOSS_WEIGHT = 0.1

QE_EXPORT_VERSION = 1


def word_ratings(
    pair: SentencePair, edits: Sequence[Edit], side: Side = Side.SIMPLIFIED
) -> list[int]:
    """Signed [-3, 3] rating per token of the chosen side.

    Uncovered tokens (and tokens covered only by trivial edits) rate 0.
    The result is independent of edit order.
    """
    sentence = pair.sentence(side)
    ratings = [0] * len(sentence.tokens)
    side_index = 0 if side is Side.COMPLEX else 1
    for edit in edits:
        if edit.classification is None:
            raise ScoringError(f"edit '{edit.id}' is not classified")
        rating = signed_rating(edit.classification)
        if rating == 0:
            continue
        for i in tokens_covered(edit, pair)[side_index]:
            ratings[i] = _dominant(ratings[i], rating)
    return ratings


def _dominant(current: int, candidate: int) -> int:
    # Larger magnitude wins; on a magnitude tie the negative rating wins.
    if (abs(candidate), candidate < 0) > (abs(current), current < 0):
        return candidate
    return current


def word_labels(
    pair: SentencePair, edits: Sequence[Edit], side: Side = Side.SIMPLIFIED
) -> list[str]:
    """QUALITY/OK/ERROR per token, as the sign of :func:`word_ratings`."""
    return [label_for_rating(r) for r in word_ratings(pair, edits, side)]


def label_for_rating(rating: int) -> str:
    if rating < 0:
        return ERROR
    if rating > 0:
        return QUALITY
    return OK


@dataclass(frozen=True)
class QeLosses:
    sentence: float
    word: float
    total: float


def qe_losses(
    pred_sentence: float,
    gold_sentence: float,
    pred_words: Sequence[float],
    gold_words: Sequence[float],
    lambda_s: float = DEFAULT_SENTENCE_LOSS_WEIGHT,
    lambda_w: float = DEFAULT_WORD_LOSS_WEIGHT,
) -> QeLosses:
    """Squared-error training losses for a sentence- and word-level predictor.

    sentence = (gold - pred)^2 / 2; word = mean over tokens of the same;
    total = lambda_s * sentence + lambda_w * word. All three are >= 0.
    """
    if len(pred_words) != len(gold_words):
        raise InvalidInputError(
            f"word lists differ in length: {len(pred_words)} vs {len(gold_words)}"
        )
    if not pred_words:
        raise InvalidInputError("word lists must be non-empty")
    if lambda_s < 0 or lambda_w < 0:
        raise InvalidInputError("loss weights must be non-negative")
    sentence = 0.5 * (gold_sentence - pred_sentence) ** 2
    word = sum(0.5 * (g - p) ** 2 for g, p in zip(gold_words, pred_words)) / len(pred_words)
    return QeLosses(sentence=sentence, word=word, total=lambda_s * sentence + lambda_w * word)


def export_records(
    dataset: Sequence[tuple[SentencePair, Sequence[Edit]]],
    weights: WeightScheme,
    typology: Typology | None = None,
    include_complex: bool = False,
) -> Iterator[dict]:
    """JSON Lines records for the word-level QE export: header first, then one
    record per pair with token surfaces, signed ratings, labels, and the
    sentence score."""
    yield {
        "record": "header",
        "version": QE_EXPORT_VERSION,
        "side": "simplified",
        "includes_complex": include_complex,
    }
    for pair, edits in dataset:
        breakdown: ScoreBreakdown = sentence_score(pair, edits, weights, typology)
        ratings = word_ratings(pair, edits)
        row: dict = {
            "record": "pair",
            "pair": pair.id,
            "system": pair.system,
            "tokens": [t.surface for t in pair.simplified.tokens],
            "ratings": ratings,
            "labels": [label_for_rating(r) for r in ratings],
            "sentence_score": breakdown.total,
        }
        if include_complex:
            complex_ratings = word_ratings(pair, edits, side=Side.COMPLEX)
            row["complex_tokens"] = [t.surface for t in pair.complex.tokens]
            row["complex_ratings"] = complex_ratings
            row["complex_labels"] = [label_for_rating(r) for r in complex_ratings]
        yield row
