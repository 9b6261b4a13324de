"""salsa-eval: edit-based text simplification evaluation and annotation workbench."""

from .model import (
    Classification,
    Edit,
    Family,
    InformationChange,
    Operation,
    Polarity,
    ReorderLevel,
    SentencePair,
    Side,
    SpanRange,
    Token,
    TokenizedSentence,
    build_pair,
    detect_split_candidates,
    tokenize,
    tokens_covered,
)
from .scoring import (
    ScoreBreakdown,
    WeightScheme,
    default_weights,
    fit_weights,
    length_factor,
    sentence_score,
    signed_rating,
)
from .typology import Typology, classify, default_typology
from .validation import Violation, validate_edit

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "Edit",
    "Family",
    "InformationChange",
    "Operation",
    "Polarity",
    "ReorderLevel",
    "ScoreBreakdown",
    "SentencePair",
    "Side",
    "SpanRange",
    "Token",
    "TokenizedSentence",
    "Typology",
    "Violation",
    "WeightScheme",
    "build_pair",
    "classify",
    "default_typology",
    "default_weights",
    "detect_split_candidates",
    "fit_weights",
    "length_factor",
    "sentence_score",
    "signed_rating",
    "tokenize",
    "tokens_covered",
    "validate_edit",
    "__version__",
]
