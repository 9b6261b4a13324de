"""Shared builders for pairs and token-aligned edits."""

from __future__ import annotations

import pytest

from salsa_eval.model import (
    Classification,
    Edit,
    InformationChange,
    Operation,
    Polarity,
    ReorderLevel,
    SentencePair,
    Side,
    SpanRange,
    build_pair,
)


def token_span(pair: SentencePair, side: Side, first: int, last: int | None = None) -> SpanRange:
    """A span covering tokens [first, last] of one side, snapped by construction."""
    last = first if last is None else last
    tokens = pair.sentence(side).tokens
    return SpanRange(side=side, start=tokens[first].start, end=tokens[last].end)


def quality_edit(
    edit_id: str,
    operation: Operation,
    spans,
    quality_type: str,
    rating: int = 2,
    information_change: InformationChange = InformationChange.SAME,
    reorder_level: ReorderLevel | None = None,
    grammar: bool = False,
) -> Edit:
    return Edit(
        id=edit_id,
        operation=operation,
        spans=tuple(spans),
        reorder_level=reorder_level,
        information_change=information_change,
        classification=Classification(
            polarity=Polarity.QUALITY,
            quality_type=quality_type,
            rating=rating,
            grammar_error=grammar,
        ),
    )


def error_edit(
    edit_id: str,
    operation: Operation,
    spans,
    error_types,
    rating: int = 2,
    information_change: InformationChange = InformationChange.SAME,
    reorder_level: ReorderLevel | None = None,
    grammar: bool = False,
) -> Edit:
    return Edit(
        id=edit_id,
        operation=operation,
        spans=tuple(spans),
        reorder_level=reorder_level,
        information_change=information_change,
        classification=Classification(
            polarity=Polarity.ERROR,
            error_types=tuple(error_types),
            rating=rating,
            grammar_error=grammar,
        ),
    )


def trivial_edit(
    edit_id: str,
    operation: Operation,
    spans,
    information_change: InformationChange = InformationChange.SAME,
    grammar: bool = False,
) -> Edit:
    return Edit(
        id=edit_id,
        operation=operation,
        spans=tuple(spans),
        information_change=information_change,
        classification=Classification(polarity=Polarity.TRIVIAL, grammar_error=grammar),
    )


@pytest.fixture
def simple_pair() -> SentencePair:
    # complex: tokens The(0,3) quick(4,9) brown(10,15) fox(16,19) jumped(20,26) .(26,27)
    # simplified: tokens The(0,3) fox(4,7) jumped(8,14) .(14,15)
    return build_pair("p1", "The quick brown fox jumped.", "The fox jumped.", system="sys-a")


# ---------------------------------------------------------------------------
# Seeded random data generators shared by property-style tests


def random_pair(rng, pair_id: str, system: str = "sys-r") -> SentencePair:
    def words(n):
        return " ".join(
            "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(rng.randint(1, 8)))
            for _ in range(n)
        )

    return build_pair(pair_id, words(rng.randint(4, 12)), words(rng.randint(3, 10)), system=system)


def _random_span(rng, pair: SentencePair, side: Side) -> SpanRange:
    n = len(pair.sentence(side).tokens)
    first = rng.randrange(n)
    last = min(n - 1, first + rng.randint(0, 2))
    return token_span(pair, side, first, last)


# (operation, information change, polarity, type ids) combinations that the
# default catalog permits; the generator draws uniformly from these.
_EDIT_MENU = [
    (Operation.DELETION, InformationChange.LESS, Polarity.QUALITY, ["generalization"]),
    (Operation.DELETION, InformationChange.LESS, Polarity.ERROR, ["bad_deletion"]),
    (Operation.DELETION, InformationChange.LESS, Polarity.ERROR, ["bad_deletion", "coreference"]),
    (Operation.DELETION, InformationChange.SAME, Polarity.TRIVIAL, []),
    (Operation.INSERTION, InformationChange.MORE, Polarity.QUALITY, ["elaboration"]),
    (Operation.INSERTION, InformationChange.MORE, Polarity.ERROR, ["repetition"]),
    (Operation.INSERTION, InformationChange.MORE, Polarity.ERROR, ["irrelevant", "contradiction"]),
    (Operation.INSERTION, InformationChange.SAME, Polarity.TRIVIAL, []),
    (Operation.SUBSTITUTION, InformationChange.SAME, Polarity.QUALITY, ["paraphrase"]),
    (Operation.SUBSTITUTION, InformationChange.SAME, Polarity.ERROR, ["complex_wording"]),
    (Operation.SUBSTITUTION, InformationChange.MORE, Polarity.QUALITY, ["elaboration"]),
    (Operation.SUBSTITUTION, InformationChange.DIFFERENT, Polarity.ERROR, ["information_rewrite"]),
    (Operation.REORDER, InformationChange.SAME, Polarity.QUALITY, ["word_reorder"]),
    (Operation.REORDER, InformationChange.SAME, Polarity.QUALITY, ["component_reorder"]),
    (Operation.REORDER, InformationChange.SAME, Polarity.ERROR, ["bad_word_reorder"]),
    (Operation.REORDER, InformationChange.SAME, Polarity.ERROR, ["bad_component_reorder"]),
]


def random_classified_edit(rng, pair: SentencePair, edit_id: str) -> Edit:
    operation, change, polarity, type_ids = rng.choice(_EDIT_MENU)
    spans = []
    if operation in (Operation.DELETION, Operation.SUBSTITUTION, Operation.REORDER):
        spans.append(_random_span(rng, pair, Side.COMPLEX))
    if operation in (Operation.INSERTION, Operation.SUBSTITUTION, Operation.REORDER):
        spans.append(_random_span(rng, pair, Side.SIMPLIFIED))
    level = None
    if operation is Operation.REORDER:
        level = ReorderLevel.WORD if "word" in type_ids[0] else ReorderLevel.COMPONENT
    if polarity is Polarity.TRIVIAL:
        classification = Classification(polarity=Polarity.TRIVIAL, grammar_error=rng.random() < 0.2)
    elif polarity is Polarity.QUALITY:
        classification = Classification(
            polarity=Polarity.QUALITY,
            quality_type=type_ids[0],
            rating=rng.randint(1, 3),
            grammar_error=rng.random() < 0.2,
        )
    else:
        classification = Classification(
            polarity=Polarity.ERROR,
            error_types=tuple(type_ids),
            rating=rng.randint(1, 3),
            grammar_error=rng.random() < 0.2,
        )
    return Edit(
        id=edit_id,
        operation=operation,
        spans=tuple(spans),
        reorder_level=level,
        information_change=change,
        classification=classification,
    )


def random_composite(rng, pair: SentencePair, edit_id: str, classified: bool = True) -> Edit:
    operation = rng.choice([Operation.SPLIT, Operation.STRUCTURE])
    constituents = []
    for i in range(rng.randint(1, 3)):
        kind = rng.choice(
            [Operation.DELETION, Operation.INSERTION, Operation.SUBSTITUTION, Operation.REORDER]
        )
        spans = []
        if kind in (Operation.DELETION, Operation.SUBSTITUTION, Operation.REORDER):
            spans.append(_random_span(rng, pair, Side.COMPLEX))
        if kind in (Operation.INSERTION, Operation.SUBSTITUTION, Operation.REORDER):
            spans.append(_random_span(rng, pair, Side.SIMPLIFIED))
        constituents.append(
            Edit(
                id=f"{edit_id}/c{i}",
                operation=kind,
                spans=tuple(spans),
                reorder_level=ReorderLevel.WORD if kind is Operation.REORDER else None,
            )
        )
    from salsa_eval.model import merge_ranges

    spans = tuple(
        SpanRange(side, start, end)
        for side in (Side.COMPLEX, Side.SIMPLIFIED)
        for start, end in merge_ranges(
            (s.start, s.end) for c in constituents for s in c.spans if s.side is side
        )
    )
    classification = None
    if classified:
        positive = rng.random() < 0.7
        if operation is Operation.SPLIT:
            type_id = "sentence_split" if positive else "bad_sentence_split"
        else:
            type_id = "structure_change" if positive else "bad_structure"
        if positive:
            classification = Classification(
                polarity=Polarity.QUALITY, quality_type=type_id, rating=rng.randint(1, 3)
            )
        else:
            classification = Classification(
                polarity=Polarity.ERROR, error_types=(type_id,), rating=rng.randint(1, 3)
            )
    return Edit(
        id=edit_id,
        operation=operation,
        spans=spans,
        information_change=InformationChange.SAME,
        constituents=tuple(constituents),
        classification=classification,
    )
