"""Core data model: tokenized sentences, span-based edits, and span utilities.

Character offsets are the ground truth throughout. Tokens are derived from the
text once, spans are stored as character ranges snapped to token boundaries,
and every downstream computation (coverage, lengths, agreement units) works
from offsets so that a UI and this library can never disagree about what a
span contains.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Iterator, Mapping

from .errors import InvalidInputError


class Side(str, Enum):
    """Which sentence of a pair a span or token index refers to."""

    COMPLEX = "complex"
    SIMPLIFIED = "simplified"


class Operation(str, Enum):
    INSERTION = "insertion"
    DELETION = "deletion"
    SUBSTITUTION = "substitution"
    REORDER = "reorder"
    SPLIT = "split"
    STRUCTURE = "structure"

    @property
    def is_composite(self) -> bool:
        return self in (Operation.SPLIT, Operation.STRUCTURE)


SINGLE_OPERATIONS: tuple[Operation, ...] = (
    Operation.INSERTION,
    Operation.DELETION,
    Operation.SUBSTITUTION,
    Operation.REORDER,
)
COMPOSITE_OPERATIONS: tuple[Operation, ...] = (Operation.SPLIT, Operation.STRUCTURE)


class ReorderLevel(str, Enum):
    WORD = "word"
    COMPONENT = "component"


class InformationChange(str, Enum):
    LESS = "less"
    SAME = "same"
    MORE = "more"
    DIFFERENT = "different"


class Polarity(str, Enum):
    QUALITY = "quality"
    ERROR = "error"
    TRIVIAL = "trivial"


class Family(str, Enum):
    CONCEPTUAL = "conceptual"
    SYNTACTIC = "syntactic"
    LEXICAL = "lexical"


@dataclass(frozen=True)
class Token:
    start: int
    end: int
    surface: str


@dataclass(frozen=True)
class TokenizedSentence:
    """A sentence with its derived token layer.

    Tokens are ordered, non-overlapping, and each surface equals the exact
    text slice it was cut from; the constructor enforces this.
    """

    id: str
    text: str
    tokens: tuple[Token, ...]
    role: Side

    def __post_init__(self) -> None:
        prev_end = 0
        for tok in self.tokens:
            if not (0 <= tok.start < tok.end <= len(self.text)):
                raise InvalidInputError(
                    f"token ({tok.start}, {tok.end}) out of bounds for text of length {len(self.text)}"
                )
            if tok.start < prev_end:
                raise InvalidInputError(f"token at {tok.start} overlaps or precedes its neighbour")
            if self.text[tok.start : tok.end] != tok.surface:
                raise InvalidInputError(
                    f"token surface {tok.surface!r} does not match slice "
                    f"{self.text[tok.start:tok.end]!r} at ({tok.start}, {tok.end})"
                )
            prev_end = tok.end

    def token_starts(self) -> tuple[int, ...]:
        return tuple(t.start for t in self.tokens)

    def token_ends(self) -> tuple[int, ...]:
        return tuple(t.end for t in self.tokens)


def _is_punct(ch: str) -> bool:
    return not ch.isalnum() and not ch.isspace()


def _chunks(text: str) -> Iterator[tuple[int, int]]:
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        yield i, j
        i = j


def _detach_punctuation(text: str, start: int, end: int) -> list[tuple[int, int]]:
    # Leading and trailing punctuation become one-character tokens; interior
    # punctuation (don't, 3.5, e-mail) stays attached.
    lead: list[tuple[int, int]] = []
    trail: list[tuple[int, int]] = []
    i, j = start, end
    while i < j and _is_punct(text[i]):
        lead.append((i, i + 1))
        i += 1
    while j > i and _is_punct(text[j - 1]):
        trail.append((j - 1, j))
        j -= 1
    out = lead
    if i < j:
        out.append((i, j))
    out.extend(reversed(trail))
    return out


def tokenize(text: str, sentence_id: str = "", role: Side = Side.SIMPLIFIED) -> TokenizedSentence:
    """Deterministic whitespace tokenization with edge punctuation detached.

    Every non-whitespace character belongs to exactly one token. Raises
    :class:`InvalidInputError` for empty or whitespace-only input.
    """
    if not text or text.isspace():
        raise InvalidInputError("cannot tokenize empty or whitespace-only text")
    tokens = [
        Token(s, e, text[s:e])
        for start, end in _chunks(text)
        for s, e in _detach_punctuation(text, start, end)
    ]
    return TokenizedSentence(id=sentence_id, text=text, tokens=tuple(tokens), role=role)


@dataclass(frozen=True)
class SentencePair:
    id: str
    complex: TokenizedSentence
    simplified: TokenizedSentence
    system: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.complex.role is not Side.COMPLEX:
            raise InvalidInputError(f"pair {self.id}: complex sentence has role {self.complex.role}")
        if self.simplified.role is not Side.SIMPLIFIED:
            raise InvalidInputError(f"pair {self.id}: simplified sentence has role {self.simplified.role}")

    def sentence(self, side: Side) -> TokenizedSentence:
        return self.complex if side is Side.COMPLEX else self.simplified


def build_pair(
    pair_id: str,
    complex_text: str,
    simplified_text: str,
    system: str = "",
    metadata: Mapping[str, Any] | None = None,
) -> SentencePair:
    """Tokenize both sides of a pair and assemble a :class:`SentencePair`."""
    return SentencePair(
        id=pair_id,
        complex=tokenize(complex_text, f"{pair_id}/complex", Side.COMPLEX),
        simplified=tokenize(simplified_text, f"{pair_id}/simplified", Side.SIMPLIFIED),
        system=system,
        metadata=dict(metadata or {}),
    )


@dataclass(frozen=True)
class SpanRange:
    """A [start, end) character range on one side of a pair."""

    side: Side
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "SpanRange") -> bool:
        return self.side is other.side and self.start < other.end and other.start < self.end


def merge_ranges(ranges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Union of [start, end) ranges: overlapping or touching ranges are merged."""
    merged: list[list[int]] = []
    for s, e in sorted(ranges):
        if merged and s <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    return tuple((s, e) for s, e in merged)


@dataclass(frozen=True)
class Classification:
    """Polarity, type assignment, grammar flag, and 1-3 magnitude of one edit.

    Trivial edits carry no type ids and no rating; their magnitude is 0 by
    definition and they contribute nothing to any score.
    """

    polarity: Polarity
    quality_type: str | None = None
    error_types: tuple[str, ...] = ()
    grammar_error: bool = False
    rating: int | None = None

    @property
    def magnitude(self) -> int:
        if self.polarity is Polarity.TRIVIAL or self.rating is None:
            return 0
        return self.rating

    def type_ids(self) -> tuple[str, ...]:
        if self.polarity is Polarity.QUALITY and self.quality_type:
            return (self.quality_type,)
        if self.polarity is Polarity.ERROR:
            return self.error_types
        return ()


@dataclass(frozen=True)
class Edit:
    """One annotated transformation between the complex and simplified sentence.

    Split and structure edits are composites: they own their constituent
    single-operation edits, and their spans must equal the union of the
    constituents' spans.
    """

    id: str
    operation: Operation
    spans: tuple[SpanRange, ...] = ()
    reorder_level: ReorderLevel | None = None
    information_change: InformationChange | None = None
    constituents: tuple["Edit", ...] = ()
    structure_subtype: str | None = None
    classification: Classification | None = None

    @property
    def is_composite(self) -> bool:
        return self.operation.is_composite

    def spans_on(self, side: Side) -> tuple[SpanRange, ...]:
        return tuple(s for s in self.spans if s.side is side)

    def coverage(self, side: Side) -> tuple[tuple[int, int], ...]:
        """Merged character ranges this edit touches on one side.

        Composites report the union of their constituents' coverage, which
        valid composites' own spans equal anyway.
        """
        if self.is_composite and self.constituents:
            ranges = [(s.start, s.end) for c in self.constituents for s in c.spans_on(side)]
        else:
            ranges = [(s.start, s.end) for s in self.spans_on(side)]
        return merge_ranges(ranges)

    def span_chars(self, side: Side) -> int:
        return sum(e - s for s, e in self.coverage(side))

    def walk(self) -> Iterator["Edit"]:
        yield self
        for c in self.constituents:
            yield from c.walk()


def tokens_covered(edit: Edit, pair: SentencePair) -> tuple[frozenset[int], frozenset[int]]:
    """Token indices whose [start, end) intersects the edit, per side.

    A token may be covered by several edits at once; each reports it
    independently. Composites cover the union of their constituents.
    """

    def covered(sentence: TokenizedSentence, ranges: tuple[tuple[int, int], ...]) -> frozenset[int]:
        return frozenset(
            i
            for i, tok in enumerate(sentence.tokens)
            if any(tok.start < e and s < tok.end for s, e in ranges)
        )

    return (
        covered(pair.complex, edit.coverage(Side.COMPLEX)),
        covered(pair.simplified, edit.coverage(Side.SIMPLIFIED)),
    )


def snap_span(span: SpanRange, sentence: TokenizedSentence) -> SpanRange:
    """Snap a span outward so start/end sit on token boundaries.

    Start moves left to the nearest token start, end moves right to the
    nearest token end; a span already aligned is returned unchanged.
    """
    starts = sentence.token_starts()
    ends = sentence.token_ends()
    if not starts:
        raise InvalidInputError(f"sentence {sentence.id} has no tokens to snap to")
    start = max((s for s in starts if s <= span.start), default=starts[0])
    end = min((e for e in ends if e >= span.end), default=ends[-1])
    if start == span.start and end == span.end:
        return span
    return SpanRange(side=span.side, start=start, end=end)


def snap_edit(edit: Edit, pair: SentencePair) -> tuple[Edit, list[str]]:
    """Snap all spans of an edit (and its constituents) to token boundaries.

    Returns the snapped edit together with one warning string per moved span.
    """
    warnings: list[str] = []
    new_spans = []
    for span in edit.spans:
        snapped = snap_span(span, pair.sentence(span.side))
        if snapped != span:
            warnings.append(
                f"edit '{edit.id}': span {span.side.value}[{span.start},{span.end}) "
                f"snapped to [{snapped.start},{snapped.end})"
            )
        new_spans.append(snapped)
    new_constituents = []
    for c in edit.constituents:
        snapped_c, w = snap_edit(c, pair)
        warnings.extend(w)
        new_constituents.append(snapped_c)
    if not warnings:
        return edit, warnings
    return (
        replace(edit, spans=tuple(new_spans), constituents=tuple(new_constituents)),
        warnings,
    )


_SENTENCE_TERMINALS = frozenset(".!?")


def sentence_boundaries(sentence: TokenizedSentence) -> int:
    """Count sentence-final boundaries: runs of terminal-punctuation tokens.

    A token counts as terminal punctuation when all its characters are in
    ``.!?``; consecutive terminal tokens (``?!``, ``...``) form one boundary.
    Decimal points never surface as their own token, so ``3.5`` is safe.
    """
    count = 0
    in_run = False
    for tok in sentence.tokens:
        is_terminal = all(ch in _SENTENCE_TERMINALS for ch in tok.surface)
        if is_terminal and not in_run:
            count += 1
        in_run = is_terminal
    return count


def detect_split_candidates(pair: SentencePair) -> list[Edit]:
    """Provisional split-edit shells for a pair whose output has k >= 2 sentences.

    Returns k - 1 shells with no spans and no constituents; annotators attach
    constituent edits to them during selection.
    """
    k = sentence_boundaries(pair.simplified)
    return [
        Edit(id=f"{pair.id}/split-{i + 1}", operation=Operation.SPLIT)
        for i in range(max(k - 1, 0))
    ]
