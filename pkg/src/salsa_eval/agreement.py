"""Token-level inter-annotator agreement.

Every token of every annotated pair (both sentence sides) is a unit. For a
given edit class, each coder labels a unit IN when any of their edits of that
class covers the token, NONE otherwise; coders who never annotated the pair
are missing on its units. Krippendorff's alpha is computed over that matrix
with the standard nominal coincidence formulation.

Note the finite-sample (n-1) term in expected disagreement: duplicating every
unit k times shifts alpha slightly, so fixtures pin exact values rather than
asserting duplication invariance.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInputError, UndefinedAgreementError, UndefinedAlphaError
from .model import Edit, InformationChange, Operation, SentencePair, Side, tokens_covered
from .typology import Typology, default_typology
from .workflow import AnnotationRecord

NONE_LABEL = "NONE"
IN_LABEL = "IN"

# (pair id, side value, token index)
UnitId = tuple[str, str, int]


@dataclass(frozen=True)
class EditClass:
    """An edit class for agreement purposes: operation plus optional info change."""

    operation: Operation
    information_change: InformationChange | None = None

    @classmethod
    def parse(cls, spec: str) -> "EditClass":
        op, _, ic = spec.partition("/")
        try:
            operation = Operation(op)
        except ValueError:
            valid = ", ".join(o.value for o in Operation)
            raise InvalidInputError(f"unknown edit class '{op}' (expected one of: {valid})") from None
        return cls(
            operation=operation,
            information_change=InformationChange(ic) if ic else None,
        )

    @property
    def label(self) -> str:
        if self.information_change is None:
            return self.operation.value
        return f"{self.operation.value}/{self.information_change.value}"

    def matches(self, edit: Edit) -> bool:
        if edit.operation is not self.operation:
            return False
        if self.information_change is None:
            return True
        return edit.information_change is self.information_change


@dataclass(frozen=True)
class TokenLabelMatrix:
    """Coders x units nominal labels; absent cells are missing."""

    units: tuple[UnitId, ...]
    coders: tuple[str, ...]
    labels: Mapping[tuple[str, UnitId], str]

    def __post_init__(self) -> None:
        if len(self.coders) < 2:
            raise InvalidInputError("an agreement matrix needs at least two coders")
        if len(set(self.units)) != len(self.units):
            raise InvalidInputError("agreement units must be unique")

    def unit_labels(self, unit: UnitId) -> list[str]:
        return [
            self.labels[(coder, unit)] for coder in self.coders if (coder, unit) in self.labels
        ]


def _effective_edits(edits: Iterable[Edit], expand_composites: bool) -> list[Edit]:
    out: list[Edit] = []
    for edit in edits:
        if expand_composites and edit.is_composite:
            out.extend(edit.constituents)
        else:
            out.append(edit)
    return out


def _pair_units(pair: SentencePair) -> list[UnitId]:
    return [
        (pair.id, side.value, i)
        for side in (Side.COMPLEX, Side.SIMPLIFIED)
        for i in range(len(pair.sentence(side).tokens))
    ]


def _group_records(
    records: Sequence[AnnotationRecord], pairs: Mapping[str, SentencePair]
) -> dict[str, dict[str, AnnotationRecord]]:
    grouped: dict[str, dict[str, AnnotationRecord]] = defaultdict(dict)
    for record in records:
        if record.pair not in pairs:
            raise InvalidInputError(f"record references unknown pair '{record.pair}'")
        if record.annotator in grouped[record.pair]:
            raise InvalidInputError(
                f"annotator '{record.annotator}' appears twice for pair '{record.pair}'"
            )
        grouped[record.pair][record.annotator] = record
    return grouped


def build_matrix(
    records: Sequence[AnnotationRecord],
    pairs: Sequence[SentencePair],
    edit_class: EditClass | Operation | str,
    expand_composites: bool = False,
) -> TokenLabelMatrix:
    """Binary IN/NONE labeling of every token for one edit class.

    With ``expand_composites`` true, split and structure edits are replaced by
    their constituents' operations before matching, so e.g. a substitution
    constituent of a structure edit counts toward the substitution class.
    """
    if isinstance(edit_class, str):
        edit_class = EditClass.parse(edit_class)
    elif isinstance(edit_class, Operation):
        edit_class = EditClass(operation=edit_class)
    pair_index = {p.id: p for p in pairs}
    grouped = _group_records(records, pair_index)
    coders = tuple(sorted({r.annotator for r in records}))
    units: list[UnitId] = []
    labels: dict[tuple[str, UnitId], str] = {}
    for pair_id in sorted(grouped):
        pair = pair_index[pair_id]
        pair_units = _pair_units(pair)
        units.extend(pair_units)
        for coder, record in grouped[pair_id].items():
            covered: set[UnitId] = set()
            for edit in _effective_edits(record.edits, expand_composites):
                if not edit_class.matches(edit):
                    continue
                complex_idx, simplified_idx = tokens_covered(edit, pair)
                covered.update((pair_id, Side.COMPLEX.value, i) for i in complex_idx)
                covered.update((pair_id, Side.SIMPLIFIED.value, i) for i in simplified_idx)
            for unit in pair_units:
                labels[(coder, unit)] = IN_LABEL if unit in covered else NONE_LABEL
    return TokenLabelMatrix(units=tuple(units), coders=coders, labels=labels)


def krippendorff_alpha(matrix: TokenLabelMatrix) -> float:
    """Nominal-data Krippendorff's alpha via the coincidence matrix.

    Units with fewer than two labels are excluded. Raises
    :class:`UndefinedAlphaError` (never returns NaN) when nothing is pairable
    or when expected disagreement is zero (a single label overall).
    """
    coincidence: dict[tuple[str, str], float] = defaultdict(float)
    label_totals: Counter[str] = Counter()
    n = 0.0
    for unit in matrix.units:
        values = matrix.unit_labels(unit)
        m = len(values)
        if m < 2:
            continue
        for i, a in enumerate(values):
            for j, b in enumerate(values):
                if i != j:
                    coincidence[(a, b)] += 1.0 / (m - 1)
        for v in values:
            label_totals[v] += 1
        n += m
    if n == 0:
        raise UndefinedAlphaError("no unit has two or more labels")
    observed = sum(v for (a, b), v in coincidence.items() if a != b) / n
    expected = sum(
        label_totals[a] * label_totals[b]
        for a in label_totals
        for b in label_totals
        if a != b
    ) / (n * (n - 1))
    if expected == 0:
        raise UndefinedAlphaError("expected disagreement is zero (only one label observed)")
    return 1.0 - observed / expected


@dataclass(frozen=True)
class PairwiseAgreement:
    pct_at_least_two: float
    pct_all: float
    qualifying_units: int


def pairwise_agreement(matrix: TokenLabelMatrix) -> PairwiseAgreement:
    """Fractions of selected tokens on which >= 2 / all coders voted IN.

    Only units where at least one coder labeled IN qualify; missing cells
    count as not-IN. Reported as k-of-n for any coder count.
    """
    n_coders = len(matrix.coders)
    qualifying = 0
    at_least_two = 0
    unanimous = 0
    for unit in matrix.units:
        n_in = sum(1 for v in matrix.unit_labels(unit) if v == IN_LABEL)
        if n_in == 0:
            continue
        qualifying += 1
        if n_in >= 2:
            at_least_two += 1
        if n_in == n_coders:
            unanimous += 1
    if qualifying == 0:
        raise UndefinedAgreementError("no unit was selected by any coder")
    return PairwiseAgreement(
        pct_at_least_two=at_least_two / qualifying,
        pct_all=unanimous / qualifying,
        qualifying_units=qualifying,
    )


# Priority when a coder's token carries several operations at once: composite
# umbrellas first, then the rarer single operations. Frozen by fixtures.
_CONFUSION_PRIORITY = (
    Operation.STRUCTURE,
    Operation.SPLIT,
    Operation.REORDER,
    Operation.SUBSTITUTION,
    Operation.DELETION,
    Operation.INSERTION,
)


@dataclass(frozen=True)
class ConfusionResult:
    classes: tuple[str, ...]
    counts: Mapping[tuple[str, str], int]
    no_majority: int

    def total(self) -> int:
        return sum(self.counts.values())

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "counts": {f"{maj}|{mino}": n for (maj, mino), n in sorted(self.counts.items())},
            "no_majority": self.no_majority,
        }


def confusion(
    records: Sequence[AnnotationRecord],
    pairs: Sequence[SentencePair],
    expand_composites: bool = False,
) -> ConfusionResult:
    """Majority-vs-minority operation confusion over annotated tokens.

    Requires exactly three coders per pair. Unanimous tokens increment the
    diagonal by one; each dissenting coder increments (majority, minority)
    once; tokens with no strict majority are tallied separately. Tokens
    nobody annotated are skipped.
    """
    pair_index = {p.id: p for p in pairs}
    grouped = _group_records(records, pair_index)
    counts: dict[tuple[str, str], int] = defaultdict(int)
    no_majority = 0
    for pair_id in sorted(grouped):
        pair = pair_index[pair_id]
        coders = sorted(grouped[pair_id])
        if len(coders) != 3:
            raise InvalidInputError(
                f"confusion requires exactly 3 coders per pair; pair '{pair_id}' has {len(coders)}"
            )
        label_by_coder: dict[str, dict[UnitId, str]] = {}
        for coder in coders:
            record = grouped[pair_id][coder]
            ops_per_unit: dict[UnitId, set[Operation]] = defaultdict(set)
            for edit in _effective_edits(record.edits, expand_composites):
                complex_idx, simplified_idx = tokens_covered(edit, pair)
                for i in complex_idx:
                    ops_per_unit[(pair_id, Side.COMPLEX.value, i)].add(edit.operation)
                for i in simplified_idx:
                    ops_per_unit[(pair_id, Side.SIMPLIFIED.value, i)].add(edit.operation)
            label_by_coder[coder] = {
                unit: next(op.value for op in _CONFUSION_PRIORITY if op in ops)
                for unit, ops in ops_per_unit.items()
            }
        for unit in _pair_units(pair):
            votes = [label_by_coder[coder].get(unit, NONE_LABEL) for coder in coders]
            if all(v == NONE_LABEL for v in votes):
                continue
            tally = Counter(votes)
            label, best = tally.most_common(1)[0]
            if best < 2:
                no_majority += 1
                continue
            if best == len(votes):
                counts[(label, label)] += 1
            else:
                for v in votes:
                    if v != label:
                        counts[(label, v)] += 1
    classes = tuple(op.value for op in Operation) + (NONE_LABEL,)
    return ConfusionResult(classes=classes, counts=dict(counts), no_majority=no_majority)


@dataclass(frozen=True)
class ErrorPresenceStat:
    frequency: float
    alpha: float | None
    pairs: int


def _record_error_types(record: AnnotationRecord) -> frozenset[str]:
    types: set[str] = set()
    for entry in record.classifications:
        types.update(entry.classification.error_types)
    for edit in record.edits:
        if edit.classification is not None:
            types.update(edit.classification.error_types)
    return frozenset(types)


def error_presence_agreement(
    records: Sequence[AnnotationRecord],
    pairs: Sequence[SentencePair],
    typology: Typology | None = None,
) -> dict[str, ErrorPresenceStat]:
    """Per error type: output frequency (by coder majority) and presence alpha.

    The unit is the sentence pair and the label is whether the coder marked
    the error type anywhere in it. Types where alpha is undefined (e.g. never
    marked by anyone) report ``alpha=None``.
    """
    from .model import Polarity

    typology = typology or default_typology()
    pair_index = {p.id: p for p in pairs}
    grouped = _group_records(records, pair_index)
    if not grouped:
        raise InvalidInputError("no classification records given")
    result: dict[str, ErrorPresenceStat] = {}
    presence: dict[str, dict[tuple[str, str], str]] = defaultdict(dict)
    pair_ids = sorted(grouped)
    coders = tuple(sorted({r.annotator for r in records}))
    for pair_id in pair_ids:
        for coder, record in grouped[pair_id].items():
            marked = _record_error_types(record)
            for type_def in typology.of_polarity(Polarity.ERROR):
                presence[type_def.id][(coder, pair_id)] = (
                    "present" if type_def.id in marked else "absent"
                )
    for type_def in typology.of_polarity(Polarity.ERROR):
        labels = presence[type_def.id]
        majority_pairs = 0
        for pair_id in pair_ids:
            votes = [labels[(c, pair_id)] for c in grouped[pair_id]]
            if sum(1 for v in votes if v == "present") * 2 > len(votes):
                majority_pairs += 1
        units = tuple((pid, "pair", 0) for pid in pair_ids)
        matrix = TokenLabelMatrix(
            units=units,
            coders=coders,
            labels={
                (coder, (pid, "pair", 0)): labels[(coder, pid)]
                for pid in pair_ids
                for coder in grouped[pid]
            },
        )
        try:
            alpha = krippendorff_alpha(matrix)
        except UndefinedAlphaError:
            alpha = None
        result[type_def.id] = ErrorPresenceStat(
            frequency=majority_pairs / len(pair_ids),
            alpha=alpha,
            pairs=len(pair_ids),
        )
    return result
