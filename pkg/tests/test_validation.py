"""Edit validation: operation sides, composites, spans, classification rules."""

import pytest

from salsa_eval.model import (
    Classification,
    Edit,
    InformationChange,
    Operation,
    Polarity,
    ReorderLevel,
    Side,
    SpanRange,
)
from salsa_eval.typology import default_typology
from salsa_eval.validation import validate_edit, validate_edits

from conftest import error_edit, quality_edit, token_span, trivial_edit


@pytest.fixture(scope="module")
def typology():
    return default_typology()


def codes(violations):
    return {v.code for v in violations}


def test_valid_paraphrase_has_no_violations(simple_pair, typology):
    edit = quality_edit(
        "e1",
        Operation.SUBSTITUTION,
        [token_span(simple_pair, Side.COMPLEX, 4), token_span(simple_pair, Side.SIMPLIFIED, 2)],
        "paraphrase",
        information_change=InformationChange.SAME,
    )
    assert validate_edit(edit, simple_pair, typology) == []


def test_deletion_must_not_touch_simplified(simple_pair, typology):
    edit = Edit(
        id="e1",
        operation=Operation.DELETION,
        spans=(token_span(simple_pair, Side.COMPLEX, 1), token_span(simple_pair, Side.SIMPLIFIED, 1)),
    )
    violations = validate_edit(edit, simple_pair, typology)
    assert "operation.sides" in codes(violations)
    assert any("must not touch the simplified side" in v.message for v in violations)


def test_insertion_must_not_touch_complex(simple_pair, typology):
    edit = Edit(id="e1", operation=Operation.INSERTION, spans=(token_span(simple_pair, Side.COMPLEX, 0),))
    assert "operation.sides" in codes(validate_edit(edit, simple_pair, typology))


def test_substitution_requires_both_sides(simple_pair, typology):
    edit = Edit(
        id="e1", operation=Operation.SUBSTITUTION, spans=(token_span(simple_pair, Side.COMPLEX, 0),)
    )
    assert "operation.sides" in codes(validate_edit(edit, simple_pair, typology))


def test_composite_requires_constituents(simple_pair, typology):
    edit = Edit(id="s1", operation=Operation.STRUCTURE)
    violations = validate_edit(edit, simple_pair, typology)
    assert "composite.constituents" in codes(violations)


def test_composite_spans_must_equal_constituent_union(simple_pair, typology):
    constituent = Edit(
        id="c1", operation=Operation.DELETION, spans=(token_span(simple_pair, Side.COMPLEX, 1),)
    )
    composite = Edit(
        id="s1",
        operation=Operation.SPLIT,
        spans=(token_span(simple_pair, Side.COMPLEX, 1, 2),),
        constituents=(constituent,),
    )
    assert "composite.spans" in codes(validate_edit(composite, simple_pair, typology))
    aligned = Edit(
        id="s2",
        operation=Operation.SPLIT,
        spans=constituent.spans,
        constituents=(constituent,),
    )
    assert validate_edit(aligned, simple_pair, typology) == []


def test_composite_constituent_must_be_single_operation(simple_pair, typology):
    inner = Edit(
        id="c1",
        operation=Operation.SPLIT,
        spans=(token_span(simple_pair, Side.COMPLEX, 1),),
        constituents=(
            Edit(id="c2", operation=Operation.DELETION, spans=(token_span(simple_pair, Side.COMPLEX, 1),)),
        ),
    )
    composite = Edit(
        id="s1",
        operation=Operation.STRUCTURE,
        spans=(token_span(simple_pair, Side.COMPLEX, 1),),
        constituents=(inner,),
    )
    assert "composite.operation" in codes(validate_edit(composite, simple_pair, typology))


def test_single_operation_rejects_constituents(simple_pair, typology):
    edit = Edit(
        id="e1",
        operation=Operation.DELETION,
        spans=(token_span(simple_pair, Side.COMPLEX, 1),),
        constituents=(
            Edit(id="c1", operation=Operation.DELETION, spans=(token_span(simple_pair, Side.COMPLEX, 2),)),
        ),
    )
    assert "constituents.unexpected" in codes(validate_edit(edit, simple_pair, typology))


def test_reorder_level_presence(simple_pair, typology):
    spans = (token_span(simple_pair, Side.COMPLEX, 1), token_span(simple_pair, Side.SIMPLIFIED, 1))
    missing = Edit(id="e1", operation=Operation.REORDER, spans=spans)
    assert "reorder.level" in codes(validate_edit(missing, simple_pair, typology))
    stray = Edit(
        id="e2",
        operation=Operation.DELETION,
        spans=(token_span(simple_pair, Side.COMPLEX, 1),),
        reorder_level=ReorderLevel.WORD,
    )
    assert "reorder.level" in codes(validate_edit(stray, simple_pair, typology))


def test_span_bounds_and_alignment(simple_pair, typology):
    out_of_bounds = Edit(
        id="e1", operation=Operation.DELETION, spans=(SpanRange(Side.COMPLEX, 0, 99),)
    )
    assert "span.bounds" in codes(validate_edit(out_of_bounds, simple_pair, typology))
    unaligned = Edit(id="e2", operation=Operation.DELETION, spans=(SpanRange(Side.COMPLEX, 5, 9),))
    assert "span.alignment" in codes(validate_edit(unaligned, simple_pair, typology))


def test_same_edit_spans_may_not_overlap(simple_pair, typology):
    edit = Edit(
        id="e1",
        operation=Operation.DELETION,
        spans=(
            token_span(simple_pair, Side.COMPLEX, 1, 2),
            token_span(simple_pair, Side.COMPLEX, 2, 3),
        ),
    )
    assert "span.overlap" in codes(validate_edit(edit, simple_pair, typology))


def test_discontiguous_spans_allowed(simple_pair, typology):
    edit = quality_edit(
        "e1",
        Operation.DELETION,
        [token_span(simple_pair, Side.COMPLEX, 1), token_span(simple_pair, Side.COMPLEX, 4)],
        "generalization",
        information_change=InformationChange.LESS,
    )
    assert validate_edit(edit, simple_pair, typology) == []


def test_classification_types_by_polarity(simple_pair, typology):
    span_c = token_span(simple_pair, Side.COMPLEX, 1)
    both_types = Edit(
        id="e1",
        operation=Operation.DELETION,
        spans=(span_c,),
        information_change=InformationChange.LESS,
        classification=Classification(
            polarity=Polarity.QUALITY,
            quality_type="generalization",
            error_types=("bad_deletion",),
            rating=1,
        ),
    )
    assert "classification.types" in codes(validate_edit(both_types, simple_pair, typology))
    empty_error = Edit(
        id="e2",
        operation=Operation.DELETION,
        spans=(span_c,),
        information_change=InformationChange.LESS,
        classification=Classification(polarity=Polarity.ERROR, rating=1),
    )
    assert "classification.types" in codes(validate_edit(empty_error, simple_pair, typology))
    trivial_with_type = Edit(
        id="e3",
        operation=Operation.DELETION,
        spans=(span_c,),
        information_change=InformationChange.SAME,
        classification=Classification(polarity=Polarity.TRIVIAL, quality_type="paraphrase"),
    )
    assert "classification.types" in codes(validate_edit(trivial_with_type, simple_pair, typology))


def test_rating_rules(simple_pair, typology):
    span_c = token_span(simple_pair, Side.COMPLEX, 1)
    bad_rating = Edit(
        id="e1",
        operation=Operation.DELETION,
        spans=(span_c,),
        information_change=InformationChange.LESS,
        classification=Classification(
            polarity=Polarity.QUALITY, quality_type="generalization", rating=5
        ),
    )
    assert "classification.rating" in codes(validate_edit(bad_rating, simple_pair, typology))
    rated_trivial = Edit(
        id="e2",
        operation=Operation.DELETION,
        spans=(span_c,),
        information_change=InformationChange.SAME,
        classification=Classification(polarity=Polarity.TRIVIAL, rating=1),
    )
    assert "classification.rating" in codes(validate_edit(rated_trivial, simple_pair, typology))


def test_type_operation_compatibility(simple_pair, typology):
    # a deletion can never carry an insertion-only error type
    edit = error_edit(
        "e1",
        Operation.DELETION,
        [token_span(simple_pair, Side.COMPLEX, 1)],
        ["factual_error"],
        information_change=InformationChange.LESS,
    )
    violations = validate_edit(edit, simple_pair, typology)
    assert "classification.operation" in codes(violations)
    assert "classification.information" in codes(violations)


def test_elaboration_requires_more_information(simple_pair, typology):
    edit = quality_edit(
        "e1",
        Operation.INSERTION,
        [token_span(simple_pair, Side.SIMPLIFIED, 1)],
        "elaboration",
        information_change=InformationChange.SAME,
    )
    assert "classification.information" in codes(validate_edit(edit, simple_pair, typology))
    ok = quality_edit(
        "e2",
        Operation.INSERTION,
        [token_span(simple_pair, Side.SIMPLIFIED, 1)],
        "elaboration",
        information_change=InformationChange.MORE,
    )
    assert validate_edit(ok, simple_pair, typology) == []


def test_classified_edit_requires_information_change(simple_pair, typology):
    edit = quality_edit(
        "e1",
        Operation.SUBSTITUTION,
        [token_span(simple_pair, Side.COMPLEX, 4), token_span(simple_pair, Side.SIMPLIFIED, 2)],
        "paraphrase",
    )
    edit = Edit(
        id=edit.id,
        operation=edit.operation,
        spans=edit.spans,
        classification=edit.classification,
    )
    assert "classification.information_missing" in codes(validate_edit(edit, simple_pair, typology))


def test_trivial_reorder_is_rejected(simple_pair, typology):
    edit = Edit(
        id="e1",
        operation=Operation.REORDER,
        reorder_level=ReorderLevel.WORD,
        spans=(token_span(simple_pair, Side.COMPLEX, 1), token_span(simple_pair, Side.SIMPLIFIED, 1)),
        information_change=InformationChange.SAME,
        classification=Classification(polarity=Polarity.TRIVIAL),
    )
    assert "classification.operation" in codes(validate_edit(edit, simple_pair, typology))


def test_trivial_with_grammar_flag_is_valid(simple_pair, typology):
    edit = trivial_edit(
        "e1", Operation.INSERTION, [token_span(simple_pair, Side.SIMPLIFIED, 1)], grammar=True
    )
    assert validate_edit(edit, simple_pair, typology) == []


def test_multiple_error_types_allowed(simple_pair, typology):
    edit = error_edit(
        "e1",
        Operation.SUBSTITUTION,
        [token_span(simple_pair, Side.COMPLEX, 4), token_span(simple_pair, Side.SIMPLIFIED, 2)],
        ["contradiction", "factual_error"],
        information_change=InformationChange.DIFFERENT,
    )
    assert validate_edit(edit, simple_pair, typology) == []


def test_structure_subtype_only_on_structure_edits(simple_pair, typology):
    edit = Edit(
        id="e1",
        operation=Operation.DELETION,
        spans=(token_span(simple_pair, Side.COMPLEX, 1),),
        structure_subtype="voice",
    )
    assert "structure.subtype" in codes(validate_edit(edit, simple_pair, typology))
    constituent = Edit(
        id="c1", operation=Operation.DELETION, spans=(token_span(simple_pair, Side.COMPLEX, 1),)
    )
    ok = Edit(
        id="s1",
        operation=Operation.STRUCTURE,
        spans=constituent.spans,
        constituents=(constituent,),
        structure_subtype="voice",
    )
    assert validate_edit(ok, simple_pair, typology) == []


def test_duplicate_edit_ids_flagged(simple_pair, typology):
    a = Edit(id="dup", operation=Operation.DELETION, spans=(token_span(simple_pair, Side.COMPLEX, 1),))
    b = Edit(id="dup", operation=Operation.DELETION, spans=(token_span(simple_pair, Side.COMPLEX, 2),))
    assert "edit.duplicate_id" in codes(validate_edits([a, b], simple_pair, typology))


def test_randomized_valid_edits_pass_validation(typology):
    # every edit the shared generators produce satisfies all structural rules,
    # including sides touched = exactly the sides the operation mandates
    import random

    from conftest import random_classified_edit, random_composite, random_pair

    rng = random.Random(321)
    for trial in range(150):
        pair = random_pair(rng, f"v{trial}")
        edit = random_classified_edit(rng, pair, f"v{trial}/e")
        assert validate_edit(edit, pair, typology) == [], (edit, pair.id)
        composite = random_composite(rng, pair, f"v{trial}/s")
        assert validate_edit(composite, pair, typology) == [], (composite, pair.id)


def test_composite_coverage_equals_constituent_union(typology):
    import random

    from salsa_eval.model import tokens_covered
    from conftest import random_composite, random_pair

    rng = random.Random(654)
    for trial in range(100):
        pair = random_pair(rng, f"u{trial}")
        composite = random_composite(rng, pair, f"u{trial}/s", classified=False)
        whole_complex, whole_simplified = tokens_covered(composite, pair)
        union_complex: set = set()
        union_simplified: set = set()
        for constituent in composite.constituents:
            c_idx, s_idx = tokens_covered(constituent, pair)
            union_complex |= c_idx
            union_simplified |= s_idx
        assert whole_complex == union_complex
        assert whole_simplified == union_simplified
