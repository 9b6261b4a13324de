"""Catalog integrity and decision-tree classification."""

import pytest

from salsa_eval.errors import CatalogError, ClassificationPathError
from salsa_eval.model import Family, Polarity
from salsa_eval.typology import (
    MAX_TREE_DEPTH,
    classify,
    default_typology,
    load_typology,
    typology_to_dict,
)


@pytest.fixture(scope="module")
def typology():
    return default_typology()


def test_catalog_has_21_types(typology):
    assert len(typology.types) == 21
    assert len(typology.of_polarity(Polarity.ERROR)) == 12
    assert len(typology.of_polarity(Polarity.QUALITY)) + len(
        typology.of_polarity(Polarity.TRIVIAL)
    ) == 9
    assert typology.grammar_flag_id == "grammar_error"
    assert typology.grammar_flag_id not in typology


def test_families_partition(typology):
    by_family = {f: [t.id for t in typology.types if t.family is f] for f in Family}
    assert len(by_family[Family.CONCEPTUAL]) == 8
    assert len(by_family[Family.SYNTACTIC]) == 8
    assert len(by_family[Family.LEXICAL]) == 5


@pytest.mark.parametrize(
    "answers,expected",
    [
        (("substitution", "same", "positive"), "paraphrase"),
        (("insertion", "more", "positive"), "elaboration"),
        (("deletion", "less", "negative"), "bad_deletion"),
        (("deletion", "less", "positive"), "generalization"),
        (("insertion", "same"), "trivial_insertion"),
        (("deletion", "same"), "trivial_deletion"),
        (("reorder", "word", "positive"), "word_reorder"),
        (("reorder", "component", "negative"), "bad_component_reorder"),
        (("split", "positive"), "sentence_split"),
        (("structure", "negative"), "bad_structure"),
        (("substitution", "same", "negative"), "complex_wording"),
        (("substitution", "less", "negative", "coreference"), "coreference"),
        (("insertion", "more", "negative", "repetition"), "repetition"),
        (("substitution", "different", "information_rewrite"), "information_rewrite"),
    ],
)
def test_classify_paths(typology, answers, expected):
    assert classify(answers, typology) == expected


def test_classify_is_pure(typology):
    for answers, expected in list(typology.paths()):
        assert classify(answers, typology) == expected
        assert classify(answers, typology) == expected


def test_all_types_reachable_within_four_questions(typology):
    reachable = set()
    for answers, type_id in typology.paths():
        assert len(answers) <= MAX_TREE_DEPTH
        reachable.add(type_id)
    assert reachable == {t.id for t in typology.types}


def test_classify_bad_answer_names_question(typology):
    with pytest.raises(ClassificationPathError) as excinfo:
        classify(("substitution", "sideways"), typology)
    assert excinfo.value.question == "information_change"
    assert excinfo.value.answer == "sideways"


def test_classify_incomplete_walk_errors(typology):
    with pytest.raises(ClassificationPathError) as excinfo:
        classify(("substitution", "same"), typology)
    assert excinfo.value.question == "impact"


def test_classify_overlong_walk_errors(typology):
    with pytest.raises(ClassificationPathError):
        classify(("split", "positive", "positive"), typology)


def test_round_trip_through_dict(typology):
    rebuilt = load_typology(typology_to_dict(typology))
    assert [t.id for t in rebuilt.types] == [t.id for t in typology.types]
    assert dict(rebuilt.paths()) == dict(typology.paths())


def test_catalog_rejects_unknown_leaf_type():
    doc = typology_to_dict(default_typology())
    doc["decision_tree"]["answers"]["split"]["answers"]["positive"] = {"type": "nope"}
    with pytest.raises(CatalogError, match="unknown type id"):
        load_typology(doc)


def test_catalog_rejects_unreachable_type():
    doc = typology_to_dict(default_typology())
    doc["types"].append(
        {
            "id": "extra",
            "name": "Extra",
            "family": "lexical",
            "polarity": "error",
            "operations": ["substitution"],
            "information_changes": ["same"],
        }
    )
    with pytest.raises(CatalogError, match="unreachable"):
        load_typology(doc)


def test_catalog_rejects_deep_tree():
    doc = typology_to_dict(default_typology())
    node = {"type": "paraphrase"}
    for i in range(5):
        node = {"question": f"q{i}", "answers": {"a": node}}
    doc["decision_tree"]["answers"]["split"]["answers"]["positive"] = node
    with pytest.raises(CatalogError, match="deeper"):
        load_typology(doc)


def test_catalog_rejects_duplicate_ids():
    doc = typology_to_dict(default_typology())
    doc["types"].append(dict(doc["types"][0]))
    with pytest.raises(CatalogError, match="duplicate"):
        load_typology(doc)
