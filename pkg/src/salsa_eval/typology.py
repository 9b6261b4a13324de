"""Edit type catalog and the decision tree that assigns a type from 3-4 answers.

The catalog is data, not code: it ships as ``data/typology.json`` and is
schema-validated on load, so an alternative type decomposition is a catalog
edit rather than a code change.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator, Sequence, Union

from .errors import CatalogError, ClassificationPathError
from .model import Family, InformationChange, Operation, Polarity

MAX_TREE_DEPTH = 4


@dataclass(frozen=True)
class TypeDef:
    id: str
    name: str
    family: Family
    polarity: Polarity
    operations: frozenset[Operation]
    information_changes: frozenset[InformationChange]


@dataclass(frozen=True)
class Leaf:
    type_id: str


@dataclass(frozen=True)
class Question:
    name: str
    answers: tuple[tuple[str, Union["Question", Leaf]], ...]

    def child(self, answer: str) -> Union["Question", Leaf, None]:
        for key, node in self.answers:
            if key == answer:
                return node
        return None

    def options(self) -> tuple[str, ...]:
        return tuple(key for key, _ in self.answers)


TreeNode = Union[Question, Leaf]


@dataclass(frozen=True)
class Typology:
    """The type catalog plus its decision tree, in catalog order."""

    types: tuple[TypeDef, ...]
    tree: Question
    grammar_flag_id: str = "grammar_error"
    version: int = 1

    def get(self, type_id: str) -> TypeDef | None:
        for t in self.types:
            if t.id == type_id:
                return t
        return None

    def require(self, type_id: str) -> TypeDef:
        t = self.get(type_id)
        if t is None:
            raise CatalogError(f"unknown edit type '{type_id}'")
        return t

    def __contains__(self, type_id: str) -> bool:
        return self.get(type_id) is not None

    def index(self, type_id: str) -> int:
        """Catalog position, used as the deterministic tie-break order."""
        for i, t in enumerate(self.types):
            if t.id == type_id:
                return i
        raise CatalogError(f"unknown edit type '{type_id}'")

    def of_polarity(self, polarity: Polarity) -> tuple[TypeDef, ...]:
        return tuple(t for t in self.types if t.polarity is polarity)

    def paths(self) -> Iterator[tuple[tuple[str, ...], str]]:
        """All (answer path, type id) walks through the decision tree."""

        def rec(node: TreeNode, prefix: tuple[str, ...]) -> Iterator[tuple[tuple[str, ...], str]]:
            if isinstance(node, Leaf):
                yield prefix, node.type_id
                return
            for answer, child in node.answers:
                yield from rec(child, prefix + (answer,))

        yield from rec(self.tree, ())


def classify(answers: Sequence[str], typology: Typology) -> str:
    """Walk the decision tree with an ordered answer list and return the leaf type.

    The walk must land exactly on a leaf; any answer with no matching branch
    raises :class:`ClassificationPathError` naming the question it broke at.
    """
    node: TreeNode = typology.tree
    for answer in answers:
        if isinstance(node, Leaf):
            raise ClassificationPathError(
                f"answer '{answer}' given after reaching type '{node.type_id}'", answer=answer
            )
        child = node.child(answer)
        if child is None:
            raise ClassificationPathError(
                f"question '{node.name}' has no branch for answer '{answer}' "
                f"(expected one of: {', '.join(node.options())})",
                question=node.name,
                answer=answer,
            )
        node = child
    if not isinstance(node, Leaf):
        raise ClassificationPathError(
            f"answers exhausted at question '{node.name}'", question=node.name
        )
    return node.type_id


def _parse_tree(obj: object, path: str, type_ids: set[str], depth: int) -> TreeNode:
    if not isinstance(obj, dict):
        raise CatalogError(f"{path}: expected an object")
    if "type" in obj:
        type_id = obj["type"]
        if type_id not in type_ids:
            raise CatalogError(f"{path}.type: unknown type id '{type_id}'")
        return Leaf(type_id=type_id)
    if "question" not in obj or "answers" not in obj:
        raise CatalogError(f"{path}: node needs either 'type' or 'question' + 'answers'")
    if depth >= MAX_TREE_DEPTH:
        raise CatalogError(f"{path}: decision tree deeper than {MAX_TREE_DEPTH} questions")
    answers = obj["answers"]
    if not isinstance(answers, dict) or not answers:
        raise CatalogError(f"{path}.answers: expected a non-empty object")
    children = tuple(
        (str(answer), _parse_tree(child, f"{path}.answers.{answer}", type_ids, depth + 1))
        for answer, child in answers.items()
    )
    return Question(name=str(obj["question"]), answers=children)


def _parse_enum(cls, value, path: str):
    try:
        return cls(value)
    except ValueError:
        valid = ", ".join(m.value for m in cls)
        raise CatalogError(f"{path}: '{value}' is not one of: {valid}") from None


def load_typology(data: dict) -> Typology:
    """Validate and build a typology from its JSON document form."""
    raw_types = data.get("types")
    if not isinstance(raw_types, list) or not raw_types:
        raise CatalogError("types: expected a non-empty list")
    types: list[TypeDef] = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_types):
        path = f"types[{i}]"
        if not isinstance(raw, dict):
            raise CatalogError(f"{path}: expected an object")
        type_id = raw.get("id")
        if not isinstance(type_id, str) or not type_id:
            raise CatalogError(f"{path}.id: expected a non-empty string")
        if type_id in seen:
            raise CatalogError(f"{path}.id: duplicate type id '{type_id}'")
        seen.add(type_id)
        ops = raw.get("operations", [])
        ics = raw.get("information_changes", [])
        types.append(
            TypeDef(
                id=type_id,
                name=str(raw.get("name", type_id)),
                family=_parse_enum(Family, raw.get("family"), f"{path}.family"),
                polarity=_parse_enum(Polarity, raw.get("polarity"), f"{path}.polarity"),
                operations=frozenset(
                    _parse_enum(Operation, op, f"{path}.operations") for op in ops
                ),
                information_changes=frozenset(
                    _parse_enum(InformationChange, ic, f"{path}.information_changes") for ic in ics
                ),
            )
        )
    tree_obj = data.get("decision_tree")
    if tree_obj is None:
        raise CatalogError("decision_tree: missing")
    tree = _parse_tree(tree_obj, "decision_tree", seen, depth=0)
    if isinstance(tree, Leaf):
        raise CatalogError("decision_tree: root must be a question")
    typology = Typology(
        types=tuple(types),
        tree=tree,
        grammar_flag_id=str(data.get("grammar_flag", {}).get("id", "grammar_error")),
        version=int(data.get("version", 1)),
    )
    reachable = {type_id for _, type_id in typology.paths()}
    missing = [t.id for t in typology.types if t.id not in reachable]
    if missing:
        raise CatalogError(f"decision_tree: types unreachable from any leaf: {', '.join(missing)}")
    return typology


def typology_to_dict(typology: Typology) -> dict:
    def node_to_dict(node: TreeNode) -> dict:
        if isinstance(node, Leaf):
            return {"type": node.type_id}
        return {
            "question": node.name,
            "answers": {answer: node_to_dict(child) for answer, child in node.answers},
        }

    return {
        "version": typology.version,
        "grammar_flag": {"id": typology.grammar_flag_id},
        "types": [
            {
                "id": t.id,
                "name": t.name,
                "family": t.family.value,
                "polarity": t.polarity.value,
                "operations": sorted(op.value for op in t.operations),
                "information_changes": sorted(ic.value for ic in t.information_changes),
            }
            for t in typology.types
        ],
        "decision_tree": node_to_dict(typology.tree),
    }


@lru_cache(maxsize=1)
def default_typology() -> Typology:
    """The catalog shipped with the package (21 types plus the grammar flag)."""
    text = resources.files("salsa_eval").joinpath("data/typology.json").read_text("utf-8")
    return load_typology(json.loads(text))


def load_typology_file(path: str) -> Typology:
    with open(path, encoding="utf-8") as f:
        return load_typology(json.load(f))
