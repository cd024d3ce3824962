"""Core data model: resources, literals, semantic units, and their data graphs.

Everything here is a plain value object. Instances are treated as immutable
outside the engine module, which is the only place mutation happens.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field

from . import vocab
from .errors import ChoiceRequired, NotApplicable

Upri = str

RESOURCE_KINDS = ("named-individual", "some-instance", "every-instance", "class", "property")
CATEGORIES = ("lexical", "assertional", "contingent", "prototypical", "universal")
COMPOUND_KINDS = (
    "item",
    "instance-item",
    "class-item",
    "item-group",
    "granularity-tree",
    "granular-item-group",
    "context",
    "dataset",
    "list",
)

_RFC3339 = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})$")


def mint_upri(prefix: str = "unit") -> Upri:
    return f"{vocab.BASE}{prefix}:{uuid.uuid4()}"


def affiliation_relation(kind: str) -> str | None:
    """Relation used to record a resource's class affiliation, derivable from kind."""
    return {
        "named-individual": vocab.REL_TYPE,
        "some-instance": vocab.REL_SOME_INSTANCE_OF,
        "every-instance": vocab.REL_EVERY_INSTANCE_OF,
    }.get(kind)


@dataclass
class Resource:
    upri: Upri
    kind: str
    class_affiliation: Upri | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind not in RESOURCE_KINDS:
            raise ValueError(f"unknown resource kind {self.kind!r}")


@dataclass(frozen=True)
class Literal:
    value: str
    datatype: str = "text"

    def parses(self) -> bool:
        try:
            if self.datatype == "float":
                float(self.value)
            elif self.datatype == "integer":
                int(self.value)
            elif self.datatype == "boolean":
                return self.value in ("true", "false")
            elif self.datatype == "date-time":
                return bool(_RFC3339.match(self.value))
        except (TypeError, ValueError):
            return False
        return True  # open datatypes behave like text


@dataclass(frozen=True)
class Triple:
    subject: Upri
    predicate: Upri
    object: Upri | Literal


@dataclass
class SemanticUnitMeta:
    """Per-unit metadata tracked with every semantic unit (slots 1-9)."""

    label: str
    types: list[Upri]
    kgbb_uri: Upri
    creator: Upri
    creation_date: str
    created_with_application: Upri
    has_semantic_unit_subject: Upri | None = None
    imported_from: Upri | None = None
    import_date: str | None = None
    curator: Upri | None = None
    curation_date: str | None = None
    deleted_by: Upri | None = None
    deletion_date: str | None = None
    data_production_metadata: Upri | None = None
    version_ids: list[Upri] = field(default_factory=list)
    dataset_unit_ids: list[Upri] = field(default_factory=list)
    editable: bool = True

    @property
    def deleted(self) -> bool:
        return self.deletion_date is not None


@dataclass
class ConstraintNode:
    has_constraint: str
    applies_to_object_position: Upri


@dataclass
class ObjectPositionInstance:
    """One input event for one syntactic position of one statement unit."""

    upri: Upri
    position_class: Upri
    input_type_label: str
    creator: Upri
    creation_date: str
    created_with_application: Upri
    resource_uri: Upri | None = None
    literal: Literal | None = None
    logical_property: str | None = None
    current_version: bool = True
    imported_from: Upri | None = None
    version_ids: list[Upri] = field(default_factory=list)
    dataset_unit_ids: list[Upri] = field(default_factory=list)

    def __post_init__(self):
        if (self.resource_uri is None) == (self.literal is None):
            raise ValueError("exactly one of resource_uri/literal must be set")

    @property
    def input_value(self) -> Upri | Literal:
        return self.resource_uri if self.resource_uri is not None else self.literal


@dataclass
class StatementUnit:
    upri: Upri
    meta: SemanticUnitMeta
    subject: Upri
    category: str
    based_on_graph_pattern: Upri
    license: Upri = vocab.DEFAULT_LICENSE
    logical_framework: Upri = vocab.DEFAULT_LOGICAL_FRAMEWORK
    negated: bool = False
    object_described_by_semantic_unit: list[Upri] = field(default_factory=list)
    constraint_nodes: list[ConstraintNode] = field(default_factory=list)
    access_restricted_to: Upri | None = None
    confidence_level: Upri | None = None
    validity_start_date: str | None = None
    validity_end_date: str | None = None
    references: list[Upri] = field(default_factory=list)
    positions: list[ObjectPositionInstance] = field(default_factory=list)

    def current_instances(self) -> list[ObjectPositionInstance]:
        return [p for p in self.positions if p.current_version]

    def instances_for_version(self, version: Upri) -> list[ObjectPositionInstance]:
        return [p for p in self.positions if version in p.version_ids]

    def current_instance_of(self, position_class: Upri) -> ObjectPositionInstance | None:
        for p in self.positions:
            if p.position_class == position_class and p.current_version:
                return p
        return None


@dataclass
class CompoundUnit:
    upri: Upri
    meta: SemanticUnitMeta
    kind: str
    has_associated_semantic_unit: list[Upri] = field(default_factory=list)
    has_linked_semantic_unit: list[Upri] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in COMPOUND_KINDS:
            raise ValueError(f"unknown compound kind {self.kind!r}")

    @property
    def ordering(self) -> dict[Upri, int]:
        """Insertion-order index map; meaningful for dataset and list kinds."""
        return {u: i for i, u in enumerate(self.has_associated_semantic_unit)}


@dataclass
class VersionNode:
    upri: Upri
    of_unit: Upri
    creation_date: str
    creator: Upri
    previous_version: Upri | None = None
    content_id: str | None = None  # reserved, unpopulated


@dataclass(frozen=True)
class ResourceBinding:
    """Exact match against one named resource."""

    resource: Upri


@dataclass(frozen=True)
class WildcardBinding:
    """Matches any resource affiliated with (a subclass of) the given class."""

    mode: str  # "some-instance" | "every-instance" | "class"
    class_upri: Upri


@dataclass(frozen=True)
class LiteralBinding:
    datatype: str | None = None
    equals: str | None = None
    minimum: float | None = None
    maximum: float | None = None
    pattern: str | None = None

    @property
    def exact(self) -> bool:
        return self.equals is not None and (
            self.minimum is None and self.maximum is None and self.pattern is None
        )


Binding = ResourceBinding | WildcardBinding | LiteralBinding


@dataclass
class QuestionUnit:
    """A statement-shaped query stored in the graph like any other unit."""

    upri: Upri
    meta: SemanticUnitMeta
    based_on_statement_kgbb: Upri
    subject_binding: Binding | None = None
    bindings: dict[Upri, Binding] = field(default_factory=dict)
    mode: str = "list"  # "boolean" | "list"


@dataclass
class QuestionOp:
    op: str  # "AND" | "OR"
    children: list = field(default_factory=list)  # question Upris or nested QuestionOps


@dataclass
class CompoundQuestionUnit:
    upri: Upri
    meta: SemanticUnitMeta
    tree: QuestionOp = field(default_factory=lambda: QuestionOp("AND"))


def classify_category(subject_kind: str, user_choice: str | None = None) -> str:
    """Pick the statement category forced by the subject's resource kind.

    Named individuals yield assertional statements, classes and every-instance
    resources universal ones. A some-instance subject leaves the choice between
    contingent and prototypical to the caller.
    """
    if subject_kind == "property":
        raise ValueError("statement subjects cannot be property resources")
    if subject_kind == "named-individual":
        return "assertional"
    if subject_kind in ("class", "every-instance"):
        return "universal"
    # some-instance
    if user_choice not in ("contingent", "prototypical"):
        raise ChoiceRequired(
            "a some-instance subject requires choosing 'contingent' or 'prototypical'"
        )
    return user_choice


def allowed_object_resource_kinds(category: str) -> set[str]:
    """Resource kinds admissible in object positions for the given category."""
    if category == "lexical":
        raise NotApplicable("lexical statement units take literal objects only")
    if category == "assertional":
        return {"named-individual"}
    if category == "universal":
        return {"some-instance", "class"}
    if category in ("contingent", "prototypical"):
        return {"some-instance"}
    raise ValueError(f"unknown category {category!r}")


def data_graph(
    unit: StatementUnit,
    required_positions: set[Upri],
    current_only: bool = False,
    version: Upri | None = None,
) -> list[Triple]:
    """Materialize the data graph of a statement unit.

    Each position instance contributes three triples: the subject-to-position
    link, the instance's position-class typing, and the recorded input.
    """
    if version is not None:
        instances = unit.instances_for_version(version)
    elif current_only:
        instances = unit.current_instances()
    else:
        instances = unit.positions
    triples: list[Triple] = []
    for inst in instances:
        link = (
            vocab.REQUIRED_OBJECT_POSITION
            if inst.position_class in required_positions
            else vocab.OPTIONAL_OBJECT_POSITION
        )
        triples.append(Triple(unit.subject, link, inst.upri))
        triples.append(Triple(inst.upri, vocab.TYPE, inst.position_class))
        if inst.resource_uri is not None:
            triples.append(Triple(inst.upri, vocab.RESOURCE_URI, inst.resource_uri))
        else:
            triples.append(Triple(inst.upri, vocab.LITERAL, inst.literal))
    return triples
