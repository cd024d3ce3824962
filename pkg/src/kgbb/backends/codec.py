"""Flat record form of store objects, shared by the table and property-graph codecs."""

from __future__ import annotations

from ..errors import SchemaMismatch
from ..model import (
    CompoundQuestionUnit,
    CompoundUnit,
    ConstraintNode,
    Literal,
    LiteralBinding,
    ObjectPositionInstance,
    QuestionOp,
    QuestionUnit,
    Resource,
    ResourceBinding,
    SemanticUnitMeta,
    StatementUnit,
    VersionNode,
    WildcardBinding,
)

META_FIELDS = [
    "label",
    "types",
    "has_semantic_unit_subject",
    "kgbb_uri",
    "creator",
    "creation_date",
    "created_with_application",
    "imported_from",
    "import_date",
    "curator",
    "curation_date",
    "deleted_by",
    "deletion_date",
    "data_production_metadata",
    "version_ids",
    "dataset_unit_ids",
    "editable",
]


def meta_to_record(meta: SemanticUnitMeta) -> dict:
    return {name: getattr(meta, name) for name in META_FIELDS}


def record_to_meta(record: dict) -> SemanticUnitMeta:
    return SemanticUnitMeta(
        label=record.get("label", ""),
        types=list(record.get("types") or []),
        kgbb_uri=record.get("kgbb_uri", ""),
        creator=record.get("creator", ""),
        creation_date=record.get("creation_date", ""),
        created_with_application=record.get("created_with_application", ""),
        has_semantic_unit_subject=record.get("has_semantic_unit_subject"),
        imported_from=record.get("imported_from"),
        import_date=record.get("import_date"),
        curator=record.get("curator"),
        curation_date=record.get("curation_date"),
        deleted_by=record.get("deleted_by"),
        deletion_date=record.get("deletion_date"),
        data_production_metadata=record.get("data_production_metadata"),
        version_ids=list(record.get("version_ids") or []),
        dataset_unit_ids=list(record.get("dataset_unit_ids") or []),
        editable=bool(record.get("editable", True)),
    )


def instance_to_record(inst: ObjectPositionInstance) -> dict:
    return {
        "upri": inst.upri,
        "position_class": inst.position_class,
        "input_type_label": inst.input_type_label,
        "resource_uri": inst.resource_uri,
        "literal_value": None if inst.literal is None else inst.literal.value,
        "literal_datatype": None if inst.literal is None else inst.literal.datatype,
        "logical_property": inst.logical_property,
        "current_version": inst.current_version,
        "creator": inst.creator,
        "creation_date": inst.creation_date,
        "created_with_application": inst.created_with_application,
        "imported_from": inst.imported_from,
        "version_ids": list(inst.version_ids),
        "dataset_unit_ids": list(inst.dataset_unit_ids),
    }


def record_to_instance(record: dict) -> ObjectPositionInstance:
    literal = None
    if record.get("literal_value") is not None:
        literal = Literal(record["literal_value"], record.get("literal_datatype") or "text")
    return ObjectPositionInstance(
        upri=record["upri"],
        position_class=record["position_class"],
        input_type_label=record.get("input_type_label", ""),
        creator=record.get("creator", ""),
        creation_date=record.get("creation_date", ""),
        created_with_application=record.get("created_with_application", ""),
        resource_uri=record.get("resource_uri"),
        literal=literal,
        logical_property=record.get("logical_property"),
        current_version=bool(record.get("current_version", True)),
        imported_from=record.get("imported_from"),
        version_ids=list(record.get("version_ids") or []),
        dataset_unit_ids=list(record.get("dataset_unit_ids") or []),
    )


def _binding_to_record(binding) -> dict:
    if isinstance(binding, ResourceBinding):
        return {"kind": "resource", "resource": binding.resource}
    if isinstance(binding, WildcardBinding):
        return {"kind": "wildcard", "mode": binding.mode, "class": binding.class_upri}
    if isinstance(binding, LiteralBinding):
        return {
            "kind": "literal",
            "datatype": binding.datatype,
            "equals": binding.equals,
            "minimum": binding.minimum,
            "maximum": binding.maximum,
            "pattern": binding.pattern,
        }
    raise SchemaMismatch(f"unknown binding {binding!r}")


def _record_to_binding(record: dict):
    kind = record.get("kind")
    if kind == "resource":
        return ResourceBinding(resource=record["resource"])
    if kind == "wildcard":
        return WildcardBinding(mode=record["mode"], class_upri=record["class"])
    if kind == "literal":
        return LiteralBinding(
            datatype=record.get("datatype"),
            equals=record.get("equals"),
            minimum=record.get("minimum"),
            maximum=record.get("maximum"),
            pattern=record.get("pattern"),
        )
    raise SchemaMismatch(f"unknown binding kind {kind!r}")


def _tree_to_record(tree: QuestionOp) -> dict:
    return {
        "op": tree.op,
        "children": [
            _tree_to_record(c) if isinstance(c, QuestionOp) else c for c in tree.children
        ],
    }


def _record_to_tree(record: dict) -> QuestionOp:
    return QuestionOp(
        op=record.get("op", "AND"),
        children=[
            _record_to_tree(c) if isinstance(c, dict) else c
            for c in record.get("children") or []
        ],
    )


def unit_to_record(unit) -> dict:
    record = {"upri": unit.upri, "meta": meta_to_record(unit.meta)}
    if isinstance(unit, StatementUnit):
        record["unit_kind"] = "statement"
        record.update(
            {
                "subject": unit.subject,
                "category": unit.category,
                "negated": unit.negated,
                "based_on_graph_pattern": unit.based_on_graph_pattern,
                "license": unit.license,
                "logical_framework": unit.logical_framework,
                "access_restricted_to": unit.access_restricted_to,
                "confidence_level": unit.confidence_level,
                "validity_start_date": unit.validity_start_date,
                "validity_end_date": unit.validity_end_date,
                "references": list(unit.references),
                "object_described_by_semantic_unit": list(unit.object_described_by_semantic_unit),
                "constraint_nodes": [
                    {"constraint": c.has_constraint, "position": c.applies_to_object_position}
                    for c in unit.constraint_nodes
                ],
                "positions": [instance_to_record(i) for i in unit.positions],
            }
        )
    elif isinstance(unit, CompoundUnit):
        record["unit_kind"] = "compound"
        record.update(
            {
                "compound_kind": unit.kind,
                "has_associated_semantic_unit": list(unit.has_associated_semantic_unit),
                "has_linked_semantic_unit": list(unit.has_linked_semantic_unit),
            }
        )
    elif isinstance(unit, QuestionUnit):
        record["unit_kind"] = "question"
        record.update(
            {
                "based_on_statement_kgbb": unit.based_on_statement_kgbb,
                "mode": unit.mode,
                "subject_binding": None
                if unit.subject_binding is None
                else _binding_to_record(unit.subject_binding),
                "bindings": {k: _binding_to_record(v) for k, v in unit.bindings.items()},
            }
        )
    elif isinstance(unit, CompoundQuestionUnit):
        record["unit_kind"] = "compound-question"
        record["tree"] = _tree_to_record(unit.tree)
    else:
        raise SchemaMismatch(f"unknown unit type {type(unit).__name__}")
    return record


def record_to_unit(record: dict):
    kind = record.get("unit_kind")
    meta = record_to_meta(record.get("meta") or {})
    upri = record["upri"]
    if kind == "statement":
        return StatementUnit(
            upri=upri,
            meta=meta,
            subject=record.get("subject", ""),
            category=record.get("category", "assertional"),
            based_on_graph_pattern=record.get("based_on_graph_pattern", ""),
            license=record.get("license", ""),
            logical_framework=record.get("logical_framework", ""),
            negated=bool(record.get("negated", False)),
            object_described_by_semantic_unit=list(
                record.get("object_described_by_semantic_unit") or []
            ),
            constraint_nodes=[
                ConstraintNode(c["constraint"], c["position"])
                for c in record.get("constraint_nodes") or []
            ],
            access_restricted_to=record.get("access_restricted_to"),
            confidence_level=record.get("confidence_level"),
            validity_start_date=record.get("validity_start_date"),
            validity_end_date=record.get("validity_end_date"),
            references=list(record.get("references") or []),
            positions=[record_to_instance(r) for r in record.get("positions") or []],
        )
    if kind == "compound":
        return CompoundUnit(
            upri=upri,
            meta=meta,
            kind=record.get("compound_kind", "item"),
            has_associated_semantic_unit=list(record.get("has_associated_semantic_unit") or []),
            has_linked_semantic_unit=list(record.get("has_linked_semantic_unit") or []),
        )
    if kind == "question":
        return QuestionUnit(
            upri=upri,
            meta=meta,
            based_on_statement_kgbb=record.get("based_on_statement_kgbb", ""),
            subject_binding=None
            if record.get("subject_binding") is None
            else _record_to_binding(record["subject_binding"]),
            bindings={k: _record_to_binding(v) for k, v in (record.get("bindings") or {}).items()},
            mode=record.get("mode", "list"),
        )
    if kind == "compound-question":
        return CompoundQuestionUnit(
            upri=upri, meta=meta, tree=_record_to_tree(record.get("tree") or {})
        )
    raise SchemaMismatch(f"unknown unit kind {kind!r}", record=str(record.get("upri")))


def resource_to_record(res: Resource) -> dict:
    return {
        "upri": res.upri,
        "kind": res.kind,
        "class_affiliation": res.class_affiliation,
        "label": res.label,
    }


def record_to_resource(record: dict) -> Resource:
    return Resource(
        upri=record["upri"],
        kind=record.get("kind", "named-individual"),
        class_affiliation=record.get("class_affiliation"),
        label=record.get("label"),
    )


def version_to_record(v: VersionNode) -> dict:
    return {
        "upri": v.upri,
        "of_unit": v.of_unit,
        "creation_date": v.creation_date,
        "creator": v.creator,
        "previous_version": v.previous_version,
        "content_id": v.content_id,
    }


def record_to_version(record: dict) -> VersionNode:
    return VersionNode(
        upri=record["upri"],
        of_unit=record.get("of_unit", ""),
        creation_date=record.get("creation_date", ""),
        creator=record.get("creator", ""),
        previous_version=record.get("previous_version"),
        content_id=record.get("content_id"),
    )
