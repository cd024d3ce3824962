"""Labeled-property-graph document form (JSON with node/relationship arrays).

Membership follows the property-value convention of graph stores: every node
and relationship carries array properties (statementUnitURI, compoundUnitURI,
listUnitURI, versionID, datasetUnitID) naming the semantic units whose data
graph it belongs to, plus a textual current_version flag, so the generated
membership queries evaluate directly against the document. Nested values
(meta, bindings) stay JSON maps here; a live Neo4j adapter would string-encode
them.
"""

from __future__ import annotations

import json

from ..engine import Store
from ..errors import SchemaMismatch
from ..model import CompoundQuestionUnit, CompoundUnit, QuestionUnit, StatementUnit
from ..spec.types import AppSpec
from . import codec

_MEMBERSHIP_KEYS = ("statementUnitURI", "compoundUnitURI", "listUnitURI", "datasetUnitID")

_STATEMENT_SCALARS = (
    "subject",
    "category",
    "negated",
    "based_on_graph_pattern",
    "license",
    "logical_framework",
    "access_restricted_to",
    "confidence_level",
    "validity_start_date",
    "validity_end_date",
    "references",
    "object_described_by_semantic_unit",
    "constraint_nodes",
)


def _membership_key(unit) -> str:
    if isinstance(unit, CompoundUnit):
        if unit.kind == "list":
            return "listUnitURI"
        if unit.kind == "dataset":
            return "datasetUnitID"
        return "compoundUnitURI"
    return "statementUnitURI"


def export_pg(store: Store) -> dict:
    membership: dict[str, dict[str, list[str]]] = {}

    def member(node_id: str, key: str, unit_upri: str):
        values = membership.setdefault(node_id, {}).setdefault(key, [])
        if unit_upri not in values:
            values.append(unit_upri)

    for upri in sorted(store.units):
        unit = store.units[upri]
        if not isinstance(unit, StatementUnit):
            continue
        member(unit.subject, "statementUnitURI", upri)
        for inst in unit.positions:
            member(inst.upri, "statementUnitURI", upri)
            if inst.resource_uri:
                member(inst.resource_uri, "statementUnitURI", upri)

    def spread_compound(compound_upri: str, key: str, members: list[str], seen: set[str]):
        for m_upri in members:
            if m_upri in seen:
                continue
            seen.add(m_upri)
            m = store.units.get(m_upri)
            if m is None:
                continue
            member(m_upri, key, compound_upri)
            if isinstance(m, StatementUnit):
                member(m.subject, key, compound_upri)
                for inst in m.positions:
                    member(inst.upri, key, compound_upri)
                    if inst.resource_uri:
                        member(inst.resource_uri, key, compound_upri)
            elif isinstance(m, CompoundUnit):
                spread_compound(compound_upri, key, m.has_associated_semantic_unit, seen)

    for upri in sorted(store.units):
        unit = store.units[upri]
        if isinstance(unit, CompoundUnit):
            spread_compound(upri, _membership_key(unit), unit.has_associated_semantic_unit, set())

    nodes: list[dict] = []
    relationships: list[dict] = []

    def base_props(node_id: str, current: bool, version_ids: list[str] | None = None) -> dict:
        props: dict = {"current_version": "true" if current else "false"}
        entry = membership.get(node_id, {})
        for key in _MEMBERSHIP_KEYS:
            props[key] = list(entry.get(key, []))
        props["versionID"] = list(version_ids or [])
        return props

    for upri in sorted(store.resources):
        res = store.resources[upri]
        props = base_props(upri, current=True)
        props.update({k: v for k, v in codec.resource_to_record(res).items() if v is not None})
        nodes.append({"id": upri, "labels": ["Resource", res.kind], "properties": props})

    for upri in sorted(store.versions):
        v = store.versions[upri]
        props = base_props(upri, current=True)
        props.update({k: val for k, val in codec.version_to_record(v).items() if val is not None})
        nodes.append({"id": upri, "labels": ["Version"], "properties": props})
        relationships.append(
            {"start": v.of_unit, "end": upri, "type": "hasVersion", "properties": base_props(upri, True)}
        )
        if v.previous_version:
            relationships.append(
                {
                    "start": upri,
                    "end": v.previous_version,
                    "type": "previousVersion",
                    "properties": base_props(upri, True),
                }
            )

    label_by_kind = {
        "statement": "StatementUnit",
        "compound": "CompoundUnit",
        "question": "QuestionUnit",
        "compound-question": "CompoundQuestionUnit",
    }
    for upri in sorted(store.units):
        unit = store.units[upri]
        record = codec.unit_to_record(unit)
        kind = record["unit_kind"]
        props = base_props(upri, current=not unit.meta.deleted, version_ids=unit.meta.version_ids)
        props["unit_kind"] = kind
        props["meta"] = record["meta"]
        if kind == "statement":
            for key in _STATEMENT_SCALARS:
                props[key] = record[key]
        elif kind == "compound":
            props["compound_kind"] = record["compound_kind"]
            props["has_associated_semantic_unit"] = record["has_associated_semantic_unit"]
            props["has_linked_semantic_unit"] = record["has_linked_semantic_unit"]
        elif kind == "question":
            props["based_on_statement_kgbb"] = record["based_on_statement_kgbb"]
            props["mode"] = record["mode"]
            props["subject_binding"] = record["subject_binding"]
            props["bindings"] = record["bindings"]
        else:
            props["tree"] = record["tree"]
        nodes.append(
            {"id": upri, "labels": [label_by_kind[kind], *unit.meta.types], "properties": props}
        )

        if unit.meta.has_semantic_unit_subject:
            relationships.append(
                {
                    "start": upri,
                    "end": unit.meta.has_semantic_unit_subject,
                    "type": "hasSemanticUnitSubject",
                    "properties": base_props(upri, current=not unit.meta.deleted),
                }
            )
        if isinstance(unit, StatementUnit):
            required = store.required_positions_of(unit)
            for index, inst in enumerate(unit.positions):
                inst_props = base_props(
                    inst.upri, current=inst.current_version, version_ids=inst.version_ids
                )
                inst_props.update(
                    {
                        k: v
                        for k, v in codec.instance_to_record(inst).items()
                        # the flag and version list are already carried as
                        # current_version / versionID in the PG convention
                        if v is not None and k not in ("current_version", "version_ids")
                    }
                )
                inst_props["position_index"] = index
                nodes.append(
                    {
                        "id": inst.upri,
                        "labels": ["ObjectPositionInstance", inst.position_class],
                        "properties": inst_props,
                    }
                )
                edge_props = base_props(
                    inst.upri, current=inst.current_version, version_ids=inst.version_ids
                )
                relationships.append(
                    {
                        "start": unit.subject,
                        "end": inst.upri,
                        "type": "requiredObjectPosition"
                        if inst.position_class in required
                        else "optionalObjectPosition",
                        "properties": edge_props,
                    }
                )
                if inst.resource_uri:
                    relationships.append(
                        {
                            "start": inst.upri,
                            "end": inst.resource_uri,
                            "type": "resourceURI",
                            "properties": dict(edge_props),
                        }
                    )
            for linked in unit.object_described_by_semantic_unit:
                relationships.append(
                    {
                        "start": upri,
                        "end": linked,
                        "type": "objectDescribedBySemanticUnit",
                        "properties": base_props(upri, current=not unit.meta.deleted),
                    }
                )
        elif isinstance(unit, CompoundUnit):
            for i, member_upri in enumerate(unit.has_associated_semantic_unit):
                relationships.append(
                    {
                        "start": upri,
                        "end": member_upri,
                        "type": "hasAssociatedSemanticUnit",
                        "properties": {**base_props(upri, True), "order": i},
                    }
                )
            for member_upri in unit.has_linked_semantic_unit:
                relationships.append(
                    {
                        "start": upri,
                        "end": member_upri,
                        "type": "hasLinkedSemanticUnit",
                        "properties": base_props(upri, True),
                    }
                )

    return {
        "format": "kgbb-property-graph",
        "version": 1,
        "nodes": nodes,
        "relationships": relationships,
    }


def export_pg_json(store: Store) -> str:
    return json.dumps(export_pg(store), indent=2)


def import_pg(doc: dict | str, spec: AppSpec) -> Store:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or doc.get("format") != "kgbb-property-graph":
        raise SchemaMismatch("not a kgbb property-graph document")
    store = Store(spec)
    instance_nodes: list[dict] = []
    unit_nodes: list[dict] = []
    for node in doc.get("nodes", []):
        labels = node.get("labels") or []
        props = node.get("properties") or {}
        if "Resource" in labels:
            store.resources[node["id"]] = codec.record_to_resource(
                {
                    "upri": node["id"],
                    **{k: props.get(k) for k in ("kind", "class_affiliation", "label")},
                }
            )
        elif "Version" in labels:
            store.versions[node["id"]] = codec.record_to_version(
                {
                    "upri": node["id"],
                    **{
                        k: props.get(k)
                        for k in (
                            "of_unit",
                            "creation_date",
                            "creator",
                            "previous_version",
                            "content_id",
                        )
                    },
                }
            )
        elif "ObjectPositionInstance" in labels:
            instance_nodes.append(node)
        elif "unit_kind" in props:
            unit_nodes.append(node)

    instances_by_unit: dict[str, list[dict]] = {}
    for node in instance_nodes:
        props = node["properties"]
        owners = props.get("statementUnitURI") or []
        if len(owners) != 1:
            raise SchemaMismatch(
                "object-position instance must belong to exactly one statement unit",
                record=node["id"],
            )
        record = {"upri": node["id"], **props}
        record["current_version"] = props.get("current_version") == "true"
        record["version_ids"] = list(props.get("versionID") or [])
        record["dataset_unit_ids"] = list(props.get("dataset_unit_ids") or [])
        instances_by_unit.setdefault(owners[0], []).append(record)
    for records in instances_by_unit.values():
        records.sort(key=lambda r: r.get("position_index", 0))

    for node in unit_nodes:
        props = node["properties"]
        kind = props["unit_kind"]
        record: dict = {"upri": node["id"], "unit_kind": kind, "meta": props.get("meta") or {}}
        if kind == "statement":
            for key in _STATEMENT_SCALARS:
                record[key] = props.get(key)
            record["positions"] = instances_by_unit.get(node["id"], [])
        elif kind == "compound":
            record["compound_kind"] = props.get("compound_kind", "item")
            record["has_associated_semantic_unit"] = props.get("has_associated_semantic_unit") or []
            record["has_linked_semantic_unit"] = props.get("has_linked_semantic_unit") or []
        elif kind == "question":
            record["based_on_statement_kgbb"] = props.get("based_on_statement_kgbb")
            record["mode"] = props.get("mode", "list")
            record["subject_binding"] = props.get("subject_binding")
            record["bindings"] = props.get("bindings") or {}
        else:
            record["tree"] = props.get("tree") or {}
        store.units[node["id"]] = codec.record_to_unit(record)

    store.units = {u: store.units[u] for u in sorted(store.units)}
    return store


def evaluate_membership_query(doc: dict, query: str) -> set[str]:
    """Reference evaluator for the generated cypher membership pattern.

    Accepts exactly the emitted shape
    MATCH (n {current_version:"true"}) WHERE ("<upri>" IN n.<prop>) RETURN n
    and returns the matching node ids.
    """
    import re

    m = re.match(
        r'MATCH \(n \{current_version:"true"\}\) WHERE \("(.+)" IN n\.(\w+)\) RETURN n',
        query,
    )
    if not m:
        raise ValueError(f"unsupported query shape: {query!r}")
    upri, prop = m.group(1), m.group(2)
    out = set()
    for node in doc.get("nodes", []):
        props = node.get("properties") or {}
        if props.get("current_version") == "true" and upri in (props.get(prop) or []):
            out.add(node["id"])
    return out
