"""Dump loaded specs (or single classes) back to the YAML document form."""

from __future__ import annotations

import yaml

from .types import AppSpec, CompoundKgbbClass


def class_to_dict(cls) -> dict:
    if isinstance(cls, CompoundKgbbClass):
        out = {
            "id": cls.upri,
            "kind": "compound",
            "compound_kind": cls.compound_kind,
            "label": cls.label,
        }
        if cls.description:
            out["description"] = cls.description
        if cls.parent:
            out["parent"] = cls.parent
        if cls.manages:
            out["manages"] = cls.manages
        if cls.subject_constraint:
            out["subject_constraint"] = cls.subject_constraint
        if cls.display_templates:
            out["display_templates"] = [
                {
                    "id": t.upri,
                    "sections": [
                        {
                            "title": s.title,
                            **({"target": s.target} if s.target else {}),
                            **({"placeholder": s.placeholder} if s.placeholder else {}),
                        }
                        for s in t.sections
                    ],
                }
                for t in cls.display_templates
            ]
        return out

    out = {
        "id": cls.upri,
        "kind": "statement",
        "label": cls.label,
        "manages": cls.manages,
        "predicate_label": cls.predicate_label,
        "subject_label": cls.subject_label,
    }
    if cls.description:
        out["description"] = cls.description
    if cls.predicate_definition:
        out["predicate_definition"] = cls.predicate_definition
    if cls.parent:
        out["parent"] = cls.parent
    if cls.subject_constraint:
        out["subject_constraint"] = cls.subject_constraint
    if cls.lexical_only:
        out["lexical"] = True
    out["positions"] = [_position_to_dict(p) for p in cls.positions]
    if cls.dynamic_label_templates:
        out["dynamic_labels"] = dict(cls.dynamic_label_templates)
    if cls.question_label_templates:
        out["question_labels"] = dict(cls.question_label_templates)
    if cls.mind_map_template:
        out["mind_map"] = {
            "hub": cls.mind_map_template.hub_label,
            "edges": dict(cls.mind_map_template.edge_labels),
        }
    if cls.access_templates:
        out["access_templates"] = [
            {
                "id": t.upri,
                "format": t.format,
                **({"family": t.family} if t.family else {}),
                "mapping": [{"source": m.source, "target": m.target} for m in t.mapping],
                **(
                    {
                        "fresh_nodes": [
                            {
                                "id": r.node_id,
                                "class": r.target_class,
                                **({"attach_to": r.attach_to} if r.attach_to else {}),
                                **({"predicate": r.predicate} if r.predicate else {}),
                            }
                            for r in t.fresh_node_rules
                        ]
                    }
                    if t.fresh_node_rules
                    else {}
                ),
            }
            for t in cls.access_templates
            if t.format != "owl"  # the OWL template is derived, not authored
        ]
        if not out["access_templates"]:
            del out["access_templates"]
    if cls.import_templates:
        out["import_templates"] = [
            {
                "id": t.upri,
                "columns": dict(t.column_map),
                **({"constants": dict(t.constants)} if t.constants else {}),
            }
            for t in cls.import_templates
        ]
    if cls.use_with_ontology:
        out["use_with_ontology"] = list(cls.use_with_ontology)
    return out


def _position_to_dict(pos) -> dict:
    out = {
        "id": pos.upri,
        "label": pos.thematic_label,
        "type": pos.object_type,
        "required": pos.required,
    }
    if pos.description:
        out["description"] = pos.description
    if pos.object_type == "resource":
        if pos.resource_constraint:
            out["constraint"] = pos.resource_constraint
    else:
        lc = pos.literal_constraint
        constraint = {"datatype": lc.datatype}
        if lc.minimum is not None:
            constraint["min"] = lc.minimum
        if lc.maximum is not None:
            constraint["max"] = lc.maximum
        if lc.pattern is not None:
            constraint["pattern"] = lc.pattern
        out["constraint"] = constraint
    if pos.logical_properties:
        out["logical_properties"] = list(pos.logical_properties)
    return out


def spec_to_yaml(spec: AppSpec, classes: list | None = None) -> str:
    """Serialize a spec (or a subset of its classes) to YAML document text."""
    from .types import BUILTIN_INSTANCES, builtin_classes

    builtin = set(builtin_classes())
    doc: dict = {"application": spec.graph.application_upri}
    if spec.ontology.parents:
        doc["ontology"] = [
            {
                "id": upri,
                **({"label": spec.ontology.labels[upri]} if upri in spec.ontology.labels else {}),
                **({"parent": parent} if parent else {}),
            }
            for upri, parent in spec.ontology.parents.items()
        ]
    chosen = classes if classes is not None else [
        c for cid, c in spec.taxonomy.items() if cid not in builtin
    ]
    doc["classes"] = [class_to_dict(c) for c in chosen]
    doc["instances"] = [
        {"id": inst, "class": cls}
        for inst, cls in spec.graph.kgbb_instances.items()
        if inst not in BUILTIN_INSTANCES
    ]
    if spec.graph.association_nodes:
        doc["associations"] = [
            {
                "source": n.source,
                "target": n.target,
                "min_count": n.min_count,
                "max_count": n.max_count,
                **(
                    {"carry_over_subject_range_constraint_to": list(n.carry_over_subject_range_constraint_to)}
                    if n.carry_over_subject_range_constraint_to
                    else {}
                ),
            }
            for n in spec.graph.association_nodes
        ]
    if spec.graph.link_nodes:
        doc["links"] = [
            {
                "linking": n.linking,
                "target": n.target,
                "use_as_subject": n.use_as_subject,
                "min_count": n.min_count,
                "max_count": n.max_count,
                **({"if_object": n.if_object} if n.if_object else {}),
            }
            for n in spec.graph.link_nodes
        ]
    if spec.graph.reference_nodes:
        doc["references"] = [
            {"source": n.source, "target": n.target, "min_count": n.min_count, "max_count": n.max_count}
            for n in spec.graph.reference_nodes
        ]
    if spec.graph.data_entry_starting_points:
        doc["starting_points"] = list(spec.graph.data_entry_starting_points)
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)
