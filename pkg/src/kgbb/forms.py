"""Form descriptors: everything a frontend needs to render input forms.

All input-control information (labels, required flags, constraints, tooltips)
originates here, straight from the effective storage models, so clients never
re-implement schema logic.
"""

from __future__ import annotations

from .errors import UnknownInstance
from .model import Upri
from .spec.types import AppSpec, CompoundKgbbClass, StatementKgbbClass


def form_descriptor(spec: AppSpec, instance: Upri, _visited: frozenset = frozenset()) -> dict:
    cls = spec.class_of_instance(instance)
    if cls is None:
        raise UnknownInstance(f"no KGBB instance {instance!r}")
    descriptor: dict = {
        "instance": instance,
        "class": cls.upri,
        "kind": cls.kind,
        "label": cls.label,
        "description": cls.description,
        "subject": {
            "label": cls.subject_label if isinstance(cls, StatementKgbbClass) else "SUBJECT",
            "type": "resource",
            "required": isinstance(cls, StatementKgbbClass),
            "constraint": _class_constraint(spec, cls.subject_constraint),
            "tooltip": cls.description,
        },
        "fields": [],
        "cascades": [],
    }
    if isinstance(cls, StatementKgbbClass):
        for pos in cls.positions:
            field: dict = {
                "position": pos.upri,
                "label": pos.thematic_label,
                "type": pos.object_type,
                "required": pos.required,
                "tooltip": pos.description,
            }
            if pos.object_type == "resource":
                field["constraint"] = _class_constraint(spec, pos.resource_constraint)
            else:
                lc = pos.literal_constraint
                field["constraint"] = {
                    "kind": "literal",
                    "datatype": lc.datatype,
                    "min": lc.minimum,
                    "max": lc.maximum,
                    "pattern": lc.pattern,
                }
            descriptor["fields"].append(field)

    visited = _visited | {instance}
    if isinstance(cls, CompoundKgbbClass):
        for node in spec.graph.association_nodes:
            if node.source != instance:
                continue
            descriptor["cascades"].append(
                _cascade_entry(spec, "association", node.target, node.min_count, node.max_count, visited)
            )
    if isinstance(cls, StatementKgbbClass):
        for node in spec.graph.link_nodes:
            if node.linking != instance:
                continue
            entry = _cascade_entry(spec, "link", node.target, node.min_count, node.max_count, visited)
            entry["use_as_subject"] = node.use_as_subject
            if node.if_object:
                entry["if_object"] = node.if_object
            descriptor["cascades"].append(entry)
    return descriptor


def _cascade_entry(spec, node_kind, target, min_count, max_count, visited) -> dict:
    entry = {
        "node": node_kind,
        "target": target,
        "min_count": min_count,
        "max_count": max_count,
        "required": min_count > 0,
    }
    if target not in visited:
        entry["form"] = form_descriptor(spec, target, visited)
    return entry


def _class_constraint(spec: AppSpec, constraint) -> dict:
    if constraint is None:
        return {"kind": "resource", "class": None, "class_label": None}
    return {
        "kind": "resource",
        "class": constraint,
        "class_label": spec.ontology.label(constraint),
    }
