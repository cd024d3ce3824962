"""Compound display documents: ordered sections over a compound unit's members."""

from __future__ import annotations

from ..engine import Store
from ..errors import TemplateReferencesUnknownTarget, UnitNotFound
from ..model import CompoundUnit, StatementUnit, Upri
from ..spec.types import CompoundDisplayTemplate, CompoundKgbbClass
from .labels import display_value, render_unit_label


def render_compound_display(
    store: Store, unit_upri: Upri, template: CompoundDisplayTemplate | None = None
) -> dict:
    unit = store.unit(unit_upri)
    if not isinstance(unit, CompoundUnit):
        raise UnitNotFound(f"{unit_upri!r} is not a compound unit")
    cls = store.class_of_unit(unit)
    if template is None:
        if not isinstance(cls, CompoundKgbbClass) or not cls.display_templates:
            template = CompoundDisplayTemplate(upri=f"{unit_upri}/display/auto", sections=[])
        else:
            template = cls.display_templates[0]

    association_targets = {
        node.target
        for node in store.spec.graph.association_nodes
        if node.source == unit.meta.kgbb_uri
    }
    members = [
        m
        for m in (store.units.get(u) for u in unit.has_associated_semantic_unit)
        if m is not None and not m.meta.deleted
    ]

    doc: dict = {
        "headline": {
            "unit": unit_upri,
            "label": unit.meta.label,
            "subject": None
            if unit.meta.has_semantic_unit_subject is None
            else display_value(store, unit.meta.has_semantic_unit_subject),
        },
        "sections": [],
        "links": [
            {"unit": linked, "label": store.units[linked].meta.label}
            for linked in unit.has_linked_semantic_unit
            if linked in store.units and not store.units[linked].meta.deleted
        ],
    }
    for section in template.sections:
        if section.target is not None and section.target not in association_targets:
            raise TemplateReferencesUnknownTarget(
                f"display section {section.title!r} references {section.target!r}, which is "
                f"not an association target of {unit.meta.kgbb_uri!r}"
            )
        items = []
        for m in members:
            if section.target is not None and m.meta.kgbb_uri != section.target:
                continue
            if isinstance(m, StatementUnit):
                items.append({"unit": m.upri, "label": render_unit_label(store, m.upri)})
            else:
                items.append({"unit": m.upri, "label": m.meta.label})
        entry: dict = {"title": section.title, "items": items}
        if not items and section.placeholder:
            entry["placeholder"] = section.placeholder
        doc["sections"].append(entry)
    return doc
