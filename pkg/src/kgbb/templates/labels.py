"""Dynamic labels: human-readable sentences rendered from a unit's inputs."""

from __future__ import annotations

from .. import templating
from ..engine import Store
from ..errors import UnitNotFound
from ..model import StatementUnit, Upri
from ..spec.types import StatementKgbbClass


def display_value(store: Store, upri: Upri) -> str:
    """Label of a resource, semantic unit, or bare UPRI for display purposes."""
    res = store.resources.get(upri)
    if res is not None and res.label:
        return res.label
    unit = store.units.get(upri)
    if unit is not None:
        return unit.meta.label
    if res is not None and res.class_affiliation is not None:
        affiliation = store.spec.ontology.label(res.class_affiliation)
        if res.kind == "some-instance":
            return f"some {affiliation}"
        if res.kind == "every-instance":
            return f"every {affiliation}"
    if res is not None and res.kind == "class":
        return store.spec.ontology.label(upri)
    return upri


def binding_values(
    store: Store, unit: StatementUnit, version: Upri | None = None
) -> dict[str, str]:
    """Thematic label -> display string for the unit's (current) inputs."""
    cls = store.class_of_unit(unit)
    if not isinstance(cls, StatementKgbbClass):
        raise UnitNotFound(f"unit {unit.upri!r} has no statement KGBB class")
    label_of = {p.upri: p.thematic_label for p in cls.positions}
    values: dict[str, str] = {cls.subject_label: display_value(store, unit.subject)}
    instances = (
        unit.instances_for_version(version) if version is not None else unit.current_instances()
    )
    for inst in instances:
        label = label_of.get(inst.position_class, inst.input_type_label)
        if inst.resource_uri is not None:
            values[label] = display_value(store, inst.resource_uri)
        else:
            values[label] = inst.literal.value
    return values


def render_dynamic_label(
    template: str,
    values: dict[str, str],
    required: set[str] | None = None,
    subject_label: str | None = None,
) -> str:
    return templating.render(template, values, required=required, subject_label=subject_label)


def render_unit_label(
    store: Store, unit_upri: Upri, version: Upri | None = None, template: str | None = None
) -> str:
    unit = store.unit(unit_upri)
    if not isinstance(unit, StatementUnit):
        return unit.meta.label
    cls = store.class_of_unit(unit)
    tmpl = template or cls.dynamic_label_templates.get("default")
    if not tmpl:
        return unit.meta.label
    required = {p.thematic_label for p in cls.positions if p.required}
    return render_dynamic_label(
        tmpl,
        binding_values(store, unit, version),
        required=required,
        subject_label=cls.subject_label,
    )


def render_category_label(store: Store, unit_upri: Upri) -> str:
    """Sentence variant keyed by the unit's statement category.

    Negated units use the class's negation variant when one is declared;
    classes without authored variants fall back on synthesized ones.
    """
    unit = store.unit(unit_upri)
    if not isinstance(unit, StatementUnit):
        return unit.meta.label
    cls = store.class_of_unit(unit)
    templates = dict(cls.dynamic_label_templates)
    missing = [c for c in ("assertional", "contingent", "prototypical", "universal") if c not in templates]
    if missing and "default" in templates:
        resource_labels = {
            p.thematic_label for p in cls.positions if p.object_type == "resource"
        }
        synthesized = templating.synthesize_category_templates(
            templates["default"], cls.subject_label, resource_labels
        )
        for key in missing:
            templates[key] = synthesized[key]
    if unit.negated and "negation" in templates:
        tmpl = templates["negation"]
    else:
        tmpl = templates.get(unit.category) or templates.get("default")
    if not tmpl:
        return unit.meta.label
    return render_dynamic_label(
        tmpl, binding_values(store, unit), subject_label=cls.subject_label
    )
