"""Access templates: schema crosswalks from the storage model to other patterns."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .. import vocab
from ..engine import Store
from ..errors import UnitNotFound, UnmappedRequiredPosition
from ..model import Literal, StatementUnit, Triple, Upri, mint_upri
from ..spec.types import AccessTemplate, StatementKgbbClass


@dataclass
class AccessOutput:
    format: str
    triples: list[Triple] = field(default_factory=list)
    document: dict | None = None
    text: str | None = None

    def payload_values(self) -> list[str]:
        """Multiset of mapped values (literals and resource UPRIs, fresh nodes excluded)."""
        if self.triples:
            return sorted(
                t.object.value if isinstance(t.object, Literal) else t.object
                for t in self.triples
                if t.predicate != vocab.TYPE
                and not str(t.object).startswith(vocab.BASE + "fresh:")
            )
        if self.document is not None:
            return sorted(str(v) for v in self.document.values())
        return []


def find_access_template(store: Store, unit_upri: Upri, selector: str) -> AccessTemplate:
    """Template by id, or by family tag, from the unit's class (incl. inherited)."""
    unit = store.unit(unit_upri)
    cls = store.class_of_unit(unit)
    if not isinstance(cls, StatementKgbbClass):
        raise UnitNotFound(f"unit {unit_upri!r} has no statement KGBB class")
    for template in cls.access_templates:
        if template.upri == selector:
            return template
    for template in cls.access_templates:
        if template.family == selector:
            return template
    if selector in ("owl", f"{cls.upri}/access/owl"):
        from ..spec.owl import derive_owl_access_template

        return derive_owl_access_template(cls)
    raise UnitNotFound(f"class {cls.upri!r} has no access template {selector!r}")


def apply_access_template(store: Store, unit_upri: Upri, template: AccessTemplate) -> AccessOutput:
    unit = store.unit(unit_upri)
    if not isinstance(unit, StatementUnit):
        raise UnitNotFound(f"{unit_upri!r} is not a statement unit")
    cls = store.class_of_unit(unit)

    current = {i.position_class: i for i in unit.current_instances()}

    def value_of(source: str):
        if source == "subject":
            return unit.subject
        inst = current.get(source)
        if inst is None:
            return None
        return inst.resource_uri if inst.resource_uri is not None else inst.literal

    mapped_sources = {m.source for m in template.mapping}
    for pos in cls.positions:
        if pos.required and pos.upri not in mapped_sources:
            raise UnmappedRequiredPosition(pos.upri)

    if template.format == "owl" and template.owl_properties:
        triples = []
        for prop in template.owl_properties:
            value = value_of(prop.source_position)
            if value is None:
                continue
            triples.append(Triple(unit.subject, prop.name, value))
        return AccessOutput(format="owl", triples=triples)

    # resolve fresh nodes, newly minted on every export
    node_ids: dict[str, str] = {"subject": unit.subject}
    triples: list[Triple] = []
    for rule in template.fresh_node_rules:
        fresh = mint_upri("fresh")
        node_ids[rule.node_id] = fresh
        triples.append(Triple(fresh, vocab.TYPE, rule.target_class))
    for rule in template.fresh_node_rules:
        if rule.attach_to and rule.predicate:
            triples.append(
                Triple(node_ids[rule.attach_to], rule.predicate, node_ids[rule.node_id])
            )

    bound: list[tuple[str, object]] = []
    for entry in template.mapping:
        value = value_of(entry.source)
        if value is None:
            continue
        bound.append((entry.target, value))

    if template.format in ("graph-pattern", "rdf-owl"):
        for target, value in bound:
            node_ref, _, predicate = target.partition(".")
            subject = node_ids.get(node_ref)
            if subject is None:
                raise UnmappedRequiredPosition(node_ref)
            triples.append(Triple(subject, predicate, value))
        return AccessOutput(format=template.format, triples=triples)

    document = {
        target: value.value if isinstance(value, Literal) else value for target, value in bound
    }
    if template.format == "json":
        return AccessOutput(format="json", document=document)
    if template.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(list(document))
        writer.writerow(list(document.values()))
        return AccessOutput(format="csv", document=document, text=out.getvalue())
    raise ValueError(f"unknown access template format {template.format!r}")
